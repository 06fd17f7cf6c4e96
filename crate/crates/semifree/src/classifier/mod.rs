//! Constraint pipeline, case enumeration, Fano filter and example catalog.
//!
//! [`evaluate`] runs every rule on one fixed-point description. `verify`
//! uses the full pipeline; enumeration uses the same rules in a cheaper
//! order and stops at the first failure that is not an index rule.

pub mod catalog;
pub mod enumerate;
pub mod fano;
pub mod rules;

use crate::dh::{self, DhProfile, TotalVolume};
use crate::localization::{abbv_sum, contribution_closed_form, contribution_series_oracle};
use crate::model::{betti_string, signature_check, validate, FixedPointData};
use crate::poly::{q, serialize_q, Q};
use crate::report::{ConstraintReport, Rule, Verdict};
use num_traits::Zero;
use rules::{area_positive, index_checks, index_from_extremal, is_index_rule, sphere_constraints, sphere_index_rules, IndexValue};
use serde::Serialize;

pub use catalog::{catalog, catalog_entry, match_fp_class, CatalogEntry, FpMatch};
pub use enumerate::{admissible_dim_pairs, enumerate_case, EnumerationResult, Execution};
pub use fano::{classify_fano, default_fano_table, FanoFamilyRecord};

/// How much of the pipeline to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Every check, oracles and diagnostics included.
    Full,
    /// Gating checks only, stopping at the first non-index failure.
    Search,
}

/// One titled block of checks plus free-form diagnostic lines.
#[derive(Debug, Clone, Serialize)]
pub struct Section {
    pub title: &'static str,
    pub checks: ConstraintReport,
    pub lines: Vec<String>,
}

impl Section {
    fn new(title: &'static str) -> Self {
        Section {
            title,
            checks: ConstraintReport::new(),
            lines: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Evaluation {
    pub betti: [u32; 5],
    pub shape: Option<(u32, u32)>,
    pub index: Option<i64>,
    pub sections: Vec<Section>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<DhProfile>,
    #[serde(serialize_with = "serialize_opt_q")]
    pub profile_volume: Option<Q>,
    pub total_volume: Option<TotalVolume>,
    pub fp_class: Option<FpMatch>,
    /// Set when a search-mode run stopped early.
    pub stopped: bool,
}

fn serialize_opt_q<S: serde::Serializer>(v: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => serialize_q(x, s),
        None => s.serialize_none(),
    }
}

impl Evaluation {
    pub fn passed(&self) -> bool {
        self.sections.iter().all(|s| s.checks.passed())
    }

    pub fn failures(&self) -> Vec<&crate::report::Check> {
        self.sections.iter().flat_map(|s| s.checks.failures()).collect()
    }

    /// No failures outside the index rules.
    pub fn passed_except_index(&self) -> bool {
        !self.stopped && self.failures().iter().all(|c| is_index_rule(c.id))
    }

    pub fn verdict_of(&self, rule: Rule) -> Option<Verdict> {
        self.sections.iter().filter_map(|s| s.checks.verdict_of(rule)).max()
    }
}

/// Runs the constraint pipeline on `data`.
pub fn evaluate(data: &FixedPointData, mode: Mode) -> Evaluation {
    let full = mode == Mode::Full;
    let mut ev = Evaluation {
        betti: data.betti(),
        shape: data.dim_pair().map(|(s, _)| s),
        index: None,
        sections: Vec::new(),
        profile: None,
        profile_volume: None,
        total_volume: None,
        fp_class: None,
        stopped: false,
    };
    // Search mode stops at the first failure that is not an index rule.
    let fatal = |ev: &Evaluation| !full && ev.failures().iter().any(|c| !is_index_rule(c.id));

    let mut s = Section::new("validate");
    s.checks = validate(data);
    s.lines.push(betti_string(&ev.betti));
    let structural_ok = s.checks.passed();
    ev.sections.push(s);
    if !structural_ok {
        ev.stopped = true;
        return ev;
    }

    let mut s = Section::new("localization");
    if full {
        let mut agree = true;
        for c in data.sorted_components() {
            let closed = contribution_closed_form(c).expect("validated");
            let oracle = contribution_series_oracle(c).expect("validated");
            agree &= closed == oracle;
            s.lines.push(format!("{c}: closed form {closed}, series {oracle}"));
        }
        s.checks.check(
            Rule::SeriesOracle,
            agree,
            if agree {
                "every contribution matches its inverted Euler class"
            } else {
                "closed form and series disagree"
            },
        );
    }
    let sum = abbv_sum(&data.components).expect("validated");
    s.checks.check(Rule::Abbv, sum.is_zero(), format!("sum = {sum}"));
    ev.sections.push(s);

    let mut s = Section::new("signature");
    s.checks = signature_check(data);
    ev.sections.push(s);
    if fatal(&ev) {
        ev.stopped = true;
        return ev;
    }

    let mut s = Section::new("sphere rules");
    s.checks = area_positive(data);
    s.checks.extend(sphere_constraints(data));
    ev.sections.push(s);
    if fatal(&ev) {
        ev.stopped = true;
        return ev;
    }

    dh_section(data, &mut ev, full);
    if fatal(&ev) {
        ev.stopped = true;
        return ev;
    }

    let mut s = Section::new("index");
    let mut r = Section::new("index rules");
    match index_from_extremal(data) {
        Ok(IndexValue { value, trace }) => {
            ev.index = Some(value);
            s.lines.push(trace);
            s.checks = index_checks(data, &IndexValue { value, trace: String::new() });
            r.checks = sphere_index_rules(data, value);
        }
        Err(e) => s.checks.skip(Rule::IndexConsistent, e.to_string()),
    }
    ev.sections.push(s);
    ev.sections.push(r);

    if full {
        let mut s = Section::new("fp class");
        let m = match_fp_class(data);
        match &m.entry {
            Some(name) => s.checks.check(
                Rule::FpClass,
                true,
                format!("case {} via `{name}`", m.case.as_deref().unwrap_or("?")),
            ),
            None => s.checks.skip(Rule::FpClass, "unclassified"),
        }
        ev.fp_class = Some(m);
        ev.sections.push(s);
    }
    ev
}

fn dh_section(data: &FixedPointData, ev: &mut Evaluation, full: bool) {
    let mut s = Section::new("duistermaat-heckman");
    let ends = [
        (Rule::DhPositiveMin, dh::near_min_piece(data)),
        (Rule::DhPositiveMax, dh::near_max_piece(data)),
    ];
    for (rule, piece) in ends {
        let Some(piece) = piece else { continue };
        let piece = piece.expect("validated");
        let p = dh::positive_on(&piece.poly, q(piece.lo), q(piece.hi));
        let detail = match p.violation {
            None => format!("{} > 0 on ({},{})", piece.poly, piece.lo, piece.hi),
            Some(v) => format!("{} is not positive near c = {v} in ({},{})", piece.poly, piece.lo, piece.hi),
        };
        s.checks.push(rule, p.verdict, detail);
    }
    if full {
        let identity = dh::two_sided_identity(data).expect("validated");
        s.checks.check(
            Rule::DhTwoSided,
            identity.is_zero(),
            format!("Σ_F R_F = {identity}"),
        );
        let profile = dh::profile(data).expect("validated");
        for piece in &profile.pieces {
            s.lines.push(format!(
                "({},{}): {}   [x = c - ({})]: {}",
                piece.lo,
                piece.hi,
                piece.poly,
                piece.lo,
                piece.from_lower()
            ));
        }
        let total = dh::total_volume(data);
        if identity.is_zero() {
            let pos = dh::positivity_check(&profile);
            s.checks.push(
                Rule::DhPositive,
                pos.verdict,
                match pos.violation {
                    None => "every piece positive on its open interval".to_string(),
                    Some(v) => format!("profile not positive near c = {v}"),
                },
            );
            let vol = profile.volume();
            match total.value() {
                Some(t) => s.checks.check(
                    Rule::DhVolume,
                    t == vol,
                    format!("4∫DH = {vol}, halves give {t}"),
                ),
                None => s.checks.check(Rule::DhVolume, vol > Q::zero(), format!("4∫DH = {vol}")),
            }
            ev.profile_volume = Some(vol);
        }
        match &total {
            TotalVolume::PairAndPlane { k2, value } => {
                s.checks.check(
                    Rule::VolumeByHalves,
                    true,
                    format!("240 + (176 - 16·{k2}) = {value}"),
                );
                let b4 = ev.betti[2] as i64;
                s.checks.push(Rule::B4Bound, dh::b4_bound_check(b4, (0, 4), None), format!("k = {k2}, b4 = {b4}"));
            }
            TotalVolume::TwoPlanes { k_min, k_max, value } => {
                s.checks.check(
                    Rule::VolumeByHalves,
                    true,
                    format!("(176 - 16·{k_min}) + (176 - 16·{k_max}) = {value}"),
                );
                let b4 = ev.betti[2] as i64;
                s.checks.push(
                    Rule::B4Bound,
                    dh::b4_bound_check(b4, (4, 4), Some((*k_min, *k_max))),
                    format!("split ({k_min},{k_max}), b4 = {b4}"),
                );
            }
            TotalVolume::NotComputable { reason } => s.checks.skip(Rule::VolumeByHalves, reason.clone()),
        }
        ev.total_volume = Some(total);
        ev.profile = Some(profile);
    }
    ev.sections.push(s);
}
