//! Index and sphere-map constraint rules.
//!
//! Rules that talk about `M_min`, `M_max` or an interval of levels are
//! applied to the action with `d₁ ≤ d₂`, and to both orientations when
//! `d₁ = d₂`, since either one is then the normal form.

use crate::localization::NormalBundleData;
use crate::model::{ComponentType, FixedComponent, FixedPointData};
use crate::report::{ConstraintReport, Rule};
use num_integer::Integer;

/// The normal-form orientations of `data`, labelled.
pub fn orientations(data: &FixedPointData) -> Vec<(FixedPointData, &'static str)> {
    let (d, flipped) = data.normalized();
    let label = if flipped { "reversed" } else { "as given" };
    match d.dim_pair() {
        Some(((a, b), _)) if a == b => {
            let r = d.reverse_action();
            vec![(d, label), (r, if flipped { "as given" } else { "reversed" })]
        }
        _ => vec![(d, label)],
    }
}

fn gcd_all(values: &[i64]) -> i64 {
    values.iter().fold(0i64, |g, v| g.gcd(v))
}

/// Whether `area` is the symplectic area of some integral class of `F`.
/// The achievable areas are the multiples of the gcd of the generator
/// values; a point only realizes 0.
pub fn realizes(comp: &FixedComponent, area: i64) -> bool {
    let g = gcd_all(&comp.c1_restricted());
    if g == 0 {
        area == 0
    } else {
        area % g == 0
    }
}

fn tag(label: &str, many: bool) -> String {
    if many {
        format!(" ({label})")
    } else {
        String::new()
    }
}

/// `∫ω > 0` on the positive generators of every component.
pub fn area_positive(data: &FixedPointData) -> ConstraintReport {
    let mut r = ConstraintReport::new();
    let bad: Vec<String> = data
        .components
        .iter()
        .filter(|c| c.c1_restricted().iter().any(|v| *v <= 0))
        .map(|c| format!("{} at level {} has areas {:?}", c.kind, c.level(), c.c1_restricted()))
        .collect();
    let detail = if bad.is_empty() {
        "every generator has positive area".to_string()
    } else {
        bad.join("; ")
    };
    r.check(Rule::AreaPositive, bad.is_empty(), detail);
    r
}

fn is_point_with(c: &FixedComponent, w: [i64; 4]) -> bool {
    c.kind == ComponentType::Point && c.weights.sorted().0 == w
}

fn is_lambda1_surface(c: &FixedComponent) -> bool {
    c.kind == ComponentType::CP1 && c.weights.sorted().0 == [-1, 0, 1, 1]
}

/// Sphere-map consequences for symplectic areas inside fixed components.
pub fn sphere_constraints(data: &FixedPointData) -> ConstraintReport {
    let mut r = ConstraintReport::new();
    let views = orientations(data);
    let many = views.len() > 1;
    for (d, label) in &views {
        let (Some(min), Some(max)) = (d.minimum(), d.maximum()) else {
            continue;
        };
        let (lo, hi) = (min.level(), max.level());
        let t = tag(label, many);
        let interior: Vec<&FixedComponent> = d.interior().collect();
        let has_lambda2_point = interior.iter().any(|c| is_point_with(c, [-1, -1, 1, 1]));
        let span = hi - lo;

        if max.dim() == 4 && !d.has_level_in(0, 2) && has_lambda2_point {
            r.check(
                Rule::SphereMaxArea2,
                realizes(max, 2),
                format!("area 2 in M_max with generator areas {:?}{t}", max.c1_restricted()),
            );
        }
        if lo < 0 && !d.has_level_in(lo, 0) && has_lambda2_point {
            r.check(
                Rule::SphereMinArea,
                realizes(min, -lo),
                format!("area {} in M_min with generator areas {:?}{t}", -lo, min.c1_restricted()),
            );
        }
        if max.dim() == 4 && interior.iter().all(|c| is_point_with(c, [-1, -1, 1, 1])) {
            r.check(
                Rule::SphereMinSpan,
                realizes(min, span),
                format!("area {span} in M_min with generator areas {:?}{t}", min.c1_restricted()),
            );
        }
        if max.dim() <= 4 && interior.is_empty() {
            r.check(
                Rule::SphereExtremalSpan,
                realizes(min, span) && realizes(max, span),
                format!(
                    "area {span} in M_min {:?} and M_max {:?}{t}",
                    min.c1_restricted(),
                    max.c1_restricted()
                ),
            );
        }
        if min.dim() == 0 {
            for s in interior.iter().filter(|c| is_lambda1_surface(c)) {
                if d.has_level_in(lo, s.level()) {
                    continue;
                }
                if let NormalBundleData::Surface { summands } = &s.normal {
                    let a1: i64 = summands.iter().filter(|x| x.weight < 0).map(|x| x.degree).sum();
                    let total: i64 = summands.iter().map(|x| x.degree).sum();
                    r.check(
                        Rule::SphereSurface,
                        3 * a1 == 2 + total,
                        format!("3·{a1} = {} vs 2 + Σa = {}{t}", 3 * a1, 2 + total),
                    );
                }
            }
        }
        if (min.dim(), max.dim()) == (0, 0) {
            for c in &interior {
                if let NormalBundleData::FourDimSplit { minus, plus } = &c.normal {
                    let c1 = c.c1_restricted();
                    let left: Vec<i64> = minus.iter().map(|a| -lo * a).collect();
                    let right: Vec<i64> = plus.iter().map(|a| hi * a).collect();
                    r.check(
                        Rule::MiddleSplit,
                        left == c1 && right == c1,
                        format!(
                            "{}·L- = {left:?}, {}·L+ = {right:?}, c1(M)|F = {c1:?}{t}",
                            -lo, hi
                        ),
                    );
                }
            }
        }
    }
    r
}

/// The index together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexValue {
    pub value: i64,
    pub trace: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("no index rule applies: {0}")]
pub struct IndexError(pub String);

/// `ι(M) = |∫_a c₁(M)|` for the generator `a` of a positive-dimensional
/// extremal component. With both extremal components isolated points and
/// a 4-dimensional interior component, `ι ≥ 4` and `ι` divides every
/// interior area, which pins it down when that gcd is 4.
pub fn index_from_extremal(data: &FixedPointData) -> Result<IndexValue, IndexError> {
    let (min, max) = match (data.minimum(), data.maximum()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(IndexError("no unique extremal components".into())),
    };
    for (c, end) in [(min, "M_min"), (max, "M_max")] {
        if c.dim() == 0 {
            continue;
        }
        let v = c.c1_restricted();
        if v.len() != 1 {
            return Err(IndexError(format!("{end} = {} has b2 > 1", c.kind)));
        }
        let tangent = c.kind.c1_tangent()[0];
        let normal = c.c1_normal()[0];
        return Ok(IndexValue {
            value: v[0].abs(),
            trace: format!("{end} = {}: |{tangent} + {normal}| = {}", c.kind, v[0].abs()),
        });
    }
    if data.interior().any(|c| c.dim() == 4) {
        let areas: Vec<i64> = data
            .interior()
            .flat_map(|c| c.c1_restricted())
            .collect();
        let g = gcd_all(&areas);
        let trace = if g == 4 {
            format!("isolated extrema with a 4-dim interior component: ι ≥ 4 and ι | gcd{areas:?} = 4, so ι = 4")
        } else {
            format!("isolated extrema with a 4-dim interior component: ι ≥ 4 (gcd of interior areas {g})")
        };
        return Ok(IndexValue { value: 4, trace });
    }
    Err(IndexError("isolated extrema and no 4-dimensional component".into()))
}

/// Agreement of both ends and divisibility of every area by `ι`.
pub fn index_checks(data: &FixedPointData, iota: &IndexValue) -> ConstraintReport {
    let mut r = ConstraintReport::new();
    if let (Some(min), Some(max)) = (data.minimum(), data.maximum()) {
        if min.dim() > 0 && max.dim() > 0 {
            let (a, b) = (min.c1_restricted()[0].abs(), max.c1_restricted()[0].abs());
            r.check(
                Rule::IndexConsistent,
                a == b,
                format!("|∫c1| = {a} on M_min, {b} on M_max"),
            );
        }
    }
    let i = iota.value;
    let bad: Vec<String> = data
        .components
        .iter()
        .filter(|c| {
            c.c1_restricted()
                .iter()
                .any(|v| if i == 0 { *v != 0 } else { v % i != 0 })
        })
        .map(|c| format!("{} at level {} has areas {:?}", c.kind, c.level(), c.c1_restricted()))
        .collect();
    let detail = if bad.is_empty() {
        format!("ι = {i} divides every area")
    } else {
        format!("ι = {i}: {}", bad.join("; "))
    };
    r.check(Rule::IndexDivides, bad.is_empty() && i > 0, detail);
    r
}

/// Index constraints that come from spheres through low levels.
pub fn sphere_index_rules(data: &FixedPointData, iota: i64) -> ConstraintReport {
    let mut r = ConstraintReport::new();
    let views = orientations(data);
    let many = views.len() > 1;
    for (d, label) in &views {
        let (Some(min), Some(max)) = (d.minimum(), d.maximum()) else {
            continue;
        };
        let t = tag(label, many);
        let lo = min.level();
        if (min.dim(), max.dim()) == (0, 0) && d.interior().any(|c| c.dim() == 4) {
            r.check(Rule::IndexAtLeast4, iota >= 4, format!("ι = {iota}{t}"));
        }
        if min.dim() != 0 {
            continue;
        }
        let low: Vec<&FixedComponent> = d
            .interior()
            .filter(|c| lo < c.level() && c.level() < 0)
            .collect();
        if low.is_empty() {
            continue;
        }
        if low.iter().all(|c| is_lambda1_surface(c)) {
            r.check(Rule::IndexOdd, iota % 2 == 1, format!("ι = {iota}{t}"));
        }
        if low.iter().all(|c| is_point_with(c, [-1, 1, 1, 1])) {
            r.check(Rule::IndexAtMost2, iota <= 2, format!("ι = {iota}{t}"));
        }
    }
    r
}

/// Rules whose only role is to pin down `ι`.
pub const INDEX_RULES: &[Rule] = &[
    Rule::IndexConsistent,
    Rule::IndexDivides,
    Rule::IndexAtLeast4,
    Rule::IndexOdd,
    Rule::IndexAtMost2,
];

pub fn is_index_rule(id: &str) -> bool {
    INDEX_RULES.iter().any(|r| r.id() == id)
}
