//! Acceptance criteria 1–9. Each criterion prints one PASS/FAIL line; the
//! test fails if any criterion fails.
//!
//! All quantities are exact rationals, so every tolerance is zero.

use num_traits::{Signed, Zero};
use semifree::classifier::catalog::{catalog, match_fp_class};
use semifree::classifier::enumerate::{
    admissible_dim_pairs, enumerate_all, enumerate_case_with, EnumerationResult, Execution,
};
use semifree::classifier::fano::{classify_fano_with, default_fano_table, FanoClassification};
use semifree::classifier::{evaluate, Mode};
use semifree::dh::{b4_bound_check, dh_from_ring, dh_near_cp2, half_volume_cp2, half_volume_isolated_pair};
use semifree::localization::{
    abbv_sum, contribution_closed_form, contribution_series_oracle, NormalBundleData, SurfaceSummand,
};
use semifree::model::{fp_equivalent, ComponentType, FixedComponent, FixedPointData};
use semifree::poly::{q, Q};
use semifree::report::{Rule, Verdict};
use semifree::ring::{ring_cpn, ring_p1xp1, ring_projectivized, RingClass};
use std::collections::BTreeSet;
use std::process::Command;

/// Largest accepted `|computed − expected|`; arithmetic is exact.
const TOLERANCE: i64 = 0;
/// `b₄` bound of the full sweep.
const SWEEP_B4_MAX: u32 = 30;

fn within(a: Q, b: Q) -> bool {
    (a - b).abs() <= q(TOLERANCE)
}

struct Outcome {
    ok: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { ok: true, notes: Vec::new() }
    }

    fn require(&mut self, cond: bool, what: impl Into<String>) {
        if !cond {
            self.ok = false;
            self.notes.push(what.into());
        }
    }
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new();
    for e in catalog() {
        let s = abbv_sum(&e.data.components).unwrap();
        o.require(within(s, Q::zero()), format!("{}: sum {s}", e.name));
    }
    o
}

fn criterion_2() -> Outcome {
    let expected = [
        ("projectiveone", 1),
        ("exampletwofour", 1),
        ("quadricone", 2),
        ("quadricexample", 2),
        ("wexample", 2),
        ("kuznetsov", 8),
    ];
    let mut o = Outcome::new();
    for (name, b4) in expected {
        let e = semifree::classifier::catalog_entry(name).unwrap();
        let b = e.data.betti();
        o.require(b == [1, 1, b4, 1, 1], format!("{name}: {b:?}"));
    }
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new();
    for k in -20..=20 {
        o.require(dh_from_ring(k) == dh_near_cp2(k), format!("k = {k}: ring and closed form differ"));
        o.require(within(half_volume_cp2(k), q(176 - 16 * k)), format!("k = {k}: half volume"));
    }
    o.require(within(half_volume_isolated_pair(), q(240)), "isolated pair half volume");
    o
}

fn series_agrees(c: &FixedComponent) -> bool {
    contribution_closed_form(c).unwrap() == contribution_series_oracle(c).unwrap()
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new();
    for lambda in 0..=4usize {
        let mut w = [1i64; 4];
        w[..lambda].iter_mut().for_each(|x| *x = -1);
        o.require(series_agrees(&FixedComponent::point(w)), format!("point λ = {lambda}"));
    }
    for w in [[0, 1, 1, 1], [-1, 0, 1, 1], [-1, -1, 0, 1], [-1, -1, -1, 0]] {
        let signs: Vec<i64> = w.iter().copied().filter(|x| *x != 0).collect();
        for a in -5..=5 {
            for b in -5..=5 {
                for c in -5..=5 {
                    let summands = signs
                        .iter()
                        .zip([a, b, c])
                        .map(|(&weight, degree)| SurfaceSummand { degree, weight })
                        .collect();
                    let comp = FixedComponent::new(ComponentType::CP1, w, NormalBundleData::Surface { summands });
                    o.require(series_agrees(&comp), format!("surface {w:?} ({a},{b},{c})"));
                }
            }
        }
    }
    for w in [[0, 0, 1, 1], [-1, -1, 0, 0]] {
        for c1 in -5..=5 {
            for c2 in -5..=5 {
                let comp = FixedComponent::new(ComponentType::CP2, w, NormalBundleData::FourDimExtremal { c1, c2 });
                o.require(series_agrees(&comp), format!("plane {w:?} ({c1},{c2})"));
            }
        }
    }
    for m in -3..=3 {
        for w in [[0, 0, 0, 1], [-1, 0, 0, 0]] {
            let comp = FixedComponent::new(ComponentType::CP3, w, NormalBundleData::SixDim { c1: m });
            o.require(series_agrees(&comp), format!("CP3 {w:?} m = {m}"));
        }
    }
    o
}

fn extremal_chern(d: &FixedPointData) -> Vec<(i64, i64)> {
    [d.minimum(), d.maximum()]
        .into_iter()
        .flatten()
        .filter_map(|c| match c.normal {
            NormalBundleData::FourDimExtremal { c1, c2 } => Some((c1, c2)),
            _ => None,
        })
        .collect()
}

fn criterion_5(results: &[EnumerationResult]) -> Outcome {
    let mut o = Outcome::new();
    let of = |shape| results.iter().find(|r| r.shape == shape).unwrap();

    for shape in [(0, 0), (0, 6), (2, 4)] {
        let r = of(shape);
        let n = r.members().count();
        o.require(r.families.len() == 1 && n == 1, format!("{shape:?}: {} families, {n} members", r.families.len()));
    }
    if let Some(m) = of((0, 0)).members().next() {
        let mid = m.data.interior().next().unwrap();
        let ok = mid.kind == ComponentType::P1xP1
            && mid.normal
                == NormalBundleData::FourDimSplit {
                    minus: vec![1, 1],
                    plus: vec![1, 1],
                }
            && m.n2 == 0;
        o.require(ok, format!("(0,0): {mid}"));
    }
    if let Some(m) = of((0, 6)).members().next() {
        let ok = matches!(m.data.maximum().unwrap().normal, NormalBundleData::SixDim { c1: 1 }) && m.n2 == 0;
        o.require(ok, "(0,6): expected N = O(1), N2 = 0");
    }
    if let Some(m) = of((2, 4)).members().next() {
        let s = m.data.minimum().unwrap().c1_normal()[0];
        let ok = extremal_chern(&m.data) == vec![(2, 1)] && s == 3 && m.n2 == 0;
        o.require(ok, format!("(2,4): s = {s}, planes {:?}", extremal_chern(&m.data)));
    }

    let zf = of((0, 4));
    let n2s = |pred: &dyn Fn(&str) -> bool| -> BTreeSet<u32> {
        zf.families.iter().filter(|f| pred(&f.structure)).flat_map(|f| f.members.iter().map(|m| m.n2)).collect()
    };
    let no_surface = n2s(&|s| !s.contains("CP1{"));
    o.require(no_surface.len() > 1, format!("(0,4) without surface: N2 values {no_surface:?}"));
    for m in zf.members().filter(|m| !m.components.iter().any(|c| c.starts_with("CP1"))) {
        o.require(
            extremal_chern(&m.data) == vec![(-1, 1 + m.n2 as i64)],
            format!("(0,4) N2 = {}: {:?}", m.n2, extremal_chern(&m.data)),
        );
    }
    let with_surface: Vec<_> = zf.members().filter(|m| m.components.iter().any(|c| c.starts_with("CP1"))).collect();
    o.require(
        with_surface.len() == 1 && extremal_chern(&with_surface[0].data) == vec![(0, 2)],
        format!("(0,4) with surface: {} members", with_surface.len()),
    );

    let ff = of((4, 4));
    let ff_n2: BTreeSet<u32> = ff.members().map(|m| m.n2).collect();
    o.require(ff_n2.len() > 1, format!("(4,4): N2 values {ff_n2:?}"));
    for m in ff.members() {
        let ch = extremal_chern(&m.data);
        let ok = match ch.as_slice() {
            [(1, 1), (1, 1)] => m.n2 == 0,
            [(-1, a), (-1, b)] => a + b == 2 + m.n2 as i64 && *a <= 7 && *b <= 7,
            _ => false,
        };
        o.require(ok, format!("(4,4) N2 = {}: {ch:?}", m.n2));
    }

    let statuses = admissible_dim_pairs();
    let rejected: Vec<_> = statuses.iter().filter(|s| !s.admissible()).collect();
    o.require(rejected.len() == 5, format!("{} shapes rejected", rejected.len()));
    for s in rejected {
        let c = s.rejection.as_ref().unwrap();
        let expected = if s.shape.1 == 6 { Rule::ShapeKirwan } else { Rule::ShapeFourDim };
        o.require(
            c.verdict == Verdict::Fail && c.id == expected.id() && c.anchor == expected.anchor(),
            format!("{:?} rejected by {}", s.shape, c.id),
        );
    }
    o
}

fn criterion_6(sweep: &[EnumerationResult]) -> Outcome {
    let mut o = Outcome::new();
    let max = sweep.iter().filter_map(EnumerationResult::max_b4).max();
    o.require(max.is_some_and(|m| m <= 14), format!("max b4 = {max:?}"));
    let ff = sweep.iter().find(|r| r.shape == (4, 4)).unwrap();
    let seven = ff.members().any(|m| m.b4 == 14 && extremal_chern(&m.data) == vec![(-1, 7), (-1, 7)]);
    o.require(seven, "(4,4) split (7,7) at b4 = 14 not admissible");
    o.require(b4_bound_check(14, (4, 4), Some((7, 7))) == Verdict::Pass, "b4 bound check at (7,7)");
    o
}

fn criterion_7(c: &FanoClassification) -> Outcome {
    let mut o = Outcome::new();
    o.require(
        c.survivors == ["P4", "Q4", "W5", "X8m"],
        format!("survivors {:?}", c.survivors),
    );
    let arithmetic = [("X9m", 352, 288), ("X7m", 224, 160), ("V18", 384, 320)];
    for (name, a, b) in arithmetic {
        let v = c.verdicts.iter().find(|v| v.name == name).unwrap();
        let line = v.checks.failures().find(|ch| ch.id == Rule::DegreeGenus.id());
        let ok = !v.survives
            && line.is_some_and(|l| l.detail.contains(&format!("= {a} ")) && l.detail.contains(&format!("= {b} ")));
        o.require(ok, format!("{name}: expected {a}/{b}"));
    }
    o
}

fn criterion_8(results: &[EnumerationResult]) -> Outcome {
    let mut o = Outcome::new();
    let expected = [
        ("projectiveone", "a", "P4"),
        ("exampletwofour", "a", "P4"),
        ("quadricone", "b", "Q4"),
        ("quadricexample", "b", "Q4"),
        ("wexample", "c", "W5"),
        ("kuznetsov", "d", "X8"),
    ];
    let entries = catalog();
    for (name, case, family) in expected {
        let e = entries.iter().find(|e| e.name == name).unwrap();
        let m = match_fp_class(&e.data);
        o.require(
            m.case.as_deref() == Some(case) && m.family.as_deref() == Some(family),
            format!("{name}: {m:?}"),
        );
        let r = match_fp_class(&e.data.reverse_action());
        o.require(r.case.as_deref() == Some(case), format!("{name} reversed: {r:?}"));
    }
    for (i, a) in entries.iter().enumerate() {
        for b in &entries[i + 1..] {
            let same = fp_equivalent(&a.data, &b.data) || fp_equivalent(&a.data, &b.data.reverse_action());
            o.require(!same, format!("{} and {} are equivalent", a.name, b.name));
        }
    }
    let zs = results.iter().find(|r| r.shape == (0, 6)).unwrap();
    for m in zs.members() {
        let c = match_fp_class(&m.data);
        o.require(c.case.as_deref() == Some("a"), format!("(0,6) output: {c:?}"));
    }
    o
}

fn run_cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_semifree")).args(args).output().unwrap();
    [out.stdout, out.stderr].concat()
}

fn criterion_9() -> Outcome {
    let mut o = Outcome::new();
    for e in catalog() {
        let r = e.data.reverse_action();
        let (a, b) = (evaluate(&e.data, Mode::Full), evaluate(&r, Mode::Full));
        o.require(a.passed() && b.passed(), format!("{}: reversal changes the verdict", e.name));
        o.require(a.index == b.index, format!("{}: reversal changes ι", e.name));
        o.require(a.profile_volume == b.profile_volume, format!("{}: reversal changes the volume", e.name));
        let betti = e.data.betti();
        o.require(
            betti.iter().eq(betti.iter().rev()),
            format!("{}: Betti vector {betti:?} not palindromic", e.name),
        );
    }
    let rings = [
        ring_cpn(2).unwrap(),
        ring_cpn(3).unwrap(),
        ring_cpn(4).unwrap(),
        ring_p1xp1(),
        ring_projectivized(3),
    ];
    for ring in &rings {
        let n = ring.generators().len();
        let basis: Vec<RingClass> = (0..=2u32)
            .flat_map(|i| (0..=2u32).map(move |j| (i, j)))
            .map(|(i, j)| {
                let exps: Vec<u32> = [i, j].into_iter().chain(std::iter::repeat(0)).take(n).collect();
                RingClass::monomial(ring, &exps, semifree::poly::Poly::from_ints(&[1, (i + j) as i64]))
            })
            .collect();
        for a in &basis {
            for b in &basis {
                o.require(a * b == b * a, "commutativity");
                for c in basis.iter().take(3) {
                    o.require(&(a * b) * c == a * &(b * c), "associativity");
                    o.require(a * &(b + c) == &(a * b) + &(a * c), "distributivity");
                }
            }
        }
    }
    let invocations: [&[&str]; 4] = [
        &["enumerate", "--shape", "all", "--max-b4", "10"],
        &["--format", "json", "enumerate", "--shape", "4,4", "--max-b4", "10"],
        &["classify-fano"],
        &["--format", "json", "catalog", "--name", "kuznetsov", "--emit", "report"],
    ];
    for args in invocations {
        o.require(run_cli(args) == run_cli(args), format!("output of {args:?} differs between runs"));
    }
    o
}

#[test]
fn acceptance() {
    let exec = Execution::default();
    let results: Vec<EnumerationResult> = admissible_dim_pairs()
        .into_iter()
        .filter(|s| s.admissible())
        .map(|s| enumerate_case_with(s.shape, 14, exec).unwrap())
        .collect();
    let sweep = enumerate_all(SWEEP_B4_MAX, exec);
    let fano = classify_fano_with(&default_fano_table(), &results).unwrap();

    let outcomes = [
        (1, "ABBV sum vanishes on the catalog", criterion_1()),
        (2, "Kirwan b4 of the catalog", criterion_2()),
        (3, "DH closed forms and half volumes", criterion_3()),
        (4, "series oracle equals closed forms", criterion_4()),
        (5, "case enumeration and shape rejections", criterion_5(&results)),
        (6, "b4 bound by exhaustive sweep", criterion_6(&sweep)),
        (7, "Fano classification and arithmetic", criterion_7(&fano)),
        (8, "FP classes of the catalog", criterion_8(&results)),
        (9, "reversal, Poincaré, ring axioms, stable output", criterion_9()),
    ];
    let mut failed = Vec::new();
    for (n, what, o) in &outcomes {
        println!("criterion {n}: {} - {what}", if o.ok { "PASS" } else { "FAIL" });
        for note in &o.notes {
            println!("    {note}");
        }
        if !o.ok {
            failed.push(*n);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
