//! Duistermaat–Heckman profiles `DH(c) = ∫_{M_c} [ω_c]³`.
//!
//! A component `F` at level `H_F` adds the residue
//! `R_F(c) = 6·[t⁻¹] ∫_F exp(c₁(M)|_F + (c − H_F)·t) / e^{S¹}(N_F)`
//! to the profile once `c` passes `H_F`. Summing residues from the bottom
//! gives the profile; summing all of them must give zero.

use crate::localization::{equivariant_euler, exp_twisted_coeff, LocalizationError, NormalBundleData};
use crate::model::{ComponentType, FixedComponent, FixedPointData};
use crate::poly::{q, serialize_q, Poly, Q};
use crate::report::Verdict;
use crate::ring::{ring_projectivized, RingClass};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// `12x + 6x² + (1 − k₂)x³`: the profile at distance `x` from an extremal
/// ℂP² with `c(N) = 1 − h + k₂h²`.
pub fn dh_near_cp2(k2: i64) -> Poly {
    Poly::from_ints(&[0, 12, 6, 1 - k2])
}

/// Same polynomial as [`dh_near_cp2`], recomputed as `∫(2η + xξ)³` in the
/// cohomology of the reduced space.
pub fn dh_from_ring(k2: i64) -> Poly {
    let r = ring_projectivized(k2);
    let eta = RingClass::generator(&r, "eta").expect("generator");
    let xi = RingClass::generator(&r, "xi").expect("generator");
    let omega = &eta.scale(q(2)) + &xi.scale_poly(&Poly::x());
    omega.pow(3).integrate()
}

/// `4·∫₀² dh_near_cp2(k₂) = 176 − 16k₂`.
pub fn half_volume_cp2(k2: i64) -> Q {
    dh_near_cp2(k2).integrate(Q::zero(), q(2)) * q(4)
}

/// The half containing only the minimum point and one `{−1,1,1,1}` point:
/// `4∫₀²x³ + 4∫₂⁴(x³ − (x − 2)³) = 240`.
pub fn half_volume_isolated_pair() -> Q {
    let (below, above) = isolated_pair_pieces();
    (below.integrate(Q::zero(), q(2)) + above.integrate(q(2), q(4))) * q(4)
}

/// Pieces `x³` on (0,2) and `x³ − (x − 2)³` on (2,4).
pub fn isolated_pair_pieces() -> (Poly, Poly) {
    let cube = Poly::from_ints(&[0, 0, 0, 1]);
    let shifted = cube.shift(q(-2));
    (cube.clone(), &cube - &shifted)
}

/// `R_F` as a polynomial in the level `c`.
pub fn residue(comp: &FixedComponent) -> Result<Poly, LocalizationError> {
    let inv = equivariant_euler(comp)?.inverse()?;
    let s = &Poly::x() - &Poly::constant(q(comp.level()));
    let coeff = exp_twisted_coeff(&comp.c1_class(), &s, &inv, -1);
    Ok(coeff.integrate().scale(q(6)))
}

/// One polynomial piece on the open interval `(lo, hi)` of levels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DhPiece {
    pub lo: i64,
    pub hi: i64,
    /// Polynomial in the level `c`.
    pub poly: Poly,
}

impl DhPiece {
    /// The piece in the distance `x = c − lo` from the lower end.
    pub fn from_lower(&self) -> Poly {
        self.poly.shift(q(self.lo))
    }

    /// The piece in the distance `y = hi − c` from the upper end.
    pub fn from_upper(&self) -> Poly {
        self.poly.compose(&Poly::from_ints(&[self.hi, -1]))
    }

    pub fn integral(&self) -> Q {
        self.poly.integrate(q(self.lo), q(self.hi))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DhProfile {
    pub pieces: Vec<DhPiece>,
}

impl DhProfile {
    /// `∫_M ω⁴ = 4·∫ DH`.
    pub fn volume(&self) -> Q {
        self.pieces.iter().map(DhPiece::integral).sum::<Q>() * q(4)
    }
}

/// Profile accumulated from below over every regular interval.
pub fn profile(data: &FixedPointData) -> Result<DhProfile, LocalizationError> {
    let levels = data.levels();
    let mut pieces = Vec::new();
    let mut acc = Poly::zero();
    for w in levels.windows(2) {
        for c in data.components.iter().filter(|c| c.level() == w[0]) {
            acc += &residue(c)?;
        }
        pieces.push(DhPiece {
            lo: w[0],
            hi: w[1],
            poly: acc.clone(),
        });
    }
    Ok(DhProfile { pieces })
}

/// `Σ_F R_F`, identically zero for consistent data.
pub fn two_sided_identity(data: &FixedPointData) -> Result<Poly, LocalizationError> {
    data.components
        .iter()
        .try_fold(Poly::zero(), |acc, c| Ok(&acc + &residue(c)?))
}

/// `R_min` on the first regular interval.
pub fn near_min_piece(data: &FixedPointData) -> Option<Result<DhPiece, LocalizationError>> {
    let min = data.minimum()?;
    let levels = data.levels();
    let hi = *levels.iter().find(|l| **l > min.level())?;
    Some(residue(min).map(|poly| DhPiece {
        lo: min.level(),
        hi,
        poly,
    }))
}

/// `−R_max` on the last regular interval.
pub fn near_max_piece(data: &FixedPointData) -> Option<Result<DhPiece, LocalizationError>> {
    let max = data.maximum()?;
    let levels = data.levels();
    let lo = *levels.iter().rev().find(|l| **l < max.level())?;
    Some(residue(max).map(|poly| DhPiece {
        lo,
        hi: max.level(),
        poly: -poly,
    }))
}

/// Outcome of an exact positivity test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Positivity {
    pub verdict: Verdict,
    /// A level in the open interval where the piece is ≤ 0, located to
    /// within 1/1024 when it is a root.
    pub violation: Option<Q>,
}

/// Strict positivity of `p` on the open interval `(a, b)`, exactly.
///
/// Roots are counted with a Sturm sequence of the square-free part after
/// dividing out roots at the endpoints, which are allowed.
pub fn positive_on(p: &Poly, a: Q, b: Q) -> Positivity {
    let mid = (a + b) / q(2);
    if p.is_zero() {
        return Positivity {
            verdict: Verdict::Fail,
            violation: Some(mid),
        };
    }
    let mut g = if p.degree() == Some(0) {
        p.clone()
    } else {
        p.div_rem(&p.gcd(&p.derivative())).0
    };
    for e in [a, b] {
        let lin = Poly::new(vec![-e, Q::one()]);
        while g.degree().unwrap_or(0) > 0 && g.eval(e).is_zero() {
            g = g.div_rem(&lin).0;
        }
    }
    let seq = sturm_sequence(&g);
    let roots_in = |lo: Q, hi: Q| variations(&seq, lo) - variations(&seq, hi);
    if roots_in(a, b) == 0 {
        if p.eval(mid).is_positive() {
            return Positivity {
                verdict: Verdict::Pass,
                violation: None,
            };
        }
        return Positivity {
            verdict: Verdict::Fail,
            violation: Some(mid),
        };
    }
    // Bisect towards the first root.
    let (mut lo, mut hi) = (a, b);
    let eps = Q::new(1, 1024);
    while hi - lo > eps {
        let m = (lo + hi) / q(2);
        if g.eval(m).is_zero() {
            return Positivity {
                verdict: Verdict::Fail,
                violation: Some(m),
            };
        }
        if roots_in(lo, m) > 0 {
            hi = m;
        } else {
            lo = m;
        }
    }
    Positivity {
        verdict: Verdict::Fail,
        violation: Some((lo + hi) / q(2)),
    }
}

fn sturm_sequence(p: &Poly) -> Vec<Poly> {
    let mut seq = vec![p.clone()];
    if p.degree().unwrap_or(0) == 0 {
        return seq;
    }
    seq.push(p.derivative());
    loop {
        let n = seq.len();
        let r = seq[n - 2].div_rem(&seq[n - 1]).1;
        if r.is_zero() {
            break;
        }
        seq.push(-r);
    }
    seq
}

fn variations(seq: &[Poly], at: Q) -> i64 {
    let signs: Vec<bool> = seq
        .iter()
        .map(|p| p.eval(at))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count() as i64
}

/// Positivity of every piece of a profile; the first failure wins.
pub fn positivity_check(profile: &DhProfile) -> Positivity {
    for piece in &profile.pieces {
        let r = positive_on(&piece.poly, q(piece.lo), q(piece.hi));
        if r.verdict == Verdict::Fail {
            return r;
        }
    }
    Positivity {
        verdict: Verdict::Pass,
        violation: None,
    }
}

/// Which half-volume decomposition applied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "pattern", rename_all = "snake_case")]
pub enum TotalVolume {
    /// Isolated pair below level 0, extremal plane with `k₂` above.
    PairAndPlane {
        k2: i64,
        #[serde(serialize_with = "serialize_q")]
        value: Q,
    },
    /// Extremal planes at both ends.
    TwoPlanes {
        k_min: i64,
        k_max: i64,
        #[serde(serialize_with = "serialize_q")]
        value: Q,
    },
    NotComputable { reason: String },
}

/// `∫_M c₁⁴` from the two half-volume formulas, when both halves are of a
/// covered kind. Other shapes are refused rather than guessed.
pub fn total_volume(data: &FixedPointData) -> TotalVolume {
    let (d, _) = data.normalized();
    let refuse = |reason: &str| TotalVolume::NotComputable {
        reason: reason.to_string(),
    };
    let (Some(min), Some(max)) = (d.minimum(), d.maximum()) else {
        return refuse("no unique extremal components");
    };
    let plane_k2 = |c: &FixedComponent, level: i64| match (&c.normal, c.kind) {
        (NormalBundleData::FourDimExtremal { c1: -1, c2 }, ComponentType::CP2) if c.level() == level => {
            Some(*c2)
        }
        _ => None,
    };
    match (min.kind, max.kind) {
        (ComponentType::Point, ComponentType::CP2) => {
            let Some(k2) = plane_k2(max, 2) else {
                return refuse("maximal plane is not c(N) = 1 - h + k h^2 at level 2");
            };
            let below: Vec<&FixedComponent> = d.interior().filter(|c| c.level() < 0).collect();
            let pair = min.level() == -4
                && below.len() == 1
                && below[0].kind == ComponentType::Point
                && below[0].level() == -2;
            if !pair {
                return refuse("lower half is not exactly the minimum and one {-1,1,1,1} point");
            }
            if d.interior().any(|c| c.level() > 0) {
                return refuse("fixed points strictly inside the upper half");
            }
            TotalVolume::PairAndPlane {
                k2,
                value: half_volume_isolated_pair() + half_volume_cp2(k2),
            }
        }
        (ComponentType::CP2, ComponentType::CP2) => {
            let (Some(k_min), Some(k_max)) = (plane_k2(min, -2), plane_k2(max, 2)) else {
                return refuse("extremal planes are not both c(N) = 1 - h + k h^2 at levels -2 and 2");
            };
            if d.interior().any(|c| c.level() != 0) {
                return refuse("fixed points strictly inside a half");
            }
            TotalVolume::TwoPlanes {
                k_min,
                k_max,
                value: half_volume_cp2(k_min) + half_volume_cp2(k_max),
            }
        }
        _ => refuse("shape not covered by the half-volume formulas"),
    }
}

impl TotalVolume {
    pub fn value(&self) -> Option<Q> {
        match self {
            TotalVolume::PairAndPlane { value, .. } | TotalVolume::TwoPlanes { value, .. } => Some(*value),
            TotalVolume::NotComputable { .. } => None,
        }
    }
}

/// Whether DH positivity near the extremal planes permits `b4`.
///
/// For (4,4) with a given split both `k ≤ 7` checks must pass and the
/// split must sum to `b4`; without a split some admissible split must
/// exist. For (0,4) the plane has `k₂ = b4`. Other shapes carry no plane
/// constraint and are skipped.
pub fn b4_bound_check(b4: i64, shape: (u32, u32), split: Option<(i64, i64)>) -> Verdict {
    let ok = |k: i64| positive_on(&dh_near_cp2(k), Q::zero(), q(2)).verdict == Verdict::Pass;
    let verdict = |b: bool| if b { Verdict::Pass } else { Verdict::Fail };
    match shape {
        (4, 4) => match split {
            Some((a, b)) => verdict(a + b == b4 && ok(a) && ok(b)),
            None => verdict((b4 - 40..=40).any(|a| ok(a) && ok(b4 - a))),
        },
        (0, 4) => verdict(ok(b4)),
        _ => Verdict::Skip,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn near_cp2_examples() {
        assert_eq!(dh_near_cp2(1), Poly::from_ints(&[0, 12, 6]));
        assert_eq!(dh_near_cp2(0), Poly::from_ints(&[0, 12, 6, 1]));
        assert_eq!(dh_near_cp2(8).eval(q(2)), q(-8));
        for k in [0, 1, 8] {
            assert_eq!(dh_from_ring(k), dh_near_cp2(k));
        }
    }

    #[test]
    fn half_volumes() {
        assert_eq!(half_volume_cp2(2), q(144));
        assert_eq!(half_volume_cp2(0), q(176));
        assert_eq!(half_volume_isolated_pair(), q(240));
        let (a, b) = isolated_pair_pieces();
        assert_eq!(a, Poly::from_ints(&[0, 0, 0, 1]));
        assert_eq!(b, Poly::from_ints(&[8, -12, 6]));
    }

    #[test]
    fn positivity() {
        let z = Q::zero();
        assert_eq!(positive_on(&dh_near_cp2(7), z, q(2)).verdict, Verdict::Pass);
        let bad = positive_on(&dh_near_cp2(8), z, q(2));
        assert_eq!(bad.verdict, Verdict::Fail);
        let v = bad.violation.unwrap();
        assert!(v > Q::new(18, 10) && v < Q::new(182, 100));
        assert_eq!(positive_on(&Poly::from_ints(&[0, 0, 0, 1]), z, q(2)).verdict, Verdict::Pass);
        // double root inside
        let touch = Poly::from_ints(&[-1, 1]) * Poly::from_ints(&[-1, 1]);
        assert_eq!(positive_on(&touch, z, q(2)).verdict, Verdict::Fail);
        assert_eq!(positive_on(&Poly::from_ints(&[-1]), z, q(2)).verdict, Verdict::Fail);
    }

    #[test]
    fn residues_of_points() {
        let min = FixedComponent::point([1, 1, 1, 1]);
        assert_eq!(residue(&min).unwrap(), Poly::from_ints(&[4, 1]).pow(3));
        let p = FixedComponent::point([-1, 1, 1, 1]);
        assert_eq!(residue(&p).unwrap(), -Poly::from_ints(&[2, 1]).pow(3));
    }

    #[test]
    fn b4_bound() {
        assert_eq!(b4_bound_check(14, (4, 4), Some((7, 7))), Verdict::Pass);
        assert_eq!(b4_bound_check(15, (4, 4), None), Verdict::Fail);
        assert_eq!(b4_bound_check(15, (4, 4), Some((7, 8))), Verdict::Fail);
        assert_eq!(b4_bound_check(8, (0, 4), None), Verdict::Fail);
        assert_eq!(b4_bound_check(7, (0, 4), None), Verdict::Pass);
    }
}
