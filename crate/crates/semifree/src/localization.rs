//! Equivariant Euler classes of normal bundles and their localization
//! contributions `∫_F 1/e(N_F)`.
//!
//! Every variant has a closed form. The Laurent-series oracle recomputes
//! the same number from the Euler class itself, by inverting it in
//! `H*(F)[t, t⁻¹]`. The two paths share only the ring kernel.

use crate::model::{ComponentType, FixedComponent};
use crate::poly::{q, Poly, Q};
use crate::ring::{RingClass, RingError, RingHandle};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// The four weights at a fixed component, zeros included.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightSignature(pub [i64; 4]);

impl WeightSignature {
    /// Half the Morse–Bott index.
    pub fn lambda(&self) -> u32 {
        self.0.iter().filter(|w| **w < 0).count() as u32
    }

    pub fn positives(&self) -> u32 {
        self.0.iter().filter(|w| **w > 0).count() as u32
    }

    pub fn zeros(&self) -> u32 {
        self.0.iter().filter(|w| **w == 0).count() as u32
    }

    /// Moment-map level under the weight-sum normalization.
    pub fn level(&self) -> i64 {
        -self.0.iter().sum::<i64>()
    }

    pub fn is_semi_free(&self) -> bool {
        self.0.iter().all(|w| (-1..=1).contains(w))
    }

    pub fn negated(&self) -> Self {
        let mut w = self.0.map(|x| -x);
        w.sort_unstable();
        WeightSignature(w)
    }

    /// Sorted copy; the multiset is what matters.
    pub fn sorted(&self) -> Self {
        let mut w = self.0;
        w.sort_unstable();
        WeightSignature(w)
    }

    pub fn nonzero(&self) -> Vec<i64> {
        let mut w: Vec<i64> = self.0.iter().copied().filter(|w| *w != 0).collect();
        w.sort_unstable();
        w
    }
}

impl fmt::Display for WeightSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.sorted().0;
        write!(f, "{{{},{},{},{}}}", w[0], w[1], w[2], w[3])
    }
}

/// One line-bundle summand of the normal bundle of a fixed surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSummand {
    pub degree: i64,
    pub weight: i64,
}

/// Chern data of the normal bundle, one variant per component shape.
///
/// Classes on 4-dimensional split components are coordinates on the
/// degree-2 generators of the base: `[a]` on ℂP², `[p, q]` on ℂP¹×ℂP¹.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormalBundleData {
    Point,
    Surface { summands: Vec<SurfaceSummand> },
    /// Rank 2 over an extremal ℂP² with `c₁ = c1·a`, `∫c₂ = c2`.
    FourDimExtremal { c1: i64, c2: i64 },
    /// `L₋ ⊕ L₊` with weights −1 and +1.
    FourDimSplit { minus: Vec<i64>, plus: Vec<i64> },
    /// Line bundle `O(c1)` over ℂP³.
    SixDim { c1: i64 },
}

impl NormalBundleData {
    pub fn variant_name(&self) -> &'static str {
        match self {
            NormalBundleData::Point => "point",
            NormalBundleData::Surface { .. } => "surface",
            NormalBundleData::FourDimExtremal { .. } => "four_dim_extremal",
            NormalBundleData::FourDimSplit { .. } => "four_dim_split",
            NormalBundleData::SixDim { .. } => "six_dim",
        }
    }

    /// Surface summands sorted negative weight first.
    pub fn canonical(&self) -> Self {
        match self {
            NormalBundleData::Surface { summands } => {
                let mut s = summands.clone();
                s.sort_by_key(|x| (x.weight, x.degree));
                NormalBundleData::Surface { summands: s }
            }
            other => other.clone(),
        }
    }

    /// Normal data after `X ↦ −X`. Chern classes do not change; only the
    /// roles of the weights do.
    pub fn reversed(&self) -> Self {
        match self {
            NormalBundleData::Surface { summands } => NormalBundleData::Surface {
                summands: summands
                    .iter()
                    .map(|s| SurfaceSummand {
                        degree: s.degree,
                        weight: -s.weight,
                    })
                    .collect(),
            }
            .canonical(),
            NormalBundleData::FourDimSplit { minus, plus } => NormalBundleData::FourDimSplit {
                minus: plus.clone(),
                plus: minus.clone(),
            },
            other => other.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LocalizationError {
    #[error("normal data `{variant}` does not fit a {kind:?} component with weights {weights}")]
    Mismatch {
        variant: &'static str,
        kind: ComponentType,
        weights: WeightSignature,
    },
    #[error("series has no unit leading term")]
    NotInvertible,
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Finite Laurent polynomial in `t` with coefficients in `H*(F)`.
#[derive(Clone, Debug)]
pub struct LaurentSeries {
    ring: RingHandle,
    terms: BTreeMap<i32, RingClass>,
}

impl PartialEq for LaurentSeries {
    fn eq(&self, other: &Self) -> bool {
        self.ring.family() == other.ring.family() && self.terms == other.terms
    }
}

impl LaurentSeries {
    pub fn zero(ring: &RingHandle) -> Self {
        LaurentSeries {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(power: i32, coeff: RingClass) -> Self {
        let mut s = Self::zero(coeff.ring());
        s.push(power, coeff);
        s
    }

    /// `w·t + c` for a line bundle with weight `w` and first Chern class `c`.
    pub fn linear(weight: i64, c1: RingClass) -> Self {
        let ring = c1.ring().clone();
        let mut s = Self::monomial(0, c1);
        s.push(1, RingClass::scalar(&ring, weight));
        s
    }

    fn push(&mut self, power: i32, coeff: RingClass) {
        let sum = match self.terms.remove(&power) {
            Some(old) => &old + &coeff,
            None => coeff,
        };
        if !sum.is_zero() {
            self.terms.insert(power, sum);
        }
    }

    pub fn ring(&self) -> &RingHandle {
        &self.ring
    }

    pub fn coeff(&self, power: i32) -> RingClass {
        self.terms
            .get(&power)
            .cloned()
            .unwrap_or_else(|| RingClass::zero(&self.ring))
    }

    pub fn powers(&self) -> impl Iterator<Item = i32> + '_ {
        self.terms.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&p, c) in &other.terms {
            out.push(p, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, RingError> {
        let mut out = Self::zero(&self.ring);
        for (&p, a) in &self.terms {
            for (&r, b) in &other.terms {
                out.push(p + r, a.try_mul(b)?);
            }
        }
        Ok(out)
    }

    /// Exact inverse. Writes `s = a·t^K·(1 + r)` where `t^K` is the top
    /// power, `a` its scalar part and `r` nilpotent; then
    /// `1/s = a⁻¹·t^{−K}·Σ(−r)^m` terminates once `r^m` vanishes.
    pub fn inverse(&self) -> Result<Self, LocalizationError> {
        let (&top, lead) = self
            .terms
            .iter()
            .next_back()
            .ok_or(LocalizationError::NotInvertible)?;
        let a = lead
            .constant_term()
            .as_constant()
            .filter(|a| !a.is_zero())
            .ok_or(LocalizationError::NotInvertible)?;
        // Lower terms must carry positive ring degree or the sum would not terminate.
        if self
            .terms
            .range(..top)
            .any(|(_, c)| !c.constant_term().is_zero())
        {
            return Err(LocalizationError::NotInvertible);
        }
        let inv_a = Q::one() / a;
        let mut r = Self::zero(&self.ring);
        for (&p, c) in &self.terms {
            let mut c = c.scale(inv_a);
            if p == top {
                c = &c - &RingClass::one(&self.ring);
            }
            r.push(p - top, c);
        }
        let neg_r = r.scale(-Q::one());
        let mut acc = Self::monomial(0, RingClass::one(&self.ring));
        let mut term = acc.clone();
        loop {
            term = term.mul(&neg_r)?;
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term);
        }
        Ok(acc
            .scale(inv_a)
            .shift(-top))
    }

    pub fn scale(&self, s: Q) -> Self {
        let mut out = Self::zero(&self.ring);
        for (&p, c) in &self.terms {
            out.push(p, c.scale(s));
        }
        out
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentSeries {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(&p, c)| (p + k, c.clone())).collect(),
        }
    }
}

/// Power of `t` whose coefficient pairs with `[F]` in `∫_F 1/e(N_F)` on an
/// 8-manifold: rank `r` and dimension `2k` give `t^{−r−k} = t^{−4}`.
pub const RESIDUE_POWER: i32 = -4;

/// `t² + sign·c₁·t + c₂` over ℂP², sign = +1 at a minimum.
pub fn equivariant_euler_fourdim(ring: &RingHandle, c1: i64, c2: i64, sign: i64) -> LaurentSeries {
    let h = RingClass::linear(ring, &[1]);
    let mut s = LaurentSeries::monomial(2, RingClass::one(ring));
    s = s.add(&LaurentSeries::monomial(1, h.scale(q(sign * c1))));
    s.add(&LaurentSeries::monomial(0, h.pow(2).scale(q(c2))))
}

/// Equivariant Euler class of the normal bundle of `comp`.
pub fn equivariant_euler(comp: &FixedComponent) -> Result<LaurentSeries, LocalizationError> {
    let mismatch = || LocalizationError::Mismatch {
        variant: comp.normal.variant_name(),
        kind: comp.kind,
        weights: comp.weights,
    };
    let ring = comp.kind.ring();
    let one = RingClass::one(&ring);
    let product = |factors: Vec<LaurentSeries>| -> Result<LaurentSeries, LocalizationError> {
        let mut acc = LaurentSeries::monomial(0, one.clone());
        for f in factors {
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    };
    match (&comp.normal, comp.kind) {
        (NormalBundleData::Point, ComponentType::Point) if comp.weights.zeros() == 0 => product(
            comp.weights
                .nonzero()
                .into_iter()
                .map(|w| LaurentSeries::linear(w, RingClass::zero(&ring)))
                .collect(),
        ),
        (NormalBundleData::Surface { summands }, ComponentType::CP1) => {
            let mut labels: Vec<i64> = summands.iter().map(|s| s.weight).collect();
            labels.sort_unstable();
            if labels != comp.weights.nonzero() {
                return Err(mismatch());
            }
            product(
            summands
                .iter()
                .map(|s| LaurentSeries::linear(s.weight, RingClass::linear(&ring, &[s.degree])))
                .collect(),
            )
        }
        (NormalBundleData::FourDimExtremal { c1, c2 }, ComponentType::CP2) => {
            let nz = comp.weights.nonzero();
            if nz.len() != 2 || nz[0] != nz[1] {
                return Err(mismatch());
            }
            Ok(equivariant_euler_fourdim(&ring, *c1, *c2, nz[0]))
        }
        (NormalBundleData::FourDimSplit { minus, plus }, ComponentType::CP2 | ComponentType::P1xP1) => {
            let n = ring.generators().len();
            if minus.len() != n || plus.len() != n || comp.weights.nonzero() != [-1, 1] {
                return Err(mismatch());
            }
            product(vec![
                LaurentSeries::linear(-1, RingClass::linear(&ring, minus)),
                LaurentSeries::linear(1, RingClass::linear(&ring, plus)),
            ])
        }
        (NormalBundleData::SixDim { c1 }, ComponentType::CP3) => {
            let nz = comp.weights.nonzero();
            if nz.len() != 1 {
                return Err(mismatch());
            }
            Ok(LaurentSeries::linear(nz[0], RingClass::linear(&ring, &[*c1])))
        }
        _ => Err(mismatch()),
    }
}

/// `(−1)^λ`.
pub fn contribution_isolated(lambda: u32) -> i64 {
    if lambda % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `−(−1)^λ·(−Σ_{w=−1} a + Σ_{w=+1} a)`.
pub fn contribution_surface(summands: &[SurfaceSummand]) -> i64 {
    let lambda = summands.iter().filter(|s| s.weight < 0).count() as u32;
    let signed: i64 = summands.iter().map(|s| s.weight.signum() * s.degree).sum();
    -contribution_isolated(lambda) * signed
}

/// `k′² − c₂`, the same at either end of the action.
pub fn contribution_fourdim_extremal(c1: i64, c2: i64) -> i64 {
    c1 * c1 - c2
}

/// `−∫(u² − uv + v²)` for `u = c₁(L₋)`, `v = c₁(L₊)`.
pub fn contribution_split(kind: ComponentType, minus: &[i64], plus: &[i64]) -> i64 {
    let pair = |a: &[i64], b: &[i64]| -> i64 {
        match kind {
            ComponentType::CP2 => a[0] * b[0],
            ComponentType::P1xP1 => a[0] * b[1] + a[1] * b[0],
            _ => 0,
        }
    };
    -(pair(minus, minus) - pair(minus, plus) + pair(plus, plus))
}

/// `−m³` for `O(m)` over ℂP³.
pub fn contribution_sixdim(m: i64) -> i64 {
    -m * m * m
}

/// Closed-form contribution of a single component.
pub fn contribution_closed_form(comp: &FixedComponent) -> Result<Q, LocalizationError> {
    // Shape errors surface from the Euler class builder.
    equivariant_euler(comp)?;
    let v = match &comp.normal {
        NormalBundleData::Point => contribution_isolated(comp.weights.lambda()),
        NormalBundleData::Surface { summands } => contribution_surface(summands),
        NormalBundleData::FourDimExtremal { c1, c2 } => contribution_fourdim_extremal(*c1, *c2),
        NormalBundleData::FourDimSplit { minus, plus } => contribution_split(comp.kind, minus, plus),
        NormalBundleData::SixDim { c1 } => contribution_sixdim(*c1),
    };
    Ok(q(v))
}

/// Inverts the Euler class and integrates the `t⁻⁴` coefficient over `F`.
pub fn contribution_series_oracle(comp: &FixedComponent) -> Result<Q, LocalizationError> {
    let inv = equivariant_euler(comp)?.inverse()?;
    inv.coeff(RESIDUE_POWER)
        .integrate_scalar()
        .ok_or(LocalizationError::NotInvertible)
}

/// `Σ_F ∫_F 1/e(N_F)`, which must vanish.
pub fn abbv_sum(components: &[FixedComponent]) -> Result<Q, LocalizationError> {
    components
        .iter()
        .map(contribution_closed_form)
        .try_fold(Q::zero(), |acc, c| Ok(acc + c?))
}

/// Coefficient of `t^power` in `exp(α + s·t)·β`, where `s` is a formal
/// polynomial in `x`. `α` must be nilpotent; only finitely many terms of
/// `exp(s·t)` reach `power` because `β` is bounded above.
pub fn exp_twisted_coeff(alpha: &RingClass, s: &Poly, beta: &LaurentSeries, power: i32) -> RingClass {
    let ring = alpha.ring().clone();
    // exp(α), finite since α is nilpotent
    let mut exp_alpha = RingClass::one(&ring);
    let mut term = RingClass::one(&ring);
    for n in 1.. {
        term = (&term * alpha).scale(Q::one() / q(n));
        if term.is_zero() {
            break;
        }
        exp_alpha = &exp_alpha + &term;
    }
    let mut out = RingClass::zero(&ring);
    for p in beta.powers() {
        let n = power - p;
        if n < 0 {
            continue;
        }
        let mut fact = Q::one();
        for i in 1..=n {
            fact *= q(i as i64);
        }
        let sn = s.pow(n as u32).scale(Q::one() / fact);
        out = &out + &beta.coeff(p).scale_poly(&sn);
    }
    &out * &exp_alpha
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ComponentType as T;

    fn comp(kind: T, w: [i64; 4], normal: NormalBundleData) -> FixedComponent {
        FixedComponent {
            kind,
            weights: WeightSignature(w),
            normal,
        }
    }

    fn surf(s: &[(i64, i64)]) -> NormalBundleData {
        NormalBundleData::Surface {
            summands: s
                .iter()
                .map(|&(degree, weight)| SurfaceSummand { degree, weight })
                .collect(),
        }
    }

    #[test]
    fn isolated_values() {
        assert_eq!(contribution_isolated(0), 1);
        assert_eq!(contribution_isolated(2), 1);
        assert_eq!(contribution_isolated(3), -1);
        let p = comp(T::Point, [-1, -1, -1, -1], NormalBundleData::Point);
        assert_eq!(contribution_series_oracle(&p).unwrap(), q(1));
    }

    #[test]
    fn surface_values() {
        assert_eq!(contribution_surface(&[sd(1, 1), sd(1, 1), sd(1, 1)]), -3);
        assert_eq!(contribution_surface(&[sd(3, -1), sd(2, 1), sd(2, 1)]), 1);
        assert_eq!(contribution_surface(&[sd(0, 1), sd(0, 1), sd(0, 1)]), 0);
        let c = comp(T::CP1, [0, -1, 1, 1], surf(&[(3, -1), (2, 1), (2, 1)]));
        assert_eq!(contribution_series_oracle(&c).unwrap(), q(1));
    }

    fn sd(degree: i64, weight: i64) -> SurfaceSummand {
        SurfaceSummand { degree, weight }
    }

    #[test]
    fn fourdim_euler_class() {
        let r = T::CP2.ring();
        let e = equivariant_euler_fourdim(&r, -1, 5, 1);
        let h = RingClass::linear(&r, &[1]);
        assert_eq!(e.coeff(1), -&h);
        assert_eq!(e.coeff(0), h.pow(2).scale(q(5)));
        let trivial = equivariant_euler_fourdim(&r, 0, 0, 1);
        assert_eq!(trivial, LaurentSeries::monomial(2, RingClass::one(&r)));
    }

    #[test]
    fn fourdim_values() {
        assert_eq!(contribution_fourdim_extremal(1, 1), 0);
        assert_eq!(contribution_fourdim_extremal(-1, 1), 0);
        assert_eq!(contribution_fourdim_extremal(0, 2), -2);
        assert_eq!(contribution_fourdim_extremal(2, 1), 3);
        for k2 in -4..=8 {
            let c = comp(
                T::CP2,
                [0, 0, 1, 1],
                NormalBundleData::FourDimExtremal { c1: -1, c2: k2 },
            );
            assert_eq!(contribution_series_oracle(&c).unwrap(), q(1 - k2));
        }
    }

    #[test]
    fn split_values() {
        let c = comp(
            T::P1xP1,
            [-1, 0, 0, 1],
            NormalBundleData::FourDimSplit {
                minus: vec![1, 1],
                plus: vec![1, 1],
            },
        );
        assert_eq!(contribution_closed_form(&c).unwrap(), q(-2));
        assert_eq!(contribution_series_oracle(&c).unwrap(), q(-2));
    }

    #[test]
    fn sixdim_values() {
        assert_eq!(contribution_sixdim(1), -1);
        assert_eq!(contribution_sixdim(0), 0);
        assert_eq!(contribution_sixdim(2), -8);
        let c = comp(T::CP3, [-1, 0, 0, 0], NormalBundleData::SixDim { c1: 1 });
        assert_eq!(contribution_series_oracle(&c).unwrap(), q(-1));
    }

    #[test]
    fn mismatched_variant_is_rejected() {
        let c = comp(T::CP1, [0, 1, 1, 1], NormalBundleData::SixDim { c1: 1 });
        assert!(matches!(
            contribution_series_oracle(&c),
            Err(LocalizationError::Mismatch { .. })
        ));
    }

    #[test]
    fn inverse_round_trip() {
        let r = T::CP2.ring();
        let e = equivariant_euler_fourdim(&r, 2, 3, -1);
        let prod = e.mul(&e.inverse().unwrap()).unwrap();
        assert_eq!(prod, LaurentSeries::monomial(0, RingClass::one(&r)));
        let not_unit = LaurentSeries::monomial(1, RingClass::linear(&r, &[1]));
        assert!(not_unit.inverse().is_err());
    }
}
