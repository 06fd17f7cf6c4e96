//! Truncated graded cohomology rings with exact integration.
//!
//! Only a handful of presentations occur: ℂPⁿ, ℂP¹×ℂP¹ and the
//! projectivization of a rank-2 bundle over ℂP². Each family has a
//! hand-written reduction rule; a multiplication table over the reduced
//! monomial basis is built once per ring and shared behind an [`Arc`].
//!
//! Coefficients are [`Poly`] so that a formal variable `x` can ride along
//! through products and integration.

use crate::poly::{q, Poly, Q};
use num_traits::Zero;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("projective space dimension {0} outside 1..=4")]
    DimensionOutOfRange(u32),
    #[error("ring mismatch: {0} vs {1}")]
    Mismatch(String, String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("total class has degree-0 part {0}, expected 1")]
    NotUnit(String),
}

/// Which presentation a ring uses. Two rings are the same iff their
/// families are equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingFamily {
    /// ℤ[h]/(h^{n+1}), ∫hⁿ = 1.
    ProjectiveSpace { n: u32 },
    /// ℤ[x,y]/(x², y²), ∫xy = 1.
    P1xP1,
    /// ℤ[η,ξ]/(η³, ξ² + c₁ηξ + c₂η²), ∫η²ξ = 1: the projectivization of a
    /// rank-2 bundle over ℂP² with total Chern class 1 + c₁h + c₂h².
    PlaneBundle { c1: i64, c2: i64 },
}

impl fmt::Display for RingFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingFamily::ProjectiveSpace { n: 0 } => write!(f, "H*(pt)"),
            RingFamily::ProjectiveSpace { n } => write!(f, "H*(CP{n})"),
            RingFamily::P1xP1 => write!(f, "H*(CP1xCP1)"),
            RingFamily::PlaneBundle { c1, c2 } => write!(f, "H*(P(E)), c(E)=1{c1:+}h{c2:+}h^2"),
        }
    }
}

type Monomial = Vec<u32>;

#[derive(Debug)]
pub struct GradedRing {
    family: RingFamily,
    generators: Vec<(&'static str, u32)>,
    basis: Vec<Monomial>,
    degrees: Vec<u32>,
    top_degree: u32,
    /// `table[i][j]` is the reduced product of basis elements i and j.
    table: Vec<Vec<Vec<(usize, i64)>>>,
    integrals: Vec<i64>,
}

pub type RingHandle = Arc<GradedRing>;

pub fn ring_cpn(n: u32) -> Result<RingHandle, RingError> {
    if !(1..=4).contains(&n) {
        return Err(RingError::DimensionOutOfRange(n));
    }
    Ok(build(RingFamily::ProjectiveSpace { n }))
}

/// The ring of a point, `ℤ` in degree 0 with `∫1 = 1`.
pub fn ring_point() -> RingHandle {
    build(RingFamily::ProjectiveSpace { n: 0 })
}

pub fn ring_p1xp1() -> RingHandle {
    build(RingFamily::P1xP1)
}

/// The reduced space near an extremal plane whose normal bundle has
/// c = 1 − h + k₂h².
pub fn ring_projectivized(k2: i64) -> RingHandle {
    ring_plane_bundle(-1, k2)
}

pub fn ring_plane_bundle(c1: i64, c2: i64) -> RingHandle {
    build(RingFamily::PlaneBundle { c1, c2 })
}

fn build(family: RingFamily) -> RingHandle {
    let (generators, basis): (Vec<(&'static str, u32)>, Vec<Monomial>) = match family {
        RingFamily::ProjectiveSpace { n } => (vec![("h", 2)], (0..=n).map(|a| vec![a]).collect()),
        RingFamily::P1xP1 => (
            vec![("x", 2), ("y", 2)],
            vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]],
        ),
        RingFamily::PlaneBundle { .. } => (
            vec![("eta", 2), ("xi", 2)],
            vec![
                vec![0, 0],
                vec![1, 0],
                vec![0, 1],
                vec![2, 0],
                vec![1, 1],
                vec![2, 1],
            ],
        ),
    };
    let degree_of = |m: &Monomial| -> u32 {
        m.iter()
            .zip(&generators)
            .map(|(e, (_, d))| e * d)
            .sum()
    };
    let degrees: Vec<u32> = basis.iter().map(degree_of).collect();
    let top_degree = *degrees.iter().max().unwrap();
    let index = |m: &Monomial| basis.iter().position(|b| b == m);

    let table = basis
        .iter()
        .map(|a| {
            basis
                .iter()
                .map(|b| {
                    let prod: Monomial = a.iter().zip(b).map(|(x, y)| x + y).collect();
                    let mut acc: Vec<(usize, i64)> = Vec::new();
                    for (m, c) in reduce(family, &prod) {
                        let i = index(&m).expect("reduction lands in the basis");
                        match acc.iter_mut().find(|(j, _)| *j == i) {
                            Some(slot) => slot.1 += c,
                            None => acc.push((i, c)),
                        }
                    }
                    acc.retain(|(_, c)| *c != 0);
                    acc
                })
                .collect()
        })
        .collect();

    let integrals = basis
        .iter()
        .zip(&degrees)
        .map(|(m, &d)| {
            if d != top_degree {
                return 0;
            }
            match family {
                RingFamily::ProjectiveSpace { .. } | RingFamily::P1xP1 => 1,
                RingFamily::PlaneBundle { .. } => {
                    debug_assert_eq!(m, &vec![2, 1]);
                    1
                }
            }
        })
        .collect();

    Arc::new(GradedRing {
        family,
        generators,
        basis,
        degrees,
        top_degree,
        table,
        integrals,
    })
}

/// Rewrites a monomial as an integer combination of basis monomials.
fn reduce(family: RingFamily, m: &Monomial) -> Vec<(Monomial, i64)> {
    match family {
        RingFamily::ProjectiveSpace { n } => {
            if m[0] <= n {
                vec![(m.clone(), 1)]
            } else {
                vec![]
            }
        }
        RingFamily::P1xP1 => {
            if m[0] <= 1 && m[1] <= 1 {
                vec![(m.clone(), 1)]
            } else {
                vec![]
            }
        }
        RingFamily::PlaneBundle { c1, c2 } => {
            let (a, b) = (m[0], m[1]);
            if a >= 3 {
                return vec![];
            }
            if b <= 1 {
                return vec![(m.clone(), 1)];
            }
            // ξ² = −c₁ηξ − c₂η²
            let mut out = Vec::new();
            for (mm, c) in reduce(family, &vec![a + 1, b - 1]) {
                out.push((mm, -c1 * c));
            }
            for (mm, c) in reduce(family, &vec![a + 2, b - 2]) {
                out.push((mm, -c2 * c));
            }
            out
        }
    }
}

impl GradedRing {
    pub fn family(&self) -> RingFamily {
        self.family
    }

    /// Real dimension of the underlying space.
    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    pub fn generators(&self) -> &[(&'static str, u32)] {
        &self.generators
    }

    pub fn basis_len(&self) -> usize {
        self.basis.len()
    }

    /// Integral of a basis monomial given by exponents, after reduction.
    pub fn integral_of_monomial(&self, exps: &[u32]) -> i64 {
        reduce(self.family, &exps.to_vec())
            .into_iter()
            .map(|(m, c)| {
                let i = self.basis.iter().position(|b| *b == m).unwrap();
                c * self.integrals[i]
            })
            .sum()
    }
}

/// Element of a [`GradedRing`], always stored reduced.
#[derive(Clone)]
pub struct RingClass {
    ring: RingHandle,
    coeffs: Vec<Poly>,
}

fn same_ring(a: &RingHandle, b: &RingHandle) -> bool {
    Arc::ptr_eq(a, b) || a.family == b.family
}

impl RingClass {
    pub fn zero(ring: &RingHandle) -> Self {
        RingClass {
            ring: ring.clone(),
            coeffs: vec![Poly::zero(); ring.basis.len()],
        }
    }

    pub fn one(ring: &RingHandle) -> Self {
        Self::constant(ring, Poly::one())
    }

    pub fn constant(ring: &RingHandle, c: Poly) -> Self {
        let mut out = Self::zero(ring);
        out.coeffs[0] = c;
        out
    }

    pub fn scalar(ring: &RingHandle, c: i64) -> Self {
        Self::constant(ring, Poly::constant(q(c)))
    }

    pub fn generator(ring: &RingHandle, name: &str) -> Result<Self, RingError> {
        let g = ring
            .generators
            .iter()
            .position(|(n, _)| *n == name)
            .ok_or_else(|| RingError::UnknownGenerator(name.to_string()))?;
        let mut exps = vec![0; ring.generators.len()];
        exps[g] = 1;
        Ok(Self::monomial(ring, &exps, Poly::one()))
    }

    /// `coeff · ∏ gᵢ^{eᵢ}`, reduced.
    pub fn monomial(ring: &RingHandle, exps: &[u32], coeff: Poly) -> Self {
        let mut out = Self::zero(ring);
        for (m, c) in reduce(ring.family, &exps.to_vec()) {
            let i = ring.basis.iter().position(|b| *b == m).unwrap();
            out.coeffs[i] += &coeff.scale(q(c));
        }
        out
    }

    /// Integer combination `Σ cᵢ gᵢ` of the degree-2 generators.
    pub fn linear(ring: &RingHandle, coeffs: &[i64]) -> Self {
        let mut out = Self::zero(ring);
        for (g, &c) in coeffs.iter().enumerate() {
            let mut exps = vec![0; ring.generators.len()];
            exps[g] = 1;
            out = &out + &Self::monomial(ring, &exps, Poly::constant(q(c)));
        }
        out
    }

    pub fn ring(&self) -> &RingHandle {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    /// Coefficient of the unit.
    pub fn constant_term(&self) -> &Poly {
        &self.coeffs[0]
    }

    /// Coefficient of a basis monomial (zero if it is not a basis element).
    pub fn coeff_of(&self, exps: &[u32]) -> Poly {
        match self.ring.basis.iter().position(|b| b == exps) {
            Some(i) => self.coeffs[i].clone(),
            None => Poly::zero(),
        }
    }

    /// Homogeneous component of real degree `d`.
    pub fn degree_part(&self, d: u32) -> Self {
        let mut out = Self::zero(&self.ring);
        for (i, &deg) in self.ring.degrees.iter().enumerate() {
            if deg == d {
                out.coeffs[i] = self.coeffs[i].clone();
            }
        }
        out
    }

    /// Lowest degree carrying a nonzero coefficient.
    pub fn min_degree(&self) -> Option<u32> {
        self.coeffs
            .iter()
            .zip(&self.ring.degrees)
            .filter(|(c, _)| !c.is_zero())
            .map(|(_, &d)| d)
            .min()
    }

    /// Pairs the top-degree part with the fundamental class; lower-degree
    /// parts integrate to zero.
    pub fn integrate(&self) -> Poly {
        let mut acc = Poly::zero();
        for (c, &w) in self.coeffs.iter().zip(&self.ring.integrals) {
            if w != 0 {
                acc += &c.scale(q(w));
            }
        }
        acc
    }

    /// [`integrate`](Self::integrate) for classes without the formal
    /// variable; `None` if `x` survives.
    pub fn integrate_scalar(&self) -> Option<Q> {
        self.integrate().as_constant()
    }

    pub fn scale(&self, s: Q) -> Self {
        self.scale_poly(&Poly::constant(s))
    }

    pub fn scale_poly(&self, s: &Poly) -> Self {
        RingClass {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, RingError> {
        self.check(rhs)?;
        Ok(RingClass {
            ring: self.ring.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, RingError> {
        self.check(rhs)?;
        let mut out = vec![Poly::zero(); self.coeffs.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for &(k, c) in &self.ring.table[i][j] {
                    out[k] += &ab.scale(q(c));
                }
            }
        }
        Ok(RingClass {
            ring: self.ring.clone(),
            coeffs: out,
        })
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(&self.ring), |acc, _| &acc * self)
    }

    fn check(&self, rhs: &Self) -> Result<(), RingError> {
        if same_ring(&self.ring, &rhs.ring) {
            Ok(())
        } else {
            Err(RingError::Mismatch(
                self.ring.family.to_string(),
                rhs.ring.family.to_string(),
            ))
        }
    }
}

impl PartialEq for RingClass {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for RingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (c, m) in self.coeffs.iter().zip(&self.ring.basis) {
            if c.is_zero() {
                continue;
            }
            let mono: Vec<String> = m
                .iter()
                .zip(&self.ring.generators)
                .filter(|(e, _)| **e > 0)
                .map(|(e, (name, _))| {
                    if *e == 1 {
                        name.to_string()
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            let coeff = match c.as_constant() {
                Some(k) => k.to_string(),
                None => format!("({c})"),
            };
            if mono.is_empty() {
                terms.push(coeff);
            } else {
                terms.push(format!("{coeff}*{}", mono.join("*")));
            }
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Operator forms panic on a ring mismatch; use `try_*` for fallible use.
impl Add for &RingClass {
    type Output = RingClass;
    fn add(self, rhs: &RingClass) -> RingClass {
        self.try_add(rhs).expect("ring mismatch in addition")
    }
}

impl Sub for &RingClass {
    type Output = RingClass;
    fn sub(self, rhs: &RingClass) -> RingClass {
        self + &(-rhs)
    }
}

impl Neg for &RingClass {
    type Output = RingClass;
    fn neg(self) -> RingClass {
        self.scale(-Q::from_integer(1))
    }
}

impl Mul for &RingClass {
    type Output = RingClass;
    fn mul(self, rhs: &RingClass) -> RingClass {
        self.try_mul(rhs).expect("ring mismatch in multiplication")
    }
}

/// Total Chern class `[c₀, c₁, …]` truncated at the base's top degree.
#[derive(Clone, Debug, PartialEq)]
pub struct ChernTotal {
    classes: Vec<RingClass>,
}

impl ChernTotal {
    /// Splits a total class by degree; its degree-0 part must be 1.
    pub fn from_total(total: &RingClass) -> Result<Self, RingError> {
        if *total.constant_term() != Poly::one() {
            return Err(RingError::NotUnit(total.constant_term().to_string()));
        }
        let top = total.ring.top_degree;
        Ok(ChernTotal {
            classes: (0..=top / 2).map(|i| total.degree_part(2 * i)).collect(),
        })
    }

    /// `1 + c₁` for a line bundle.
    pub fn line(c1: &RingClass) -> Self {
        let total = &RingClass::one(c1.ring()) + &c1.degree_part(2);
        Self::from_total(&total).expect("unit by construction")
    }

    pub fn one(ring: &RingHandle) -> Self {
        Self::from_total(&RingClass::one(ring)).expect("unit")
    }

    pub fn ring(&self) -> &RingHandle {
        self.classes[0].ring()
    }

    /// `cᵢ`; zero past the top degree.
    pub fn c(&self, i: usize) -> RingClass {
        self.classes
            .get(i)
            .cloned()
            .unwrap_or_else(|| RingClass::zero(self.ring()))
    }

    pub fn total(&self) -> RingClass {
        self.classes
            .iter()
            .skip(1)
            .fold(self.classes[0].clone(), |acc, c| &acc + c)
    }

    pub fn whitney_sum(&self, other: &Self) -> Result<Self, RingError> {
        Self::from_total(&self.total().try_mul(&other.total())?)
    }

    /// `c⁻¹`, a finite geometric series because `c − 1` is nilpotent.
    pub fn inverse(&self) -> Self {
        let ring = self.ring().clone();
        let r = &self.total() - &RingClass::one(&ring);
        let mut acc = RingClass::one(&ring);
        let mut term = RingClass::one(&ring);
        loop {
            term = &(-&term) * &r;
            if term.is_zero() {
                break;
            }
            acc = &acc + &term;
        }
        Self::from_total(&acc).expect("unit")
    }

    /// Solves `self = result · divisor`.
    pub fn quotient(&self, divisor: &Self) -> Result<Self, RingError> {
        self.whitney_sum(&divisor.inverse())
    }
}

impl fmt::Display for ChernTotal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.total())
    }
}

/// Integral of a scalar class, for tests and callers that know `x` is absent.
pub fn integral(a: &RingClass) -> Q {
    a.integrate_scalar().unwrap_or_else(Q::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(r: &RingHandle) -> RingClass {
        RingClass::generator(r, "h").unwrap()
    }

    #[test]
    fn cpn_basics() {
        let r1 = ring_cpn(1).unwrap();
        assert!(h(&r1).pow(2).is_zero());
        assert_eq!(integral(&h(&r1)), q(1));
        let r3 = ring_cpn(3).unwrap();
        assert_eq!(integral(&h(&r3).pow(3)), q(1));
        assert!(h(&r3).pow(4).is_zero());
        assert!(ring_cpn(0).is_err());
        assert!(ring_cpn(5).is_err());
    }

    #[test]
    fn cp2_hand_expansion() {
        let r = ring_cpn(2).unwrap();
        let one = RingClass::one(&r);
        let a = &one + &h(&r);
        let b = &one + &h(&r).scale(q(2));
        assert_eq!(integral(&(&(&a * &b) * &h(&r))), q(3));
    }

    #[test]
    fn p1xp1_pairings() {
        let r = ring_p1xp1();
        let x = RingClass::generator(&r, "x").unwrap();
        let y = RingClass::generator(&r, "y").unwrap();
        assert_eq!(integral(&(&x * &y)), q(1));
        let u = &x + &y;
        assert_eq!(integral(&u.pow(2)), q(2));
        assert_eq!(integral(&RingClass::linear(&r, &[2, 2]).pow(2)), q(8));
        assert_eq!(integral(&(&(&x + &y) * &(&x - &y))), q(0));
    }

    #[test]
    fn projectivized_table() {
        for k2 in [-3, 0, 1, 8] {
            let r = ring_projectivized(k2);
            assert_eq!(r.integral_of_monomial(&[2, 1]), 1);
            assert_eq!(r.integral_of_monomial(&[1, 2]), 1);
            assert_eq!(r.integral_of_monomial(&[0, 3]), 1 - k2);
            assert_eq!(r.integral_of_monomial(&[3, 0]), 0);
            let xi = RingClass::generator(&r, "xi").unwrap();
            let eta = RingClass::generator(&r, "eta").unwrap();
            let expected = &(&eta * &xi) - &eta.pow(2).scale(q(k2));
            assert_eq!(&xi * &xi, expected);
        }
    }

    #[test]
    fn symbolic_cube() {
        let r = ring_projectivized(3);
        let eta = RingClass::generator(&r, "eta").unwrap();
        let xi = RingClass::generator(&r, "xi").unwrap();
        let omega = &eta.scale(q(2)) + &xi.scale_poly(&Poly::x());
        assert_eq!(omega.pow(3).integrate(), Poly::from_ints(&[0, 12, 6, -2]));
    }

    #[test]
    fn whitney_examples() {
        let r1 = ring_cpn(1).unwrap();
        let l = ChernTotal::line(&h(&r1));
        let n = l.whitney_sum(&l).unwrap().whitney_sum(&l).unwrap();
        assert_eq!(n.total(), &RingClass::one(&r1) + &h(&r1).scale(q(3)));

        let r2 = ring_cpn(2).unwrap();
        let l = ChernTotal::line(&h(&r2));
        let two = l.whitney_sum(&l).unwrap();
        assert_eq!(two.c(1), h(&r2).scale(q(2)));
        assert_eq!(two.c(2), h(&r2).pow(2));

        let three = two.whitney_sum(&l).unwrap();
        let o2 = ChernTotal::line(&h(&r2).scale(q(2)));
        let n = three.quotient(&o2).unwrap();
        assert_eq!(n.c(1), h(&r2));
        assert_eq!(n.c(2), h(&r2).pow(2));
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = RingClass::one(&ring_cpn(1).unwrap());
        let b = RingClass::one(&ring_cpn(2).unwrap());
        assert!(matches!(a.try_mul(&b), Err(RingError::Mismatch(..))));
        let c1 = ChernTotal::one(&ring_cpn(1).unwrap());
        let c2 = ChernTotal::one(&ring_p1xp1());
        assert!(c1.whitney_sum(&c2).is_err());
    }
}
