//! Exact univariate polynomials over the rationals.
//!
//! The variable is called `x` throughout. It plays two roles: the formal
//! symplectic parameter adjoined to ring coefficients, and the moment-map
//! coordinate of Duistermaat–Heckman profiles.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Exact rational scalar used everywhere in the crate.
pub type Q = Ratio<i128>;

/// Shorthand for an integral rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(n as i128)
}

/// Dense coefficient list, lowest degree first, with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn x() -> Self {
        Self::new(vec![Q::zero(), Q::one()])
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| q(c)).collect())
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).copied().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Q {
        self.coeffs.last().copied().unwrap_or_else(Q::zero)
    }

    /// The constant term if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Q> {
        match self.coeffs.len() {
            0 => Some(Q::zero()),
            1 => Some(self.coeffs[0]),
            _ => None,
        }
    }

    pub fn eval(&self, at: Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, &c| acc * at + c)
    }

    pub fn scale(&self, s: Q) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * Q::from_integer(i as i128))
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let mut out = vec![Q::zero()];
        out.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| c / Q::from_integer(i as i128 + 1)),
        );
        Self::new(out)
    }

    /// Exact definite integral over `[a, b]`.
    pub fn integrate(&self, a: Q, b: Q) -> Q {
        let anti = self.antiderivative();
        anti.eval(b) - anti.eval(a)
    }

    /// `p(x + shift)`.
    pub fn shift(&self, shift: Q) -> Self {
        let step = Poly::new(vec![shift, Q::one()]);
        self.compose(&step)
    }

    /// `p(x) ↦ p(inner(x))`.
    pub fn compose(&self, inner: &Poly) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, &c| &(&acc * inner) + &Poly::constant(c))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Poly::one(), |acc, _| &acc * self)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Q::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = *rem.last().unwrap() / lead;
            quot[k] = c;
            for (i, &dc) in d.coeffs.iter().enumerate() {
                rem[k + i] -= c * dc;
            }
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            let l = a.leading();
            a.scale(Q::one() / l)
        }
    }
}

/// Serializes a rational as its `p/q` string.
pub fn serialize_q<S: Serializer>(v: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Coefficient strings, lowest degree first.
impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Renders as `12x + 6x^2 - 7x^3`, lowest degree first.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        *self = &*self + rhs;
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_eval() {
        let p = Poly::from_ints(&[0, 12, 6, -7]);
        assert_eq!(p.to_string(), "12x + 6x^2 - 7x^3");
        assert_eq!(p.eval(q(2)), q(24 + 24 - 56));
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(Poly::from_ints(&[-1, -1]).to_string(), "-1 - x");
    }

    #[test]
    fn integrate_cubic() {
        // 4 * integral of 12x + 6x^2 + (1-k)x^3 over [0,2] is 176 - 16k
        for k in -5..=9 {
            let p = Poly::from_ints(&[0, 12, 6, 1 - k]);
            assert_eq!(p.integrate(q(0), q(2)) * q(4), q(176 - 16 * k));
        }
    }

    #[test]
    fn shift_and_compose() {
        let p = Poly::from_ints(&[0, 0, 0, 1]);
        let shifted = p.shift(q(-2));
        assert_eq!(shifted, Poly::from_ints(&[-8, 12, -6, 1]));
    }

    #[test]
    fn division_and_gcd() {
        let a = Poly::from_ints(&[-2, 1]) * Poly::from_ints(&[-2, 1]) * Poly::from_ints(&[1, 1]);
        let (quot, rem) = a.div_rem(&Poly::from_ints(&[-2, 1]));
        assert!(rem.is_zero());
        assert_eq!(quot, Poly::from_ints(&[-2, 1]) * Poly::from_ints(&[1, 1]));
        let g = a.gcd(&a.derivative());
        assert_eq!(g, Poly::from_ints(&[-2, 1]));
    }
}
