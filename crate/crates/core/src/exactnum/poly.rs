//! Dense univariate polynomials over an exact field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::Rational;
use crate::error::{Error, Result};

/// Exact field scalar. Implemented by [`Rational`] and [`super::CycloNumber`].
pub trait Scalar:
    Clone + PartialEq + fmt::Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn inverse(&self) -> Result<Self>;
    fn from_rational(r: Rational) -> Self;
}

impl Scalar for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn inverse(&self) -> Result<Self> {
        self.recip()
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
}

/// Polynomial with ascending coefficients; trailing zeros are always trimmed,
/// so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly<S> {
    coeffs: Vec<S>,
}

pub type QPoly = Poly<Rational>;

impl<S: Scalar> Poly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![S::one()] }
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    /// `c x^k`
    pub fn monomial(c: S, k: usize) -> Self {
        let mut v = vec![S::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn x() -> Self {
        Self::monomial(S::one(), 1)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// Coefficient of `x^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    /// Largest power of `x` dividing the polynomial; `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn eval(&self, x: &S) -> S {
        self.coeffs.iter().rev().fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Euclidean division; `Err` when dividing by zero.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = d.coeffs[dd].inverse()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quo = vec![S::zero(); rem.len() - dd];
        for k in (0..quo.len()).rev() {
            let c = rem[k + dd].clone() * lead_inv.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * dj.clone();
            }
            quo[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quo), Self::new(rem)))
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::Inconsistent("polynomial division is not exact".into()))
        }
    }

    pub fn monic(&self) -> Result<Self> {
        let lead = self.leading().ok_or(Error::DivisionByZero)?;
        Ok(self.scale(&lead.inverse()?))
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic().expect("nonzero")
        }
    }

    /// Extended Euclid: returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> Result<(Self, Self, Self)> {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (qt, r) = r0.div_rem(&r1)?;
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&qt * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&qt * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        let lead = r0.leading().ok_or(Error::DivisionByZero)?.inverse()?;
        Ok((r0.scale(&lead), s0.scale(&lead), t0.scale(&lead)))
    }

    /// `p(x) -> p(1 - x)`.
    pub fn reflect_at_one(&self) -> Self {
        let one_minus_x = Self::new(vec![S::one(), -S::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * &one_minus_x) + &Self::constant(c.clone()))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<S: Scalar> Add for &Poly<S> {
    type Output = Poly<S>;
    fn add(self, rhs: &Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<S: Scalar> Sub for &Poly<S> {
    type Output = Poly<S>;
    fn sub(self, rhs: &Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<S: Scalar> Mul for &Poly<S> {
    type Output = Poly<S>;
    fn mul(self, rhs: &Poly<S>) -> Poly<S> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<S: Scalar> Neg for &Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{k}")?,
            }
        }
        Ok(())
    }
}
