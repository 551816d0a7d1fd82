//! Truncated power series, Laurent expansions at t = 1, and rational Hilbert
//! series.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{binomial, Poly, QPoly, Rational, Scalar};

/// Prefix `c_0 .. c_T` of a formal power series; the first untracked term is
/// `x^(T+1)`.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Serialize", deserialize = "S: Deserialize<'de> + Scalar"))]
#[serde(try_from = "SeriesRepr<S>")]
pub struct TruncatedSeries<S = Rational> {
    truncation: usize,
    coeffs: Vec<S>,
}

#[derive(Deserialize)]
struct SeriesRepr<S> {
    truncation: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> TryFrom<SeriesRepr<S>> for TruncatedSeries<S> {
    type Error = Error;
    fn try_from(r: SeriesRepr<S>) -> Result<Self> {
        if r.coeffs.len() > r.truncation + 1 {
            return Err(Error::InvalidInput(format!(
                "{} coefficients exceed truncation {}",
                r.coeffs.len(),
                r.truncation
            )));
        }
        Ok(TruncatedSeries::new(r.coeffs, r.truncation))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl<S: Scalar> TruncatedSeries<S> {
    /// Pads with zeros (or drops terms) so that exactly `T + 1` coefficients are kept.
    pub fn new(mut coeffs: Vec<S>, truncation: usize) -> Self {
        coeffs.resize(truncation + 1, S::zero());
        TruncatedSeries { truncation, coeffs }
    }

    pub fn zero(truncation: usize) -> Self {
        Self::new(Vec::new(), truncation)
    }

    pub fn one(truncation: usize) -> Self {
        Self::new(vec![S::one()], truncation)
    }

    pub fn from_poly(p: &Poly<S>, truncation: usize) -> Self {
        Self::new(p.coeffs().to_vec(), truncation)
    }

    /// The identity series `x`.
    pub fn x(truncation: usize) -> Self {
        Self::new(vec![S::zero(), S::one()], truncation)
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Option<&S> {
        self.coeffs.get(k)
    }

    /// Drops terms above `truncation` (never extends precision).
    pub fn truncate(&self, truncation: usize) -> Self {
        let t = truncation.min(self.truncation);
        Self::new(self.coeffs[..=t].to_vec(), t)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &S) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a.clone() * c.clone()).collect();
        TruncatedSeries { truncation: self.truncation, coeffs }
    }

    /// Multiplies by `x^k`; the truncation is kept, high terms fall off.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![S::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs, self.truncation)
    }

    pub fn add(&self, other: &Self) -> Self {
        let t = self.truncation.min(other.truncation);
        let coeffs = (0..=t).map(|k| self.coeffs[k].clone() + other.coeffs[k].clone()).collect();
        TruncatedSeries { truncation: t, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let t = self.truncation.min(other.truncation);
        let coeffs = (0..=t).map(|k| self.coeffs[k].clone() - other.coeffs[k].clone()).collect();
        TruncatedSeries { truncation: t, coeffs }
    }

    /// Cauchy product.
    pub fn mul(&self, other: &Self) -> Self {
        let t = self.truncation.min(other.truncation);
        let mut coeffs = vec![S::zero(); t + 1];
        for (i, a) in self.coeffs.iter().take(t + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(t + 1 - i).enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        TruncatedSeries { truncation: t, coeffs }
    }

    /// Multiplicative inverse; needs an invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeffs[0].inverse()?;
        let t = self.truncation;
        let mut out: Vec<S> = Vec::with_capacity(t + 1);
        out.push(c0.clone());
        for k in 1..=t {
            let s = (1..=k).fold(S::zero(), |acc, j| acc + self.coeffs[j].clone() * out[k - j].clone());
            out.push(-(s * c0.clone()));
        }
        Ok(TruncatedSeries { truncation: t, coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.truncation), |acc, _| acc.mul(self))
    }

    /// `self ∘ inner`; the inner series must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::InvalidInput("composition needs an inner series without constant term".into()));
        }
        let t = self.truncation.min(inner.truncation);
        let inner = inner.truncate(t);
        // Horner from the top coefficient down
        let mut acc = Self::zero(t);
        for c in self.coeffs[..=t].iter().rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] = acc.coeffs[0].clone() + c.clone();
        }
        Ok(acc)
    }

    /// Exact derivative; the last coefficient becomes untracked.
    pub fn derivative(&self) -> Self {
        if self.truncation == 0 {
            return Self::zero(0);
        }
        let coeffs = (1..=self.truncation)
            .map(|k| S::from_rational(Rational::from(k as i64)) * self.coeffs[k].clone())
            .collect();
        Self::new(coeffs, self.truncation - 1)
    }
}

/// Coefficient-wise arithmetic to the shared truncation.
pub fn series_arith<S: Scalar>(a: &TruncatedSeries<S>, b: &TruncatedSeries<S>, op: SeriesOp) -> Result<TruncatedSeries<S>> {
    Ok(match op {
        SeriesOp::Add => a.add(b),
        SeriesOp::Sub => a.sub(b),
        SeriesOp::Mul => a.mul(b),
        SeriesOp::Div => a.div(b)?,
    })
}

/// The series of `x / (x - 1) = -x - x^2 - ...`.
pub fn mobius_series(truncation: usize) -> TruncatedSeries {
    let mut coeffs = vec![-Rational::one(); truncation + 1];
    coeffs[0] = Rational::zero();
    TruncatedSeries::new(coeffs, truncation)
}

/// `φ(x / (x - 1))` to the truncation of `φ`.
pub fn compose_mobius(phi: &TruncatedSeries) -> TruncatedSeries {
    phi.compose(&mobius_series(phi.truncation())).expect("inner series has zero constant term")
}

/// `(1 + c x)^e` for any integer `e`; generalized binomial series when `e < 0`.
pub fn linear_power(c: &Rational, e: i64, truncation: usize) -> TruncatedSeries {
    let mut coeffs = Vec::with_capacity(truncation + 1);
    let mut cp = Rational::one();
    for k in 0..=truncation as i64 {
        coeffs.push(binomial(e, k) * &cp);
        cp *= c;
    }
    TruncatedSeries::new(coeffs, truncation)
}

/// `(1 - x)^r`.
pub fn one_minus_x_pow(r: i64, truncation: usize) -> TruncatedSeries {
    linear_power(&-Rational::one(), r, truncation)
}

/// `(x - 2)^e = (-2)^e (1 - x/2)^e`.
pub fn x_minus_two_pow(e: i64, truncation: usize) -> TruncatedSeries {
    let lead = Rational::from(-2).pow(e).expect("-2 is invertible");
    linear_power(&Rational::frac(-1, 2), e, truncation).scale(&lead)
}

impl fmt::Display for TruncatedSeries<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => c.to_string(),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{k}"),
            })
            .collect();
        let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        write!(f, "{body} + O(x^{})", self.truncation + 1)
    }
}

/// `Σ γ_i (1 - t)^(i - d)`: the Laurent expansion of a Hilbert series at t = 1.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct LaurentAtOne {
    pub pole_order: usize,
    pub gammas: Vec<Rational>,
}

impl LaurentAtOne {
    pub fn new(pole_order: usize, gammas: Vec<Rational>) -> Self {
        LaurentAtOne { pole_order, gammas }
    }

    /// `2 γ_1 / γ_0`.
    pub fn degree(&self) -> Result<Rational> {
        let g0 = self.gammas.first().ok_or_else(|| Error::InsufficientCoefficients("need gamma_0".into()))?;
        let g1 = self.gammas.get(1).cloned().unwrap_or_else(Rational::zero);
        (Rational::from(2) * g1).checked_div(g0)
    }

    /// Taylor coefficients at t = 0 of the finite sum `Σ_{i<=K} γ_i (1-t)^(i-d)`.
    ///
    /// Agrees with the full series only when the expansion terminates, e.g. for
    /// `P(t) / (1-t)^d` with `K >= deg P`.
    pub fn taylor_at_zero(&self, truncation: usize) -> TruncatedSeries {
        let mut out = TruncatedSeries::zero(truncation);
        for (i, g) in self.gammas.iter().enumerate() {
            let term = one_minus_x_pow(i as i64 - self.pole_order as i64, truncation).scale(g);
            out = out.add(&term);
        }
        out
    }
}

/// The substitution `H(t) -> x^d H(1 - x)`: the γ vector read as a power series.
pub fn laurent_to_phi(h: &LaurentAtOne) -> TruncatedSeries {
    let t = h.gammas.len().saturating_sub(1);
    TruncatedSeries::new(h.gammas.clone(), t)
}

/// `P(t) / Q(t)` over Q with the common factor removed.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(try_from = "RationalRepr", into = "RationalRepr")]
pub struct RationalFunction {
    num: QPoly,
    den: QPoly,
}

#[derive(Serialize, Deserialize)]
struct RationalRepr {
    num: Vec<Rational>,
    den: Vec<Rational>,
}

impl TryFrom<RationalRepr> for RationalFunction {
    type Error = Error;
    fn try_from(r: RationalRepr) -> Result<Self> {
        RationalFunction::new(Poly::new(r.num), Poly::new(r.den))
    }
}

impl From<RationalFunction> for RationalRepr {
    fn from(f: RationalFunction) -> Self {
        RationalRepr { num: f.num.into_coeffs(), den: f.den.into_coeffs() }
    }
}

impl RationalFunction {
    /// Cancels the gcd and scales so that the lowest nonzero coefficient of
    /// the denominator is 1.
    pub fn new(num: QPoly, den: QPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.degree().unwrap_or(0) > 0 {
            (num.div_exact(&g)?, den.div_exact(&g)?)
        } else {
            (num, den)
        };
        let v = den.valuation().expect("nonzero");
        let lead = den.coeffs()[v].recip()?;
        num = num.scale(&lead);
        den = den.scale(&lead);
        Ok(RationalFunction { num, den })
    }

    pub fn numerator(&self) -> &QPoly {
        &self.num
    }

    pub fn denominator(&self) -> &QPoly {
        &self.den
    }

    /// `deg P - deg Q`.
    pub fn a_invariant(&self) -> Option<i64> {
        let p = self.num.degree()? as i64;
        Some(p - self.den.degree()? as i64)
    }

    /// Power series at t = 0; needs `Q(0) != 0`.
    pub fn taylor(&self, truncation: usize) -> Result<TruncatedSeries> {
        TruncatedSeries::from_poly(&self.num, truncation).div(&TruncatedSeries::from_poly(&self.den, truncation))
    }
}

/// `1 - t + 2/3 t^2` style rendering.
fn write_qpoly(f: &mut fmt::Formatter<'_>, p: &QPoly) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    for (k, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let a = c.abs();
        match (first, c.is_negative()) {
            (true, true) => write!(f, "-")?,
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
            (true, false) => {}
        }
        first = false;
        let coeff = if k > 0 && a.is_one() { String::new() } else if k > 0 { format!("{a} ") } else { a.to_string() };
        match k {
            0 => write!(f, "{coeff}")?,
            1 => write!(f, "{coeff}t")?,
            _ => write!(f, "{coeff}t^{k}")?,
        }
    }
    Ok(())
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        write_qpoly(f, &self.num)?;
        write!(f, ") / (")?;
        write_qpoly(f, &self.den)?;
        write!(f, ")")
    }
}

/// Laurent expansion at t = 1 to `γ_K`.
///
/// Substitutes `t = 1 - x`, cancels the power of `x` in the denominator to get
/// the pole order, and series-divides. A function vanishing at t = 1 is
/// reported with pole order 0 and leading zero γ's.
pub fn rational_to_laurent(f: &RationalFunction, k: usize) -> Result<LaurentAtOne> {
    let num = f.num.reflect_at_one();
    let den = f.den.reflect_at_one();
    let vd = den.valuation().ok_or(Error::DivisionByZero)?;
    let Some(vn) = num.valuation() else {
        return Ok(LaurentAtOne::new(0, vec![Rational::zero(); k + 1]));
    };
    let strip = |p: &QPoly, v: usize| Poly::new(p.coeffs()[v..].to_vec());
    let quotient = TruncatedSeries::from_poly(&strip(&num, vn), k).div(&TruncatedSeries::from_poly(&strip(&den, vd), k))?;
    if vn <= vd {
        Ok(LaurentAtOne::new(vd - vn, quotient.into_coeffs()))
    } else {
        Ok(LaurentAtOne::new(0, quotient.shift_up(vn - vd).into_coeffs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::q;

    fn s(c: &[Rational], t: usize) -> TruncatedSeries {
        TruncatedSeries::new(c.to_vec(), t)
    }

    fn ints(c: &[i64]) -> Vec<Rational> {
        c.iter().map(|&v| Rational::from(v)).collect()
    }

    fn poly(c: &[i64]) -> QPoly {
        Poly::new(ints(c))
    }

    #[test]
    fn arithmetic_examples() {
        let a = s(&ints(&[1, 1]), 4);
        let b = s(&ints(&[1, -1]), 4);
        assert_eq!(series_arith(&a, &b, SeriesOp::Mul).unwrap(), s(&ints(&[1, 0, -1]), 4));

        let two_minus_x = s(&ints(&[2, -1]), 5);
        let quo = series_arith(&TruncatedSeries::one(5), &two_minus_x, SeriesOp::Div).unwrap();
        assert_eq!(quo.coeffs(), &[q(1, 2), q(1, 4), q(1, 8), q(1, 16), q(1, 32), q(1, 64)]);
        // oracle: multiplying back gives 1
        assert_eq!(quo.mul(&two_minus_x), TruncatedSeries::one(5));

        let xm2 = s(&ints(&[-2, 1]), 6);
        assert_eq!(series_arith(&xm2, &xm2, SeriesOp::Div).unwrap(), TruncatedSeries::one(6));
        let bad = s(&ints(&[0, 1]), 3);
        assert_eq!(series_arith(&a, &bad, SeriesOp::Div).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn truncation_is_the_minimum() {
        let a = TruncatedSeries::<Rational>::one(3);
        let b = TruncatedSeries::<Rational>::one(7);
        assert_eq!(a.add(&b).truncation(), 3);
        assert_eq!(a.mul(&b).truncation(), 3);
    }

    #[test]
    fn mobius_examples() {
        let x = TruncatedSeries::<Rational>::x(6);
        assert_eq!(compose_mobius(&x), mobius_series(6));
        // λ1 = x^2 / (1 - x) is fixed
        let mut c = vec![Rational::one(); 9];
        c[0] = Rational::zero();
        c[1] = Rational::zero();
        let lambda1 = s(&c, 8);
        assert_eq!(compose_mobius(&lambda1), lambda1);
        assert_eq!(compose_mobius(&TruncatedSeries::one(5)), TruncatedSeries::one(5));
    }

    #[test]
    fn binomial_series() {
        // (1 - x)^-2 = 1 + 2x + 3x^2 + ...
        assert_eq!(one_minus_x_pow(-2, 4).coeffs(), ints(&[1, 2, 3, 4, 5]).as_slice());
        assert_eq!(one_minus_x_pow(3, 5).coeffs(), ints(&[1, -3, 3, -1, 0, 0]).as_slice());
        // (x - 2)^-1 = -1/2 - x/4 - ...
        assert_eq!(x_minus_two_pow(-1, 2).coeffs(), &[q(-1, 2), q(-1, 4), q(-1, 8)]);
        assert_eq!(x_minus_two_pow(2, 3).coeffs(), ints(&[4, -4, 1, 0]).as_slice());
    }

    #[test]
    fn laurent_examples() {
        let f = RationalFunction::new(poly(&[1]), poly(&[1, -1])).unwrap();
        assert_eq!(rational_to_laurent(&f, 3).unwrap(), LaurentAtOne::new(1, ints(&[1, 0, 0, 0])));

        let f = RationalFunction::new(poly(&[1]), poly(&[1, 0, -1])).unwrap();
        let h = rational_to_laurent(&f, 3).unwrap();
        assert_eq!(h.pole_order, 1);
        assert_eq!(h.gammas, vec![q(1, 2), q(1, 4), q(1, 8), q(1, 16)]);

        let f = RationalFunction::new(poly(&[1, 0, 0, -1]), poly(&[1, -2, 1])).unwrap();
        assert_eq!(rational_to_laurent(&f, 2).unwrap(), LaurentAtOne::new(1, ints(&[3, -3, 1])));
    }

    #[test]
    fn laurent_of_function_vanishing_at_one() {
        // (1 - t)^2 / (1 + t): zero of order 2 at t = 1
        let f = RationalFunction::new(poly(&[1, -2, 1]), poly(&[1, 1])).unwrap();
        let h = rational_to_laurent(&f, 3).unwrap();
        assert_eq!(h.pole_order, 0);
        assert_eq!(h.gammas, vec![q(0, 1), q(0, 1), q(1, 2), q(1, 4)]);
    }

    #[test]
    fn rational_function_is_reduced() {
        let f = RationalFunction::new(poly(&[1, 0, 0, -1]), poly(&[2, -4, 2])).unwrap();
        assert_eq!(f.numerator(), &poly(&[1, 1, 1]).scale(&q(1, 2)));
        assert_eq!(f.denominator(), &poly(&[1, -1]));
        assert_eq!(f.a_invariant(), Some(1));
        assert!(RationalFunction::new(poly(&[1]), QPoly::zero()).is_err());
    }

    #[test]
    fn phi_retags() {
        let h = LaurentAtOne::new(4, vec![q(1, 12), q(1, 24), q(1, 24), q(1, 72)]);
        let phi = laurent_to_phi(&h);
        assert_eq!(phi.truncation(), 3);
        assert_eq!(phi.coeffs(), h.gammas.as_slice());
        let phi = laurent_to_phi(&LaurentAtOne::new(0, ints(&[2, -1])));
        assert_eq!(phi.to_string(), "2 + -1*x + O(x^2)");
    }

    #[test]
    fn json_forms() {
        let s = TruncatedSeries::new(vec![q(1, 2)], 2);
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"truncation":2,"coeffs":["1/2","0","0"]}"#);
        let back: TruncatedSeries = serde_json::from_str(r#"{"truncation":3,"coeffs":["1"]}"#).unwrap();
        assert_eq!(back, TruncatedSeries::one(3));
        let f: RationalFunction = serde_json::from_str(r#"{"num":[1],"den":[1,0,-1]}"#).unwrap();
        assert_eq!(serde_json::to_string(&f).unwrap(), r#"{"num":["1"],"den":["1","0","-1"]}"#);
        assert_eq!(f.to_string(), "(1) / (1 - t^2)");
        let h = LaurentAtOne::new(1, vec![q(1, 2)]);
        assert_eq!(serde_json::to_string(&h).unwrap(), r#"{"pole_order":1,"gammas":["1/2"]}"#);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn series(t: usize) -> impl Strategy<Value = TruncatedSeries> {
            proptest::collection::vec((-9i64..9, 1i64..5), t + 1)
                .prop_map(move |c| TruncatedSeries::new(c.into_iter().map(|(n, d)| q(n, d)).collect(), t))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]

            #[test]
            fn mobius_is_an_involution(phi in series(12)) {
                prop_assert_eq!(compose_mobius(&compose_mobius(&phi)), phi);
            }

            #[test]
            fn div_then_mul_round_trips(a in series(10), b in series(10)) {
                prop_assume!(!b.coeffs()[0].is_zero());
                prop_assert_eq!(a.div(&b).unwrap().mul(&b), a);
            }

            #[test]
            fn terminating_laurent_reexpands_to_taylor(
                num in proptest::collection::vec(-5i64..6, 1..6),
                d in 0usize..4,
            ) {
                let p = poly(&num);
                prop_assume!(!p.is_zero() && !p.eval(&Rational::one()).is_zero());
                let den = poly(&[1, -1]).pow(d as u32);
                let f = RationalFunction::new(p, den).unwrap();
                let h = rational_to_laurent(&f, 8).unwrap();
                prop_assert_eq!(h.pole_order, d);
                prop_assert_eq!(h.taylor_at_zero(10), f.taylor(10).unwrap());
            }
        }
    }
}
