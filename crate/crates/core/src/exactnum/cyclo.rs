//! Arithmetic in the cyclotomic fields Q(ζ_N).
//!
//! An element is a polynomial in ζ_N of degree below φ(N), reduced modulo the
//! N-th cyclotomic polynomial after every operation. Elements of different
//! orders are lifted to the lcm of their orders before they are combined, so
//! order-1 elements behave as plain rationals.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::poly::{Poly, QPoly, Scalar};
use super::Rational;
use crate::error::{Error, Result};

fn phi_cache() -> &'static Mutex<HashMap<u64, Arc<QPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<QPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Φ_N, obtained by dividing `x^N - 1` by Φ_d for every proper divisor d of N.
pub fn cyclotomic_polynomial(n: u64) -> Result<Arc<QPoly>> {
    if n == 0 {
        return Err(Error::InvalidInput("cyclotomic order must be positive".into()));
    }
    if let Some(p) = phi_cache().lock().expect("cache poisoned").get(&n) {
        return Ok(p.clone());
    }
    let mut poly = Poly::monomial(Rational::one(), n as usize);
    poly = &poly - &QPoly::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        poly = poly.div_exact(cyclotomic_polynomial(d)?.as_ref())?;
    }
    let poly = Arc::new(poly);
    phi_cache().lock().expect("cache poisoned").insert(n, poly.clone());
    Ok(poly)
}

/// Euler's totient, i.e. the degree of Φ_N.
pub fn totient(n: u64) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

/// Element of Q(ζ_N).
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "CycloRepr", into = "CycloRepr")]
pub struct CycloNumber {
    order: u64,
    coeffs: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct CycloRepr {
    order: u64,
    coeffs: Vec<Rational>,
}

impl TryFrom<CycloRepr> for CycloNumber {
    type Error = Error;
    fn try_from(r: CycloRepr) -> Result<Self> {
        CycloNumber::from_poly_coeffs(r.order, r.coeffs)
    }
}

impl From<CycloNumber> for CycloRepr {
    fn from(c: CycloNumber) -> Self {
        CycloRepr { order: c.order, coeffs: c.coeffs }
    }
}

fn reduce(order: u64, coeffs: Vec<Rational>) -> Result<Vec<Rational>> {
    let phi = cyclotomic_polynomial(order)?;
    let deg = phi.degree().expect("Φ_N is nonzero");
    let mut rem = Poly::new(coeffs);
    if rem.degree().is_some_and(|d| d >= deg) {
        rem = rem.div_rem(&phi)?.1;
    }
    let mut out = rem.into_coeffs();
    out.resize(deg, Rational::zero());
    Ok(out)
}

impl CycloNumber {
    /// Reduces an arbitrary polynomial in ζ_N.
    pub fn from_poly_coeffs(order: u64, coeffs: Vec<Rational>) -> Result<Self> {
        Ok(CycloNumber { order, coeffs: reduce(order, coeffs)? })
    }

    pub fn from_rational(order: u64, r: Rational) -> Result<Self> {
        Self::from_poly_coeffs(order, vec![r])
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn zero_of(order: u64) -> Self {
        CycloNumber { order, coeffs: vec![Rational::zero(); totient(order)] }
    }

    pub fn one_of(order: u64) -> Self {
        let mut c = Self::zero_of(order);
        c.coeffs[0] = Rational::one();
        c
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    /// The rational value, when the element lies in Q.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Rational::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Lifts to Q(ζ_M) for a multiple M of the current order (ζ_N = ζ_M^(M/N)).
    pub fn lift(&self, target: u64) -> Result<Self> {
        if target == self.order {
            return Ok(self.clone());
        }
        if !target.is_multiple_of(self.order) {
            return Err(Error::InvalidInput(format!("cannot lift order {} to {}", self.order, target)));
        }
        let step = (target / self.order) as usize;
        let mut coeffs = vec![Rational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k * step] = c.clone();
        }
        Self::from_poly_coeffs(target, coeffs)
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let l = self.order.lcm(&other.order);
        (self.lift(l).expect("lcm is a multiple"), other.lift(l).expect("lcm is a multiple"))
    }

    /// Multiplicative inverse via the extended gcd with Φ_N.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let phi = cyclotomic_polynomial(self.order)?;
        let a = Poly::new(self.coeffs.clone());
        let (g, s, _) = a.ext_gcd(&phi)?;
        if g.degree() != Some(0) {
            return Err(Error::Inconsistent("cyclotomic polynomial is reducible".into()));
        }
        Self::from_poly_coeffs(self.order, s.into_coeffs())
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut out = Self::one_of(self.order);
        for _ in 0..e {
            out = out * self.clone();
        }
        out
    }
}

/// ζ_N^k, reduced modulo Φ_N.
pub fn embed_root(n: u64, k: i64) -> Result<CycloNumber> {
    if n == 0 {
        return Err(Error::InvalidInput("root of unity order must be positive".into()));
    }
    let e = k.rem_euclid(n as i64) as usize;
    let mut coeffs = vec![Rational::zero(); e + 1];
    coeffs[e] = Rational::one();
    CycloNumber::from_poly_coeffs(n, coeffs)
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Add for CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: Self) -> Self {
        let (a, b) = if self.order == rhs.order { (self, rhs) } else { self.common(&rhs) };
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        CycloNumber { order: a.order, coeffs }
    }
}

impl Sub for CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> Self {
        CycloNumber { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = if self.order == rhs.order { (self, rhs) } else { self.common(&rhs) };
        let prod = &Poly::new(a.coeffs) * &Poly::new(b.coeffs);
        CycloNumber::from_poly_coeffs(a.order, prod.into_coeffs()).expect("order already validated")
    }
}

impl Scalar for CycloNumber {
    fn zero() -> Self {
        CycloNumber::zero_of(1)
    }
    fn one() -> Self {
        CycloNumber::one_of(1)
    }
    fn is_zero(&self) -> bool {
        CycloNumber::is_zero(self)
    }
    fn inverse(&self) -> Result<Self> {
        CycloNumber::inverse(self)
    }
    fn from_rational(r: Rational) -> Self {
        CycloNumber { order: 1, coeffs: vec![r] }
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => c.to_string(),
                1 => format!("{c}*z{}", self.order),
                _ => format!("{c}*z{}^{k}", self.order),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo[{}]({})", self.order, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::q;

    fn ints(p: &QPoly) -> Vec<i64> {
        p.coeffs().iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(ints(&cyclotomic_polynomial(1).unwrap()), vec![-1, 1]);
        assert_eq!(ints(&cyclotomic_polynomial(2).unwrap()), vec![1, 1]);
        assert_eq!(ints(&cyclotomic_polynomial(6).unwrap()), vec![1, -1, 1]);
        assert_eq!(ints(&cyclotomic_polynomial(12).unwrap()), vec![1, 0, -1, 0, 1]);
        assert!(cyclotomic_polynomial(0).is_err());
    }

    #[test]
    fn phi6_by_long_division() {
        // independent: (x^6 - 1) / ((x - 1)(x + 1)(x^2 + x + 1)) by hand-built divisors
        let x6 = &Poly::monomial(Rational::one(), 6) - &QPoly::one();
        let d = &(&Poly::new(vec![q(-1, 1), q(1, 1)]) * &Poly::new(vec![q(1, 1), q(1, 1)]))
            * &Poly::new(vec![q(1, 1), q(1, 1), q(1, 1)]);
        let quo = x6.div_exact(&d).unwrap();
        assert_eq!(&quo, cyclotomic_polynomial(6).unwrap().as_ref());
    }

    #[test]
    fn product_of_divisors_is_x_n_minus_one() {
        for n in 1..=30u64 {
            let prod = (1..=n)
                .filter(|d| n % d == 0)
                .fold(QPoly::one(), |acc, d| &acc * cyclotomic_polynomial(d).unwrap().as_ref());
            let target = &Poly::monomial(Rational::one(), n as usize) - &QPoly::one();
            assert_eq!(prod, target, "n = {n}");
            assert_eq!(cyclotomic_polynomial(n).unwrap().degree(), Some(totient(n)));
        }
    }

    #[test]
    fn roots() {
        assert_eq!(embed_root(6, 0).unwrap(), CycloNumber::one_of(6));
        let z = embed_root(6, 1).unwrap();
        let cubed = z.clone() * z.clone() * z.clone();
        assert_eq!(cubed, embed_root(6, 3).unwrap());
        assert_eq!(embed_root(6, 3).unwrap().to_rational(), Some(q(-1, 1)));
        assert_eq!(embed_root(2, 1).unwrap().to_rational(), Some(q(-1, 1)));
        assert_eq!(z.pow(6), CycloNumber::one_of(6));
    }

    #[test]
    fn inverses() {
        assert_eq!(CycloNumber::one_of(6).inverse().unwrap(), CycloNumber::one_of(6));
        let z = embed_root(6, 1).unwrap();
        let zi = z.inverse().unwrap();
        assert_eq!(zi, embed_root(6, 5).unwrap());
        assert_eq!(z * zi, CycloNumber::one_of(6));
        let m1 = embed_root(2, 1).unwrap();
        assert_eq!(m1.inverse().unwrap(), m1);
        assert_eq!(CycloNumber::zero_of(5).inverse().unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn mixed_orders_coerce_to_lcm() {
        // ζ_2 = -1 and ζ_3 live together in Q(ζ_6): -ζ_3 = ζ_6^5
        let prod = embed_root(2, 1).unwrap() * embed_root(3, 1).unwrap();
        assert_eq!(prod.order(), 6);
        assert_eq!(prod, embed_root(6, 5).unwrap());
        assert_eq!(embed_root(3, 1).unwrap(), embed_root(6, 2).unwrap());
    }

    #[test]
    fn json_shape() {
        let z = embed_root(6, 2).unwrap();
        let s = serde_json::to_string(&z).unwrap();
        assert_eq!(s, r#"{"order":6,"coeffs":["-1","1"]}"#);
        let back: CycloNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(back, z);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn element() -> impl Strategy<Value = CycloNumber> {
            (1u64..=24, proptest::collection::vec(-6i64..6, 1..8)).prop_map(|(n, c)| {
                CycloNumber::from_poly_coeffs(n, c.into_iter().map(Rational::from).collect()).unwrap()
            })
        }

        proptest! {
            #[test]
            fn inverse_times_self_is_one(a in element()) {
                prop_assume!(!a.is_zero());
                let inv = a.inverse().unwrap();
                prop_assert_eq!(a.clone() * inv, CycloNumber::one_of(a.order()));
            }

            #[test]
            fn root_exponents_add(n in 1u64..=24, k in 0i64..48, m in 0i64..48) {
                let lhs = embed_root(n, k).unwrap() * embed_root(n, m).unwrap();
                prop_assert_eq!(lhs, embed_root(n, k + m).unwrap());
            }
        }
    }
}
