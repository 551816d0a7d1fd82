//! Arbitrary-precision rationals in lowest terms.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact fraction with positive denominator, always reduced.
///
/// Renders as `p/q`, or `p` when the denominator is one.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    /// `num/den` for machine integers; panics on a zero denominator.
    pub fn frac(num: i64, den: i64) -> Self {
        Self::new(num, den).expect("zero denominator")
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn from_big(r: BigRational) -> Self {
        Rational(r)
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(Rational(self.0.recip()))
        }
    }

    pub fn checked_div(&self, other: &Rational) -> Result<Self> {
        if other.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(Rational(&self.0 / &other.0))
        }
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, exp: i64) -> Result<Self> {
        if exp < 0 {
            return self.recip()?.pow(-exp);
        }
        let e = i32::try_from(exp).map_err(|_| Error::InvalidInput(format!("exponent {exp} too large")))?;
        Ok(Rational(num_traits::Pow::pow(&self.0, e)))
    }

    /// The integer value, if this is an integer that fits in an `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    /// gcd of rationals: gcd of numerators over lcm of denominators; nonnegative.
    pub fn gcd(&self, other: &Rational) -> Rational {
        let n = self.numer().gcd(other.numer());
        let d = self.denom().lcm(other.denom());
        Rational(BigRational::new(n, d))
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.0.is_integer() {
            self.0.numer().to_string()
        } else {
            format!("{}/{}", self.0.numer(), self.0.denom())
        };
        f.pad(&s)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                Rational::new(n, d)
            }
            None => Ok(Rational::from_int(s.parse::<BigInt>().map_err(|_| bad())?)),
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational::from_int(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_int(n)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Str(String),
            Int(i64),
        }
        match Repr::deserialize(d)? {
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(n) => Ok(Rational::from(n)),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Panics on division by zero, like the integer types; use `checked_div` for fallible code.
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl SubAssign for Rational {
    fn sub_assign(&mut self, rhs: Rational) {
        self.0 -= rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

/// Shorthand for `Rational::frac`.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::frac(num, den)
}

/// Parses a list of `"p/q"` strings; used heavily in tests.
pub fn parse_list(items: &[&str]) -> Result<Vec<Rational>> {
    items.iter().map(|s| s.parse()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_sign() {
        let r = Rational::frac(6, -4);
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(Rational::frac(4, 2).to_string(), "2");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "-7", "1/12", "-1/18", "123456789012345678901234567891/2"] {
            let r: Rational = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert_eq!("2/4".parse::<Rational>().unwrap(), q(1, 2));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn json_forms() {
        let v: Vec<Rational> = serde_json::from_str(r#"["1/2", 3, "-4"]"#).unwrap();
        assert_eq!(v, vec![q(1, 2), q(3, 1), q(-4, 1)]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["1/2","3","-4"]"#);
    }

    #[test]
    fn rational_gcd() {
        assert_eq!(q(3, 1).gcd(&q(-9, 1)), q(3, 1));
        assert_eq!(q(1, 9).gcd(&q(1, 36)), q(1, 36));
        assert_eq!(q(0, 1).gcd(&q(-2, 3)), q(2, 3));
    }

    #[test]
    fn pow_and_recip() {
        assert_eq!(q(-2, 1).pow(-3).unwrap(), q(-1, 8));
        assert_eq!(q(2, 3).pow(0).unwrap(), q(1, 1));
        assert!(Rational::zero().recip().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn rat() -> impl Strategy<Value = Rational> {
            (-50i64..50, 1i64..30).prop_map(|(n, d)| q(n, d))
        }

        proptest! {
            #[test]
            fn field_axioms(a in rat(), b in rat(), c in rat()) {
                prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                prop_assert_eq!(&a + &b, &b + &a);
                if !a.is_zero() {
                    prop_assert!((&a * &a.recip().unwrap()).is_one());
                }
            }
        }
    }
}
