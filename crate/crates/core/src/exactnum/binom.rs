//! Binomial coefficients, factorials and Pochhammer products.

use num_bigint::BigInt;
use num_traits::One;

use super::Rational;

/// `n!` for `n >= 0`.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Falling factorial `x (x-1) ... (x-k+1)`; empty product for `k = 0`.
pub fn falling(x: i64, k: u64) -> BigInt {
    (0..k as i64).fold(BigInt::one(), |acc, j| acc * (x - j))
}

/// Rising factorial `x (x+1) ... (x+k-1)`.
pub fn rising(x: i64, k: u64) -> BigInt {
    (0..k as i64).fold(BigInt::one(), |acc, j| acc * (x + j))
}

/// Binomial coefficient as an integer.
///
/// Zero for `k < 0` and for `0 <= n < k`; for negative `n` the polynomial
/// definition `n (n-1) ... (n-k+1) / k!` applies.
pub fn binomial_int(n: i64, k: i64) -> BigInt {
    if k < 0 || (n >= 0 && k > n) {
        return BigInt::from(0);
    }
    // symmetry keeps the product short
    let k = if n >= 0 && k > n - k { n - k } else { k };
    falling(n, k as u64) / factorial(k as u64)
}

pub fn binomial(n: i64, k: i64) -> Rational {
    Rational::from_int(binomial_int(n, k))
}

/// `(-1)^k` as a rational.
pub fn sign(k: i64) -> Rational {
    if k.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(binomial_int(5, 2), BigInt::from(10));
        assert_eq!(binomial_int(5, 0), BigInt::from(1));
        assert_eq!(binomial_int(5, 6), BigInt::from(0));
        assert_eq!(binomial_int(5, -1), BigInt::from(0));
        assert_eq!(binomial_int(0, 0), BigInt::from(1));
    }

    #[test]
    fn negative_upper_index() {
        // (-1 choose k) = (-1)^k, (-2 choose k) = (-1)^k (k+1)
        for k in 0..10 {
            assert_eq!(binomial(-1, k), sign(k));
            assert_eq!(binomial(-2, k), sign(k) * Rational::from(k + 1));
        }
        assert_eq!(binomial_int(-3, 2), BigInt::from(6));
    }

    #[test]
    fn pascal_rule_holds_for_all_signs() {
        for n in -12i64..12 {
            for k in 1..12 {
                assert_eq!(binomial(n, k), binomial(n - 1, k) + binomial(n - 1, k - 1), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn pochhammer() {
        assert_eq!(factorial(6), BigInt::from(720));
        assert_eq!(falling(6, 3), BigInt::from(120));
        assert_eq!(rising(3, 3), BigInt::from(60));
        assert_eq!(falling(4, 0), BigInt::from(1));
    }
}
