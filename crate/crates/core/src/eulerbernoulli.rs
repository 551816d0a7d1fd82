//! Bernoulli numbers, Euler polynomials and the bracket/brace coefficient
//! families built from them, with exact verifiers for the identities they
//! satisfy.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{binomial, factorial, Rational};

fn bernoulli_table() -> &'static RwLock<Vec<Rational>> {
    static TABLE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![Rational::one()]))
}

/// `B_n` with `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> Rational {
    if let Some(b) = bernoulli_table().read().expect("poisoned").get(n) {
        return b.clone();
    }
    let mut table = bernoulli_table().write().expect("poisoned");
    while table.len() <= n {
        let m = table.len() as i64;
        let s: Rational = table.iter().enumerate().map(|(k, b)| binomial(m + 1, k as i64) * b).sum();
        table.push(-s / Rational::from(m + 1));
    }
    table[n].clone()
}

fn euler_table() -> &'static RwLock<Vec<Vec<Rational>>> {
    static TABLE: OnceLock<RwLock<Vec<Vec<Rational>>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![vec![Rational::one()]]))
}

/// Ascending coefficients of the Euler polynomial `E_n`.
pub fn euler_polynomial(n: usize) -> Vec<Rational> {
    if let Some(p) = euler_table().read().expect("poisoned").get(n) {
        return p.clone();
    }
    let mut table = euler_table().write().expect("poisoned");
    while table.len() <= n {
        let m = table.len();
        let mut p = vec![Rational::zero(); m + 1];
        p[m] = Rational::one();
        for (k, ek) in table.iter().enumerate() {
            let c = binomial(m as i64, k as i64) * Rational::frac(1, 2);
            for (j, a) in ek.iter().enumerate() {
                p[j] -= &c * a;
            }
        }
        table.push(p);
    }
    table[n].clone()
}

/// `f_m = (4^m - 1) / m * B_{2m}` for `m >= 1`.
pub fn f_coeff(m: i64) -> Rational {
    assert!(m >= 1, "f_m needs m >= 1");
    let four = Rational::from(4).pow(m).expect("nonzero base");
    (four - Rational::one()) / Rational::from(m) * bernoulli(2 * m as usize)
}

/// `[n, i]`: minus the coefficient of `x^(2i-1)` in `E_{2n}`; zero unless `1 <= i <= n`.
pub fn bracket(n: i64, i: i64) -> Rational {
    if i < 1 || i > n {
        return Rational::zero();
    }
    let v = f_coeff(n - i + 1) * binomial(2 * n, 2 * i - 1);
    assert!(v.is_integer(), "bracket({n},{i}) = {v} is not an integer");
    v
}

/// `{n, i}`: minus the coefficient of `x^(2i)` in `E_{2n+1}`; zero unless `0 <= i <= n`.
pub fn brace(n: i64, i: i64) -> Rational {
    if i < 0 || i > n {
        return Rational::zero();
    }
    f_coeff(n - i + 1) * binomial(2 * n + 1, 2 * i)
}

fn ceil_half_neg(r: i64) -> i64 {
    // ⌈-r/2⌉
    (-r).div_euclid(2) + (-r).rem_euclid(2)
}

/// The unified coefficient `(n, i)_r` through the bracket and brace families.
pub fn unified_coeff_by_cases(n: i64, i: i64, r: i64) -> Result<Rational> {
    check_range(n, i)?;
    Ok(if r.rem_euclid(2) == 0 {
        let k = r / 2;
        if n >= 0.max(-k) {
            bracket(k + n, k + i)
        } else {
            -bracket(-k - i, -k - n)
        }
    } else {
        let k = (r - 1) / 2;
        if n >= 0.max(-k) {
            brace(k + n, k + i)
        } else {
            -brace(-k - i - 1, -k - n - 1)
        }
    })
}

/// The unified coefficient `(n, i)_r` through `f_m` and a single binomial.
pub fn unified_coeff_by_f(n: i64, i: i64, r: i64) -> Result<Rational> {
    check_range(n, i)?;
    let f = f_coeff(n - i + 1);
    Ok(if n >= 0.max(ceil_half_neg(r)) {
        f * binomial(r + 2 * n, r + 2 * i - 1)
    } else {
        -f * binomial(-r - 2 * i, -r - 2 * n - 1)
    })
}

fn check_range(n: i64, i: i64) -> Result<()> {
    if 0 <= i && i <= n {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange(format!("need 0 <= i <= n, got n={n}, i={i}")))
    }
}

type UnifiedTable = RwLock<HashMap<(i64, i64, i64), Rational>>;

fn unified_cache() -> &'static UnifiedTable {
    static CACHE: OnceLock<UnifiedTable> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `(n, i)_r`, memoized.
pub fn unified_coeff(n: i64, i: i64, r: i64) -> Result<Rational> {
    check_range(n, i)?;
    if let Some(v) = unified_cache().read().expect("poisoned").get(&(n, i, r)) {
        return Ok(v.clone());
    }
    let v = unified_coeff_by_cases(n, i, r)?;
    unified_cache().write().expect("poisoned").insert((n, i, r), v.clone());
    Ok(v)
}

/// `(n, i)_r`, taken as zero outside `0 <= i <= n`.
pub fn unified_or_zero(n: i64, i: i64, r: i64) -> Rational {
    unified_coeff(n, i, r).unwrap_or_else(|_| Rational::zero())
}

/// `[n, i]_r` of the even-from-odd direction; undefined at `n = -r/2`.
pub fn bracket_r(n: i64, i: i64, r: i64) -> Result<Rational> {
    check_range(n, i)?;
    if 2 * n + r == 0 {
        return Err(Error::ForbiddenIndex { n, r });
    }
    let b = bernoulli(2 * (n - i) as usize);
    Ok(if n >= 0.max((-r).div_euclid(2) + 1) {
        Rational::frac(2, 2 * n + r) * binomial(2 * n + r, 2 * i + r) * b
    } else {
        Rational::frac(2, 2 * i + r) * binomial(-2 * i - r, -2 * n - r) * b
    })
}

fn bracket_r_or_zero(n: i64, i: i64, r: i64) -> Rational {
    bracket_r(n, i, r).unwrap_or_else(|_| Rational::zero())
}

/// Identity families with their grids.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "suite", rename_all = "snake_case")]
pub enum IdentitySuite {
    /// `Σ_{i=j}^n C(2n,2i) B_{2n-2i} [i, j]` is `0` for `j < n` and `n` for `j = n`.
    Lemma45 { n_max: i64 },
    /// `Σ_{s=1}^l C(2l,2s) (2^{2s}-1) B_{2s} B_{2l-2s} = 0` for `l >= 2`.
    Moll { l_max: i64 },
    /// Cubic relation among unified coefficients over `0 <= α, β <= n <= n_max`, `r, s` in range.
    Cubic { n_max: i64, r_min: i64, r_max: i64 },
    /// Quadratic relation among `[n, i]_r` for `r, s` positive or odd in range.
    Quadratic { n_max: i64, r_min: i64, r_max: i64 },
    /// Two binomial identities used in the negative-degree arguments.
    ProofSupport { n_max: i64, m_max: i64 },
}

impl IdentitySuite {
    pub fn name(&self) -> &'static str {
        match self {
            IdentitySuite::Lemma45 { .. } => "lemma45",
            IdentitySuite::Moll { .. } => "moll",
            IdentitySuite::Cubic { .. } => "cubic",
            IdentitySuite::Quadratic { .. } => "quadratic",
            IdentitySuite::ProofSupport { .. } => "proof_support",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub point: Vec<(String, i64)>,
    pub residual: Rational,
}

/// Outcome of a suite: how many grid points were evaluated and which were nonzero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub suite: String,
    pub checked: usize,
    pub nonzero: Vec<Residual>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.nonzero.is_empty() && self.checked > 0
    }
}

struct Collector {
    checked: usize,
    nonzero: Vec<Residual>,
}

impl Collector {
    fn push(&mut self, point: &[(&str, i64)], residual: Rational) {
        self.checked += 1;
        if !residual.is_zero() {
            let point = point.iter().map(|(k, v)| (k.to_string(), *v)).collect();
            self.nonzero.push(Residual { point, residual });
        }
    }
}

pub fn lemma45_sum(n: i64, j: i64) -> Rational {
    (j..=n)
        .map(|i| binomial(2 * n, 2 * i) * bernoulli((2 * n - 2 * i) as usize) * bracket(i, j))
        .sum()
}

pub fn moll_sum(l: i64) -> Rational {
    (1..=l)
        .map(|s| {
            let p = Rational::from(4).pow(s).expect("nonzero") - Rational::one();
            binomial(2 * l, 2 * s) * p * bernoulli(2 * s as usize) * bernoulli((2 * l - 2 * s) as usize)
        })
        .sum()
}

/// Left side minus right side of the cubic relation.
pub fn cubic_residual(n: i64, a: i64, b: i64, r: i64, s: i64) -> Rational {
    let lhs = unified_or_zero(n - b, a, r) + unified_or_zero(n - a, b, s);
    let mut rhs = unified_or_zero(n, a + b, r + s);
    for k in 1..=n {
        let outer = unified_or_zero(n, k, r + s);
        if outer.is_zero() {
            continue;
        }
        for l in 0..k {
            let m = k - 1 - l;
            rhs += &outer * unified_or_zero(l, a, r) * unified_or_zero(m, b, s);
        }
    }
    lhs - rhs
}

/// Left side minus right side of the quadratic relation; `None` at `n = -(r+s)/2`.
pub fn quadratic_residual(n: i64, a: i64, b: i64, r: i64, s: i64) -> Option<Rational> {
    if 2 * n + r + s == 0 {
        return None;
    }
    let mut lhs = if a + b == n - 1 { Rational::one() } else { Rational::zero() };
    for l in a..=(n - b) {
        lhs += bracket_r_or_zero(l, a, r) * bracket_r_or_zero(n - l, b, s);
    }
    let rhs: Rational = (0..=n)
        .map(|k| bracket_r_or_zero(n, k, r + s) * (bracket_r_or_zero(k - b, a, r) + bracket_r_or_zero(k - a, b, s)))
        .sum();
    Some(lhs - rhs)
}

/// `Σ_{i=max(0,2n-m+1)}^m C(m,i) (m+i)!/(m+i-2n-1)! (-2)^{-i}`.
pub fn binomial_derivative_sum(m: i64, n: i64) -> Rational {
    ((2 * n - m + 1).max(0)..=m)
        .map(|i| {
            let ratio = Rational::from(factorial((m + i) as u64)) / Rational::from(factorial((m + i - 2 * n - 1) as u64));
            binomial(m, i) * ratio * Rational::from(-2).pow(-i).expect("nonzero")
        })
        .sum()
}

/// `Σ_{i=0}^n -{n,i} (-2)^{-2i} - (-2)^{-2n-1}`.
pub fn brace_alternating_residual(n: i64) -> Rational {
    let s: Rational = (0..=n).map(|i| -brace(n, i) * Rational::from(4).pow(-i).expect("nonzero")).sum();
    s - Rational::from(-2).pow(-2 * n - 1).expect("nonzero")
}

fn positive_or_odd(r: i64) -> bool {
    r > 0 || r.rem_euclid(2) == 1
}

/// Evaluates a suite exactly over its grid.
pub fn verify_identities(suite: &IdentitySuite) -> IdentityReport {
    let mut c = Collector { checked: 0, nonzero: Vec::new() };
    match *suite {
        IdentitySuite::Lemma45 { n_max } => {
            for n in 1..=n_max {
                for j in 1..=n {
                    let target = if j == n { Rational::from(n) } else { Rational::zero() };
                    c.push(&[("n", n), ("j", j)], lemma45_sum(n, j) - target);
                }
            }
        }
        IdentitySuite::Moll { l_max } => {
            for l in 2..=l_max {
                c.push(&[("l", l)], moll_sum(l));
            }
        }
        IdentitySuite::Cubic { n_max, r_min, r_max } => {
            for r in r_min..=r_max {
                for s in r_min..=r_max {
                    for n in 0..=n_max {
                        for a in 0..=n {
                            for b in 0..=n {
                                let point = [("n", n), ("alpha", a), ("beta", b), ("r", r), ("s", s)];
                                c.push(&point, cubic_residual(n, a, b, r, s));
                            }
                        }
                    }
                }
            }
        }
        IdentitySuite::Quadratic { n_max, r_min, r_max } => {
            let degrees: Vec<i64> = (r_min..=r_max).filter(|&r| positive_or_odd(r)).collect();
            for &r in &degrees {
                for &s in &degrees {
                    for n in 0..=n_max {
                        for a in 0..=n {
                            for b in 0..=n {
                                if let Some(res) = quadratic_residual(n, a, b, r, s) {
                                    c.push(&[("n", n), ("alpha", a), ("beta", b), ("r", r), ("s", s)], res);
                                }
                            }
                        }
                    }
                }
            }
        }
        IdentitySuite::ProofSupport { n_max, m_max } => {
            for m in 0..=m_max {
                for n in 0..=n_max {
                    c.push(&[("m", m), ("n", n)], binomial_derivative_sum(m, n));
                }
            }
            for n in 0..=n_max {
                c.push(&[("n", n)], brace_alternating_residual(n));
            }
        }
    }
    IdentityReport { suite: suite.name().to_string(), checked: c.checked, nonzero: c.nonzero }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{parse_list, q, Poly, QPoly};

    /// `[n, i]` read straight off `E_{2n}`.
    fn bracket_def(n: i64, i: i64) -> Rational {
        if i < 1 || i > n {
            return Rational::zero();
        }
        -euler_polynomial(2 * n as usize)[(2 * i - 1) as usize].clone()
    }

    fn brace_def(n: i64, i: i64) -> Rational {
        if i < 0 || i > n {
            return Rational::zero();
        }
        -euler_polynomial(2 * n as usize + 1)[2 * i as usize].clone()
    }

    #[test]
    fn bernoulli_values() {
        let got: Vec<Rational> = (0..=8).map(bernoulli).collect();
        let want = parse_list(&["1", "-1/2", "1/6", "0", "-1/30", "0", "1/42", "0", "-1/30"]).unwrap();
        assert_eq!(got, want);
        for m in 1..40 {
            assert!(bernoulli(2 * m + 1).is_zero());
        }
    }

    #[test]
    fn euler_values() {
        assert_eq!(euler_polynomial(0), vec![q(1, 1)]);
        assert_eq!(euler_polynomial(1), vec![q(-1, 2), q(1, 1)]);
        assert_eq!(euler_polynomial(2), vec![q(0, 1), q(-1, 1), q(1, 1)]);
    }

    #[test]
    fn euler_shift_identity() {
        // E_n(x+1) + E_n(x) = 2 x^n
        for n in 0..=40 {
            let e: QPoly = Poly::new(euler_polynomial(n));
            let shifted = e
                .coeffs()
                .iter()
                .rev()
                .fold(QPoly::zero(), |acc, c| &(&acc * &Poly::new(vec![q(1, 1), q(1, 1)])) + &Poly::constant(c.clone()));
            assert_eq!(&shifted + &e, Poly::monomial(q(2, 1), n), "n={n}");
        }
    }

    #[test]
    fn closed_forms_match_definition() {
        for n in 0..=30 {
            for i in -1..=n + 1 {
                assert_eq!(bracket(n, i), bracket_def(n, i), "bracket({n},{i})");
                assert_eq!(brace(n, i), brace_def(n, i), "brace({n},{i})");
            }
        }
    }

    #[test]
    fn bracket_examples() {
        for n in 1..=50 {
            assert_eq!(bracket(n, n), Rational::from(n));
        }
        assert_eq!(brace(0, 0), q(1, 2));
        assert_eq!(bracket(2, 1), q(-1, 1));
        assert_eq!(bracket_def(2, 1), q(-1, 1));
    }

    #[test]
    fn derivative_and_recursion() {
        for n in 0..=30 {
            for i in 0..=n {
                assert_eq!(brace(n, i), Rational::frac(2 * i + 1, 2 * n + 2) * bracket(n + 1, i + 1));
            }
        }
        for n in 2..=30 {
            for i in 2..=n {
                let ratio = binomial(2 * n, 2) / binomial(2 * i - 1, 2);
                assert_eq!(bracket(n, i), ratio * bracket(n - 1, i - 1));
            }
        }
    }

    #[test]
    fn bernoulli_from_euler_cross_check() {
        // [n, 1] = f_n C(2n, 1), so B_{2n} = n [n,1] / (2n (4^n - 1))
        for n in 1..=30 {
            let four = Rational::from(4).pow(n).unwrap() - Rational::one();
            let b = bracket_def(n, 1) / Rational::from(2) / four;
            assert_eq!(b, bernoulli(2 * n as usize), "B_{}", 2 * n);
        }
    }

    #[test]
    fn unified_examples() {
        for n in 0..8 {
            for i in 0..=n {
                assert_eq!(unified_coeff(n, i, 0).unwrap(), bracket(n, i));
                assert_eq!(unified_coeff(n, i, 1).unwrap(), brace(n, i));
            }
        }
        assert_eq!(unified_coeff(0, 0, -2).unwrap(), q(-1, 1));
        assert!(matches!(unified_coeff(1, 2, 0), Err(Error::IndexOutOfRange(_))));
    }

    #[test]
    fn unified_two_paths_agree() {
        for r in -10..=10 {
            for n in 0..=12 {
                for i in 0..=n {
                    assert_eq!(unified_coeff_by_cases(n, i, r).unwrap(), unified_coeff_by_f(n, i, r).unwrap(), "({n},{i})_{r}");
                }
            }
        }
    }

    #[test]
    fn bracket_r_values() {
        assert_eq!(bracket_r(0, 0, 1).unwrap(), q(2, 1));
        // diagonal: (2 / (2n+r)) C(2n+r, 2n+r) B_0
        for r in -9..=9 {
            for n in 0..10 {
                if 2 * n + r > 0 {
                    assert_eq!(bracket_r(n, n, r).unwrap(), Rational::frac(2, 2 * n + r));
                }
            }
        }
        assert_eq!(bracket_r(2, 0, -4).unwrap_err(), Error::ForbiddenIndex { n: 2, r: -4 });
    }

    #[test]
    fn suite_examples() {
        assert_eq!(lemma45_sum(3, 3), q(3, 1));
        assert!(moll_sum(2).is_zero());
        assert!(cubic_residual(1, 0, 0, 0, 0).is_zero());
    }

    #[test]
    fn suites_pass_on_small_grids() {
        let suites = [
            IdentitySuite::Lemma45 { n_max: 12 },
            IdentitySuite::Moll { l_max: 20 },
            IdentitySuite::Cubic { n_max: 4, r_min: -5, r_max: 5 },
            IdentitySuite::Quadratic { n_max: 4, r_min: -5, r_max: 5 },
            IdentitySuite::ProofSupport { n_max: 8, m_max: 10 },
        ];
        for s in &suites {
            let rep = verify_identities(s);
            assert!(rep.passed(), "{}: {:?}", rep.suite, rep.nonzero.first());
        }
    }

    #[test]
    fn suite_json() {
        let s: IdentitySuite = serde_json::from_str(r#"{"suite":"moll","l_max":4}"#).unwrap();
        assert_eq!(s, IdentitySuite::Moll { l_max: 4 });
    }

    #[test]
    fn concurrent_readers_agree() {
        let handles: Vec<_> = (0..8)
            .map(|t| std::thread::spawn(move || (0..40).map(|k| bernoulli(k + t)).collect::<Vec<_>>()))
            .collect();
        for (t, h) in handles.into_iter().enumerate() {
            let got = h.join().unwrap();
            for (k, b) in got.iter().enumerate() {
                assert_eq!(b, &bernoulli(k + t));
            }
        }
    }
}
