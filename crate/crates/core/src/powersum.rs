//! Normalized power sums over symmetric number triangles and the
//! Gould–Carlitz identities they satisfy.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eulerbernoulli::{bernoulli, brace};
use crate::exactnum::{binomial, factorial, sign, Rational};
use crate::fgraded::GradedElement;
use crate::series::TruncatedSeries;
use crate::triangles::lucas_row;

/// Triangle `f_n(k)`, `0 <= k <= n`.
///
/// [`SymmetricTriangle::new`] enforces `f_n(k) = f_n(n-k)`; the unchecked
/// constructors exist so that the identities can also be run on arrays
/// that lack the symmetry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TriangleRepr")]
pub struct SymmetricTriangle {
    rows: Vec<Vec<Rational>>,
}

#[derive(Deserialize)]
struct TriangleRepr {
    rows: Vec<Vec<Rational>>,
}

impl TryFrom<TriangleRepr> for SymmetricTriangle {
    type Error = Error;
    fn try_from(r: TriangleRepr) -> Result<Self> {
        SymmetricTriangle::new_unchecked(r.rows)
    }
}

fn row_is_symmetric(row: &[Rational]) -> bool {
    row.iter().eq(row.iter().rev())
}

impl SymmetricTriangle {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let t = Self::new_unchecked(rows)?;
        if let Some(n) = t.rows.iter().position(|r| !row_is_symmetric(r)) {
            return Err(Error::InvalidInput(format!("row {n} is not symmetric")));
        }
        Ok(t)
    }

    /// Checks only the shape (row `n` has `n + 1` entries).
    pub fn new_unchecked(rows: Vec<Vec<Rational>>) -> Result<Self> {
        if let Some(n) = rows.iter().enumerate().position(|(n, r)| r.len() != n + 1) {
            return Err(Error::InvalidInput(format!("row {n} must have {} entries", n + 1)));
        }
        Ok(SymmetricTriangle { rows })
    }

    pub fn pascal(n_max: usize) -> Self {
        let rows = (0..=n_max as i64).map(|n| (0..=n).map(|k| binomial(n, k)).collect()).collect();
        SymmetricTriangle { rows }
    }

    /// The Lucas triangle; not symmetric from row 2 on.
    pub fn lucas(n_max: usize) -> Self {
        SymmetricTriangle { rows: (0..=n_max as i64).map(lucas_row).collect() }
    }

    pub fn constant(n_max: usize, c: Rational) -> Self {
        SymmetricTriangle { rows: (0..=n_max).map(|n| vec![c.clone(); n + 1]).collect() }
    }

    /// Symmetric rows with entries `p/q`, `|p| <= 9`, `1 <= q <= 6`.
    pub fn random(n_max: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = (0..=n_max)
            .map(|n| {
                let half: Vec<Rational> =
                    (0..=n / 2).map(|_| Rational::frac(rng.gen_range(-9..=9), rng.gen_range(1..=6))).collect();
                (0..=n).map(|k| half[k.min(n - k)].clone()).collect()
            })
            .collect();
        SymmetricTriangle { rows }
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn n_max(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows.iter().all(|r| row_is_symmetric(r))
    }

    /// Returns a copy with `f_n(k)` replaced.
    pub fn with_entry(&self, n: usize, k: usize, v: Rational) -> Self {
        let mut t = self.clone();
        t.rows[n][k] = v;
        t
    }
}

/// `S_{n,p} = Σ_k (k/n)^p f_n(k)`, with `0^0 = 1`.
pub fn power_sum(t: &SymmetricTriangle, n: usize, p: u32) -> Result<Rational> {
    if n == 0 || n > t.n_max() {
        return Err(Error::RowOutOfRange(n as i64));
    }
    let nn = Rational::from(n as i64);
    Ok(t.rows[n]
        .iter()
        .enumerate()
        .map(|(k, f)| (Rational::from(k as i64) / &nn).pow(p as i64).expect("nonnegative exponent") * f)
        .sum())
}

fn power_sums(t: &SymmetricTriangle, n: usize, p_max: u32) -> Result<Vec<Rational>> {
    (0..=p_max).map(|p| power_sum(t, n, p)).collect()
}

/// `Σ_p S_{n,p} x^p` to truncation `T`, tagged with degree 1.
pub fn powersum_generating_element(t: &SymmetricTriangle, n: usize, truncation: usize) -> Result<GradedElement> {
    let s = power_sums(t, n, truncation as u32)?;
    Ok(GradedElement::new(1, TruncatedSeries::new(s, truncation)))
}

/// `Q_i^m = C(m,i) + 2 C(m,i-1)`.
pub fn gould_q(m: i64, i: i64) -> Rational {
    binomial(m, i) + Rational::from(2) * binomial(m, i - 1)
}

fn double_factorial_odd(m: i64) -> Rational {
    // 1·3·5···(2m+1); empty product for m < 0
    (0..=m).map(|j| Rational::from(2 * j + 1)).product()
}

/// `C_m = 1·3···(2m+1)`.
pub fn carlitz_c(m: i64) -> Rational {
    double_factorial_odd(m)
}

/// `G_i^m = 2·1·3···(2m-1) C(2m+1, 2i+1) B_{2m-2i}`.
pub fn carlitz_g(m: i64, i: i64) -> Rational {
    Rational::from(2) * double_factorial_odd(m - 1) * binomial(2 * m + 1, 2 * i + 1) * bernoulli((2 * m - 2 * i) as usize)
}

fn pow2(e: i64) -> Rational {
    Rational::from(2).pow(e).expect("nonzero")
}

/// `A_i^m` for `0 <= i <= m <= m_max` from Gould's recursion.
pub fn gould_a_table(m_max: usize) -> Vec<Vec<Rational>> {
    let mut a: Vec<Vec<Rational>> = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max as i64 {
        let mut row = Vec::with_capacity(m as usize + 1);
        for i in 0..m {
            let k = m - 1;
            let s: Rational = (i..=k)
                .map(|j| binomial(2 * k + 3, 2 * j + 1) * pow2(-((j + 3) / 2)) * &a[j as usize][i as usize])
                .sum();
            row.push((binomial(2 * k + 3, 2 * i) - s) * pow2((k + 2) / 2));
        }
        row.push(Rational::from(2 * m + 1) * pow2((m + 1) / 2));
        a.push(row);
    }
    a
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GouldFamily {
    /// `Σ (-1)^i C(2m-1,m-i) C(m+i,i) S_{n,m+i-1} = 0`
    Relation,
    /// the same relation written with `Q_i^{m-1}`
    RelationQ,
    /// `S_{n,2m+1} = Σ {m,i} S_{n,2i}`
    OddFromEven,
    /// `2^{⌊(m+3)/2⌋} S_{n,2m+1} = Σ A_i^m S_{n,2i}`
    OddFromEvenA,
    /// `C_m S_{n,2m} = Σ G_i^m S_{n,2i+1}`
    Carlitz,
    /// `A_i^m` from the recursion against `2^{⌊(m+3)/2⌋} {m,i}`; `n` holds `i`
    ARecursion,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GouldResidual {
    pub family: GouldFamily,
    pub n: i64,
    pub m: i64,
    pub residual: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GouldReport {
    pub checked: usize,
    pub nonzero: Vec<GouldResidual>,
}

impl GouldReport {
    pub fn passed(&self) -> bool {
        self.checked > 0 && self.nonzero.is_empty()
    }

    pub fn failed_families(&self) -> Vec<GouldFamily> {
        let mut v: Vec<GouldFamily> = Vec::new();
        for r in &self.nonzero {
            if !v.contains(&r.family) {
                v.push(r.family);
            }
        }
        v
    }
}

/// Checks the identity families for `1 <= n <= n_max` and `m <= m_max`, and the
/// `A_i^m` recursion for `m <= m_max.max(10)`.
pub fn verify_gould(t: &SymmetricTriangle, n_max: usize, m_max: usize) -> Result<GouldReport> {
    let mut report = GouldReport { checked: 0, nonzero: Vec::new() };
    let mut push = |family, n: i64, m: i64, residual: Rational| {
        report.checked += 1;
        if !residual.is_zero() {
            report.nonzero.push(GouldResidual { family, n, m, residual });
        }
    };
    let a = gould_a_table(m_max.max(10));
    for (m, row) in a.iter().enumerate() {
        for (i, v) in row.iter().enumerate() {
            let closed = pow2((m as i64 + 3) / 2) * brace(m as i64, i as i64);
            push(GouldFamily::ARecursion, i as i64, m as i64, v - closed);
        }
    }
    for n in 1..=n_max {
        let s = power_sums(t, n, 2 * m_max as u32 + 1)?;
        let ni = n as i64;
        for m in 1..=m_max as i64 {
            let raw: Rational = (0..=m)
                .map(|i| sign(i) * binomial(2 * m - 1, m - i) * binomial(m + i, i) * &s[(m + i - 1) as usize])
                .sum();
            push(GouldFamily::Relation, ni, m, raw);
            let qform: Rational = (0..=m).map(|i| sign(i) * gould_q(m - 1, i) * &s[(m + i - 1) as usize]).sum();
            push(GouldFamily::RelationQ, ni, m, qform);
        }
        for m in 0..=m_max as i64 {
            let odd = &s[(2 * m + 1) as usize];
            let rhs: Rational = (0..=m).map(|i| brace(m, i) * &s[2 * i as usize]).sum();
            push(GouldFamily::OddFromEven, ni, m, odd - rhs);
            if let Some(row) = a.get(m as usize) {
                let rhs: Rational = (0..=m).map(|i| &row[i as usize] * &s[2 * i as usize]).sum();
                push(GouldFamily::OddFromEvenA, ni, m, pow2((m + 3) / 2) * odd - rhs);
            }
            let rhs: Rational = (0..=m).map(|i| carlitz_g(m, i) * &s[(2 * i + 1) as usize]).sum();
            push(GouldFamily::Carlitz, ni, m, carlitz_c(m) * &s[(2 * m) as usize] - rhs);
        }
    }
    Ok(report)
}

/// `C(2m-1,m-i) C(m+i,i) = (2m-1)! / (m! (m-1)!) · Q_i^{m-1}`, used in tests.
pub fn q_scaling(m: i64) -> Rational {
    Rational::from(factorial((2 * m - 1) as u64)) / Rational::from(factorial(m as u64) * factorial((m - 1) as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::q;
    use crate::fgraded::membership;

    #[test]
    fn power_sum_examples() {
        let p = SymmetricTriangle::pascal(6);
        assert_eq!(power_sum(&p, 4, 0).unwrap(), q(16, 1));
        assert_eq!(power_sum(&p, 4, 1).unwrap(), q(8, 1));
        let c = SymmetricTriangle::constant(3, q(1, 1));
        assert_eq!(power_sum(&c, 2, 0).unwrap(), q(3, 1));
        assert_eq!(power_sum(&p, 0, 1).unwrap_err(), Error::RowOutOfRange(0));
        assert_eq!(power_sum(&p, 7, 1).unwrap_err(), Error::RowOutOfRange(7));
    }

    #[test]
    fn generating_element_examples() {
        let p = SymmetricTriangle::pascal(4);
        let e = powersum_generating_element(&p, 2, 2).unwrap();
        assert_eq!(e.degree, 1);
        assert_eq!(e.gammas(), &[q(4, 1), q(2, 1), q(3, 2)]);
        let c = SymmetricTriangle::constant(2, q(1, 1));
        let e = powersum_generating_element(&c, 1, 4).unwrap();
        assert_eq!(e.gammas(), &[q(2, 1), q(1, 1), q(1, 1), q(1, 1), q(1, 1)]);
    }

    #[test]
    fn odd_from_even_at_m_zero() {
        let p = SymmetricTriangle::pascal(4);
        // S_{4,1} = S_{4,0} / 2
        assert_eq!(power_sum(&p, 4, 1).unwrap(), power_sum(&p, 4, 0).unwrap() / q(2, 1));
    }

    #[test]
    fn q_form_matches_binomial_form() {
        for m in 1..12 {
            for i in 0..=m {
                assert_eq!(binomial(2 * m - 1, m - i) * binomial(m + i, i), q_scaling(m) * gould_q(m - 1, i));
            }
        }
        // closed form m! (m+i+1) / (i! (m-i+1)!)
        for m in 0..10 {
            for i in 0..=m {
                let closed = Rational::from(factorial(m as u64) * (m + i + 1))
                    / Rational::from(factorial(i as u64) * factorial((m - i + 1) as u64));
                assert_eq!(gould_q(m, i), closed);
            }
        }
    }

    #[test]
    fn a_recursion_matches_braces() {
        let a = gould_a_table(10);
        for (m, row) in a.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                assert_eq!(v, &(pow2((m as i64 + 3) / 2) * brace(m as i64, i as i64)), "A_{i}^{m}");
            }
        }
    }

    #[test]
    fn pascal_and_random_pass() {
        assert!(verify_gould(&SymmetricTriangle::pascal(8), 8, 4).unwrap().passed());
        for seed in 0..5 {
            let t = SymmetricTriangle::random(8, seed);
            assert!(t.is_symmetric());
            assert!(verify_gould(&t, 8, 4).unwrap().passed(), "seed {seed}");
        }
    }

    #[test]
    fn lucas_is_not_symmetric() {
        let l = SymmetricTriangle::lucas(8);
        assert!(!l.is_symmetric());
        assert!(SymmetricTriangle::new(l.rows().to_vec()).is_err());
        // S_{1,1} = 2 while S_{1,0} / 2 = 3/2
        assert_eq!(power_sum(&l, 1, 1).unwrap(), q(2, 1));
        assert_eq!(power_sum(&l, 1, 0).unwrap(), q(3, 1));
    }

    #[test]
    fn breaking_symmetry_is_detected() {
        let p = SymmetricTriangle::pascal(8);
        let broken = p.with_entry(5, 1, q(6, 1));
        let rep = verify_gould(&broken, 8, 4).unwrap();
        assert!(!rep.passed());
        assert!(rep.nonzero.iter().all(|r| r.n == 5));
    }

    #[test]
    fn generating_elements_are_degree_one_members() {
        let trianglesets = [SymmetricTriangle::pascal(8), SymmetricTriangle::random(8, 42)];
        for t in &trianglesets {
            for n in 1..=8 {
                let e = powersum_generating_element(t, n, 12).unwrap();
                assert!(membership(&e).all(), "n={n}");
            }
        }
    }

    #[test]
    fn shape_is_validated() {
        assert!(SymmetricTriangle::new(vec![vec![q(1, 1)], vec![q(1, 1)]]).is_err());
        assert!(SymmetricTriangle::new(vec![vec![q(1, 1)], vec![q(1, 1), q(2, 1)]]).is_err());
        let t: SymmetricTriangle = serde_json::from_str(r#"{"rows":[["1"],["1/2","1/2"]]}"#).unwrap();
        assert_eq!(t.n_max(), 1);
        assert!(serde_json::from_str::<SymmetricTriangle>(r#"{"rows":[["1","2"]]}"#).is_err());
    }
}
