//! The graded algebra of power series `φ` with `φ(x/(x-1)) = (1-x)^r φ(x)`:
//! relation checks on Laurent coefficients, the functional equation itself,
//! the δ-coordinates, parity transforms and the graded product.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eulerbernoulli::{bracket_r, unified_coeff};
use crate::exactnum::{binomial, sign, Rational};
use crate::series::{compose_mobius, one_minus_x_pow, x_minus_two_pow, TruncatedSeries};

/// A candidate member of `F_r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradedElement {
    pub degree: i64,
    pub phi: TruncatedSeries,
}

impl GradedElement {
    pub fn new(degree: i64, phi: TruncatedSeries) -> Self {
        GradedElement { degree, phi }
    }

    pub fn gammas(&self) -> &[Rational] {
        self.phi.coeffs()
    }

    pub fn truncation(&self) -> usize {
        self.phi.truncation()
    }
}

/// Coordinates `δ_i` of `Σ δ_i x^{2i} (x-2)^{-r-2i}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaVector {
    pub degree: i64,
    pub deltas: Vec<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// even `r`
    #[serde(rename = "eq1.5")]
    Even,
    /// odd `r > 0`
    #[serde(rename = "eq1.6")]
    PosOdd,
    /// `r < 0`, `1 <= m <= ⌈-r/2⌉`
    #[serde(rename = "eq1.7")]
    NegFirst,
    /// odd `r < 0`
    #[serde(rename = "eq1.8")]
    NegOdd,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::Even => "eq1.5",
            Family::PosOdd => "eq1.6",
            Family::NegFirst => "eq1.7",
            Family::NegOdd => "eq1.8",
        }
    }
}

/// Families that apply to degree `r`, in evaluation order.
pub fn families_for(r: i64) -> Vec<Family> {
    let odd = r.rem_euclid(2) == 1;
    let mut out = Vec::new();
    if r < 0 {
        out.push(Family::NegFirst);
    }
    if !odd {
        out.push(Family::Even);
    } else if r > 0 {
        out.push(Family::PosOdd);
    } else {
        out.push(Family::NegOdd);
    }
    out
}

/// Largest `m` a family admits (`None` when unbounded).
pub fn family_m_bound(family: Family, r: i64) -> Option<i64> {
    match family {
        Family::NegFirst => Some((-r + 1).div_euclid(2)),
        _ => None,
    }
}

/// Exact coefficients `(index, c)` of relation `m`, including terms at negative indices.
pub fn relation_terms(family: Family, r: i64, m: i64) -> Vec<(i64, Rational)> {
    match family {
        Family::Even => (0..m).map(|i| (m - r + i, sign(i) * binomial(m - 1, i))).collect(),
        Family::PosOdd => (0..=m)
            .map(|i| (m + i - 1, sign(i) * binomial(2 * m + r - 2, m - i) * binomial(m + i, i)))
            .collect(),
        Family::NegFirst => (0..=m)
            .map(|i| (m + i - 1, binomial(m, i) / binomial(1 - r, m + i)))
            .collect(),
        Family::NegOdd => (0..=m)
            .map(|i| (m - r + i, sign(i) * binomial(m, i) * Rational::frac(m + i, m)))
            .collect(),
    }
}

/// Drops terms at negative indices and zero coefficients.
pub fn live_terms(terms: &[(i64, Rational)]) -> Vec<(i64, Rational)> {
    terms.iter().filter(|(k, c)| *k >= 0 && !c.is_zero()).cloned().collect()
}

/// Divides a row by the gcd of its entries, sign chosen so the first entry is positive.
/// Returns the reduced row and the divisor used.
pub fn reduce_row(row: &[Rational]) -> (Vec<Rational>, Rational) {
    let g = row.iter().fold(Rational::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return (row.to_vec(), Rational::one());
    }
    let first_neg = row.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
    let g = if first_neg { -g } else { g };
    (row.iter().map(|c| c / &g).collect(), g)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationResidual {
    pub m: i64,
    pub residual: Rational,
    /// Residual of the gcd-reduced relation.
    pub reduced_residual: Rational,
    /// The gcd-reduced relation as `(index, coefficient)`.
    pub reduced_terms: Vec<(i64, Rational)>,
}

impl RelationResidual {
    /// Human-readable relation, e.g. `γ_1 − 3γ_2 + 2γ_3 = −1/18`.
    pub fn certificate(&self) -> String {
        let mut s = String::new();
        for (n, (k, c)) in self.reduced_terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if n == 0 {
                if neg {
                    s.push('−');
                }
            } else {
                s.push_str(if neg { " − " } else { " + " });
            }
            if !a.is_one() {
                if a.is_integer() {
                    s.push_str(&a.to_string());
                } else {
                    s.push_str(&format!("({a})"));
                }
            }
            s.push_str(&format!("γ_{k}"));
        }
        if s.is_empty() {
            s.push('0');
        }
        let r = &self.reduced_residual;
        let rs = if r.is_negative() { format!("−{}", r.abs()) } else { r.to_string() };
        format!("{s} = {rs}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    Violated { m: i64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub family: Family,
    pub residuals: Vec<RelationResidual>,
    pub skipped: Vec<i64>,
    pub verdict: Verdict,
}

/// All relation families for one degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub r: i64,
    pub m_max: i64,
    pub reports: Vec<RelationReport>,
}

impl RelationCheck {
    pub fn is_consistent(&self) -> bool {
        self.reports.iter().all(|r| r.verdict == Verdict::Consistent)
    }

    /// First nonzero residual, in family order.
    pub fn first_violation(&self) -> Option<(Family, &RelationResidual)> {
        self.reports.iter().find_map(|rep| match rep.verdict {
            Verdict::Violated { m } => rep.residuals.iter().find(|x| x.m == m).map(|x| (rep.family, x)),
            Verdict::Consistent => None,
        })
    }

    pub fn skipped_count(&self) -> usize {
        self.reports.iter().map(|r| r.skipped.len()).sum()
    }
}

/// Evaluates every applicable relation with `m <= m_max`; relations reaching past
/// the supplied γ's are skipped and listed.
pub fn check_relations(gammas: &[Rational], r: i64, m_max: i64) -> Result<RelationCheck> {
    if m_max < 1 {
        return Err(Error::InvalidInput(format!("m_max must be at least 1, got {m_max}")));
    }
    let top = gammas.len() as i64 - 1;
    let mut reports = Vec::new();
    for family in families_for(r) {
        let hi = family_m_bound(family, r).map_or(m_max, |b| b.min(m_max));
        let mut residuals = Vec::new();
        let mut skipped = Vec::new();
        for m in 1..=hi {
            let terms = live_terms(&relation_terms(family, r, m));
            if terms.iter().any(|(k, _)| *k > top) {
                skipped.push(m);
                continue;
            }
            let residual: Rational = terms.iter().map(|(k, c)| c * &gammas[*k as usize]).sum();
            let row: Vec<Rational> = terms.iter().map(|(_, c)| c.clone()).collect();
            let (reduced, g) = reduce_row(&row);
            let reduced_residual = &residual / &g;
            let reduced_terms = terms.iter().map(|(k, _)| *k).zip(reduced).collect();
            residuals.push(RelationResidual { m, residual, reduced_residual, reduced_terms });
        }
        let verdict = residuals
            .iter()
            .find(|x| !x.residual.is_zero())
            .map_or(Verdict::Consistent, |x| Verdict::Violated { m: x.m });
        reports.push(RelationReport { family, residuals, skipped, verdict });
    }
    let evaluated: usize = reports.iter().map(|r| r.residuals.len()).sum();
    if evaluated == 0 {
        let skipped: Vec<String> = reports.iter().flat_map(|r| r.skipped.iter().map(|m| m.to_string())).collect();
        return Err(Error::InsufficientCoefficients(format!("every relation was skipped (m = {})", skipped.join(", "))));
    }
    Ok(RelationCheck { r, m_max, reports })
}

/// An `m_max` large enough that every relation fitting in `T + 1` γ's is tried.
pub fn covering_m_max(r: i64, truncation: usize) -> i64 {
    truncation as i64 + r.abs() + 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalCheck {
    pub holds: bool,
    pub first_failure: Option<usize>,
}

/// Compares `φ(x/(x-1))` with `(1-x)^r φ(x)` up to the truncation.
pub fn check_functional_equation(e: &GradedElement) -> FunctionalCheck {
    let t = e.truncation();
    let lhs = compose_mobius(&e.phi);
    let rhs = one_minus_x_pow(e.degree, t).mul(&e.phi);
    let first_failure = (0..=t).find(|&k| lhs.coeffs()[k] != rhs.coeffs()[k]);
    FunctionalCheck { holds: first_failure.is_none(), first_failure }
}

fn delta_basis(r: i64, i: usize, truncation: usize) -> TruncatedSeries {
    x_minus_two_pow(-r - 2 * i as i64, truncation).shift_up(2 * i)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DeltaOutcome {
    Member { deltas: DeltaVector },
    NotMember { index: usize },
}

/// Solves for δ's on the even coefficients, then checks the odd ones.
pub fn delta_decompose(e: &GradedElement) -> DeltaOutcome {
    let t = e.truncation();
    let r = e.degree;
    let mut rest = e.phi.clone();
    let mut deltas = Vec::with_capacity(t / 2 + 1);
    for i in 0..=t / 2 {
        let lead = Rational::from(-2).pow(-r - 2 * i as i64).expect("nonzero");
        let d = &rest.coeffs()[2 * i] / &lead;
        if !d.is_zero() {
            rest = rest.sub(&delta_basis(r, i, t).scale(&d));
        }
        deltas.push(d);
    }
    match rest.valuation() {
        None => DeltaOutcome::Member { deltas: DeltaVector { degree: r, deltas } },
        Some(index) => DeltaOutcome::NotMember { index },
    }
}

/// Expands `Σ δ_i x^{2i} (x-2)^{-r-2i}` to truncation `T`.
pub fn delta_reconstruct(dv: &DeltaVector, truncation: usize) -> GradedElement {
    let mut phi = TruncatedSeries::zero(truncation);
    for (i, d) in dv.deltas.iter().enumerate().take(truncation / 2 + 1) {
        if !d.is_zero() {
            phi = phi.add(&delta_basis(dv.degree, i, truncation).scale(d));
        }
    }
    GradedElement::new(dv.degree, phi)
}

/// `γ_1, γ_3, …, γ_{2 n_max + 1}` from `γ_0, γ_2, …, γ_{2 n_max}`.
pub fn odd_from_even(even: &[Rational], r: i64, n_max: usize) -> Result<Vec<Rational>> {
    if even.len() < n_max + 1 {
        return Err(Error::InsufficientCoefficients(format!("need {} even coefficients, got {}", n_max + 1, even.len())));
    }
    (0..=n_max as i64)
        .map(|n| {
            (0..=n).try_fold(Rational::zero(), |acc, i| Ok(acc + unified_coeff(n, i, r)? * &even[i as usize]))
        })
        .collect()
}

/// `γ_0, γ_2, …, γ_{2 n_max}` from `γ_1, γ_3, …, γ_{2 n_max + 1}`.
///
/// For even `r <= 0`, `γ_{-r}` is taken from `free_gamma` and `γ_{1-r}` must vanish.
pub fn even_from_odd(odd: &[Rational], r: i64, n_max: usize, free_gamma: Option<&Rational>) -> Result<Vec<Rational>> {
    if odd.len() < n_max + 1 {
        return Err(Error::InsufficientCoefficients(format!("need {} odd coefficients, got {}", n_max + 1, odd.len())));
    }
    let free_slot = (r <= 0 && r.rem_euclid(2) == 0).then_some(-r / 2);
    if let Some(slot) = free_slot {
        if let Some(v) = odd.get(slot as usize).filter(|v| !v.is_zero()) {
            return Err(Error::ConstraintViolation { index: 1 - r, value: v.to_string() });
        }
    }
    (0..=n_max as i64)
        .map(|n| {
            if Some(n) == free_slot {
                return free_gamma.cloned().ok_or(Error::MissingFreeCoefficient { r, index: -r });
            }
            (0..=n).try_fold(Rational::zero(), |acc, i| Ok(acc + bracket_r(n, i, r)? * &odd[i as usize]))
        })
        .collect()
}

/// Cauchy product, degrees add.
pub fn graded_multiply(a: &GradedElement, b: &GradedElement) -> GradedElement {
    GradedElement::new(a.degree + b.degree, a.phi.mul(&b.phi))
}

/// `2 γ_1 / γ_0`.
pub fn degree_from_gammas(g0: &Rational, g1: &Rational) -> Result<Rational> {
    (Rational::from(2) * g1).checked_div(g0)
}

/// Outcome of the three independent membership tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub relations: bool,
    pub functional_equation: bool,
    pub delta: bool,
}

impl Membership {
    pub fn all(&self) -> bool {
        self.relations && self.functional_equation && self.delta
    }

    pub fn none(&self) -> bool {
        !self.relations && !self.functional_equation && !self.delta
    }
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "relations={} functional={} delta={}", self.relations, self.functional_equation, self.delta)
    }
}

/// Runs all three tests to the element's truncation.
pub fn membership(e: &GradedElement) -> Membership {
    let relations = check_relations(e.gammas(), e.degree, covering_m_max(e.degree, e.truncation()))
        .map(|c| c.is_consistent())
        .unwrap_or(false);
    Membership {
        relations,
        functional_equation: check_functional_equation(e).holds,
        delta: matches!(delta_decompose(e), DeltaOutcome::Member { .. }),
    }
}

/// Splits `γ` into even- and odd-indexed parts.
pub fn split_parity(gammas: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let even = gammas.iter().step_by(2).cloned().collect();
    let odd = gammas.iter().skip(1).step_by(2).cloned().collect();
    (even, odd)
}
