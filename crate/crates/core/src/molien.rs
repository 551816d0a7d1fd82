//! Finite groups over cyclotomic fields, their Molien series and the
//! Gorenstein screen built on the Laurent coefficients at t = 1.

use std::collections::{HashMap, VecDeque};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{binomial, embed_root, CycloNumber, Poly, QPoly, Rational, Scalar};
use crate::fgraded::{check_relations, Family, RelationCheck};
use crate::series::{rational_to_laurent, LaurentAtOne, RationalFunction, TruncatedSeries};

pub const DEFAULT_MAX_ORDER: usize = 10_000;

type CPoly = Poly<CycloNumber>;

/// Eigenvalues `ζ_order^k`, one exponent per dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spectrum {
    pub order: u64,
    pub exponents: Vec<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupElement {
    /// `diag(ζ_order^{k_1}, …, ζ_order^{k_n})`
    Diagonal { order: u64, exponents: Vec<i64> },
    /// Dense matrix; `eigenvalues` is an optional user-supplied spectrum.
    Matrix { entries: Vec<Vec<CycloNumber>>, eigenvalues: Option<Spectrum> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum ElementKey {
    Diagonal(Vec<i64>),
    Matrix(Vec<Vec<Vec<Rational>>>),
}

fn lift_exponents(order: u64, exponents: &[i64], target: u64) -> Vec<i64> {
    let step = (target / order) as i64;
    exponents.iter().map(|e| (e * step).rem_euclid(target as i64)).collect()
}

fn identity_matrix(n: usize, order: u64) -> Vec<Vec<CycloNumber>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { CycloNumber::one_of(order) } else { CycloNumber::zero_of(order) }).collect())
        .collect()
}

fn mat_mul(a: &[Vec<CycloNumber>], b: &[Vec<CycloNumber>], order: u64) -> Vec<Vec<CycloNumber>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(CycloNumber::zero_of(order), |acc, k| acc + a[i][k].clone() * b[k][j].clone()))
                .collect()
        })
        .collect()
}

/// Rank over Q(ζ) by Gaussian elimination.
fn rank(mut m: Vec<Vec<CycloNumber>>) -> Result<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inverse()?;
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone() * inv.clone();
            let pivot_row = m[r].clone();
            for (x, p) in m[i].iter_mut().zip(&pivot_row).skip(c) {
                *x = x.clone() - f.clone() * p.clone();
            }
        }
        r += 1;
    }
    Ok(r)
}

/// Fraction-free (Bareiss) determinant over `Q(ζ)[t]`.
fn det_poly(mut a: Vec<Vec<CPoly>>) -> Result<CPoly> {
    let n = a.len();
    let mut negate = false;
    let mut prev = CPoly::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(CPoly::zero());
            };
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a.get(n.wrapping_sub(1)).map_or(CPoly::one(), |row| row[n - 1].clone());
    Ok(if negate { -&d } else { d })
}

impl GroupElement {
    pub fn identity_diagonal(dim: usize, order: u64) -> Self {
        GroupElement::Diagonal { order, exponents: vec![0; dim] }
    }

    pub fn dim(&self) -> usize {
        match self {
            GroupElement::Diagonal { exponents, .. } => exponents.len(),
            GroupElement::Matrix { entries, .. } => entries.len(),
        }
    }

    fn lifted(&self, target: u64) -> Result<Self> {
        Ok(match self {
            GroupElement::Diagonal { order, exponents } => {
                GroupElement::Diagonal { order: target, exponents: lift_exponents(*order, exponents, target) }
            }
            GroupElement::Matrix { entries, eigenvalues } => GroupElement::Matrix {
                entries: entries.iter().map(|row| row.iter().map(|c| c.lift(target)).collect()).collect::<Result<_>>()?,
                eigenvalues: eigenvalues.clone(),
            },
        })
    }

    fn field_order(&self) -> u64 {
        match self {
            GroupElement::Diagonal { order, .. } => *order,
            GroupElement::Matrix { entries, .. } => entries.iter().flatten().fold(1, |acc, c| acc.lcm(&c.order())),
        }
    }

    fn as_matrix(&self, order: u64) -> Result<Vec<Vec<CycloNumber>>> {
        match self {
            GroupElement::Diagonal { order: o, exponents } => {
                let mut m = identity_matrix(exponents.len(), order);
                for (i, e) in exponents.iter().enumerate() {
                    m[i][i] = embed_root(*o, *e)?.lift(order)?;
                }
                Ok(m)
            }
            GroupElement::Matrix { entries, .. } => {
                entries.iter().map(|row| row.iter().map(|c| c.lift(order)).collect()).collect()
            }
        }
    }

    /// Product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::InvalidInput("group elements of different dimension".into()));
        }
        let l = self.field_order().lcm(&other.field_order());
        match (self.lifted(l)?, other.lifted(l)?) {
            (GroupElement::Diagonal { exponents: a, .. }, GroupElement::Diagonal { exponents: b, .. }) => {
                let exponents = a.iter().zip(&b).map(|(x, y)| (x + y).rem_euclid(l as i64)).collect();
                Ok(GroupElement::Diagonal { order: l, exponents })
            }
            (a, b) => {
                Ok(GroupElement::Matrix { entries: mat_mul(&a.as_matrix(l)?, &b.as_matrix(l)?, l), eigenvalues: None })
            }
        }
    }

    fn key(&self) -> ElementKey {
        match self {
            GroupElement::Diagonal { exponents, .. } => ElementKey::Diagonal(exponents.clone()),
            GroupElement::Matrix { entries, .. } => {
                ElementKey::Matrix(entries.iter().map(|row| row.iter().map(|c| c.coeffs().to_vec()).collect()).collect())
            }
        }
    }

    /// `p(g)`: the dimension of the fixed space.
    pub fn fixed_dim(&self) -> Result<usize> {
        match self {
            GroupElement::Diagonal { order, exponents } => {
                Ok(exponents.iter().filter(|e| e.rem_euclid(*order as i64) == 0).count())
            }
            GroupElement::Matrix { entries, .. } => {
                let l = self.field_order();
                let n = entries.len();
                let mut m = self.as_matrix(l)?;
                for (i, row) in m.iter_mut().enumerate() {
                    row[i] = row[i].clone() - CycloNumber::one_of(l);
                }
                Ok(n - rank(m)?)
            }
        }
    }

    /// `det(id - t g)`.
    pub fn det_one_minus_tg(&self) -> Result<CPoly> {
        match self {
            GroupElement::Diagonal { order, exponents } => exponents.iter().try_fold(CPoly::one(), |acc, e| {
                let factor = Poly::new(vec![CycloNumber::one_of(*order), -embed_root(*order, *e)?]);
                Ok(&acc * &factor)
            }),
            GroupElement::Matrix { .. } => {
                let l = self.field_order();
                let m = self.as_matrix(l)?;
                let n = m.len();
                let entries = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                let c0 = if i == j { CycloNumber::one_of(l) } else { CycloNumber::zero_of(l) };
                                Poly::new(vec![c0, -m[i][j].clone()])
                            })
                            .collect()
                    })
                    .collect();
                det_poly(entries)
            }
        }
    }

    /// Eigenvalues different from 1, when known.
    pub fn nontrivial_eigenvalues(&self) -> Option<Result<Vec<CycloNumber>>> {
        let (order, exps) = match self {
            GroupElement::Diagonal { order, exponents } => (*order, exponents),
            GroupElement::Matrix { eigenvalues: Some(s), .. } => (s.order, &s.exponents),
            GroupElement::Matrix { eigenvalues: None, .. } => return None,
        };
        Some(
            exps.iter()
                .filter(|e| e.rem_euclid(order as i64) != 0)
                .map(|e| embed_root(order, *e))
                .collect(),
        )
    }

    fn is_identity(&self) -> Result<bool> {
        Ok(self.fixed_dim()? == self.dim())
    }

    /// Multiplicative order, found by powering up to `bound`.
    pub fn element_order(&self, bound: usize) -> Result<u64> {
        if let GroupElement::Diagonal { order, exponents } = self {
            let g = exponents.iter().fold(*order as i64, |acc, e| acc.gcd(e));
            return Ok(*order / g as u64);
        }
        let mut p = self.clone();
        for k in 1..=bound as u64 {
            if p.is_identity()? {
                return Ok(k);
            }
            p = p.mul(self)?;
        }
        Err(Error::OrderExceeded(bound))
    }
}

/// A closed finite group with its strata by fixed-space dimension.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    dim: usize,
    elements: Vec<GroupElement>,
    fixed: Vec<usize>,
}

/// Counts per stratum, indexed by `p(g)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub order: usize,
    pub dim: usize,
    pub strata_sizes: Vec<usize>,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    /// `p(g)` for each element, aligned with [`FiniteGroup::elements`].
    pub fn fixed_dims(&self) -> &[usize] {
        &self.fixed
    }

    /// Elements with `p(g) = p`.
    pub fn stratum(&self, p: usize) -> Vec<&GroupElement> {
        self.elements.iter().zip(&self.fixed).filter(|(_, &f)| f == p).map(|(g, _)| g).collect()
    }

    pub fn strata_sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.dim + 1];
        for &p in &self.fixed {
            s[p] += 1;
        }
        s
    }

    pub fn summary(&self) -> GroupSummary {
        GroupSummary { order: self.order(), dim: self.dim, strata_sizes: self.strata_sizes() }
    }

    /// Key set, for comparing groups built from different generator lists.
    pub fn contains(&self, g: &GroupElement) -> bool {
        let l = self.elements.first().map_or(1, GroupElement::field_order);
        g.lifted(l.lcm(&g.field_order())).is_ok_and(|h| {
            let k = h.key();
            self.elements.iter().any(|e| e.key() == k)
        })
    }
}

/// Breadth-first closure of the generators under multiplication.
pub fn group_closure(generators: &[GroupElement], max_order: usize) -> Result<FiniteGroup> {
    let first = generators.first().ok_or_else(|| Error::InvalidInput("no generators".into()))?;
    let dim = first.dim();
    if generators.iter().any(|g| g.dim() != dim) {
        return Err(Error::InvalidInput("generators differ in dimension".into()));
    }
    let l = generators.iter().fold(1u64, |acc, g| acc.lcm(&g.field_order()));
    let any_matrix = generators.iter().any(|g| matches!(g, GroupElement::Matrix { .. }));
    let normalize = |g: &GroupElement| -> Result<GroupElement> {
        let g = g.lifted(l)?;
        if any_matrix {
            if let GroupElement::Diagonal { order, exponents } = &g {
                let spectrum = Spectrum { order: *order, exponents: exponents.clone() };
                return Ok(GroupElement::Matrix { entries: g.as_matrix(l)?, eigenvalues: Some(spectrum) });
            }
        }
        Ok(g)
    };
    let gens: Vec<GroupElement> = generators.iter().map(normalize).collect::<Result<_>>()?;
    let identity = normalize(&GroupElement::identity_diagonal(dim, l))?;

    let mut index: HashMap<ElementKey, usize> = HashMap::new();
    let mut elements = vec![identity.clone()];
    index.insert(identity.key(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in &gens {
            let h = elements[i].mul(g)?.lifted(l)?;
            let key = h.key();
            if index.contains_key(&key) {
                continue;
            }
            if elements.len() >= max_order {
                return Err(Error::OrderExceeded(max_order));
            }
            index.insert(key, elements.len());
            queue.push_back(elements.len());
            elements.push(h);
        }
    }
    // user-supplied spectra survive on the generators themselves
    for g in &gens {
        if let GroupElement::Matrix { eigenvalues: Some(s), .. } = g {
            let i = index[&g.key()];
            if let GroupElement::Matrix { eigenvalues, .. } = &mut elements[i] {
                *eigenvalues = Some(s.clone());
            }
        }
    }
    if let GroupElement::Matrix { eigenvalues, .. } = &mut elements[0] {
        *eigenvalues = Some(Spectrum { order: 1, exponents: vec![0; dim] });
    }
    let fixed = elements.iter().map(GroupElement::fixed_dim).collect::<Result<_>>()?;
    Ok(FiniteGroup { dim, elements, fixed })
}

/// The Hilbert series of the invariant ring and its Laurent expansion at t = 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MolienSeries {
    pub hilbert: RationalFunction,
    pub laurent: LaurentAtOne,
}

/// `|G|^{-1} Σ_g 1 / det(id - t g)`, summed over the common denominator `(1 - t^M)^n`.
pub fn molien_series(g: &FiniteGroup, k: usize) -> Result<MolienSeries> {
    let n = g.dim();
    let bound = g.order();
    let m = g.elements().iter().try_fold(1u64, |acc, e| Ok::<_, Error>(acc.lcm(&e.element_order(bound)?)))?;
    let mut base = vec![Rational::zero(); m as usize + 1];
    base[0] = Rational::one();
    base[m as usize] = -Rational::one();
    let common: QPoly = Poly::new(base).pow(n as u32);
    let common_c: CPoly = common.map(|c| CycloNumber::from_scalar(c.clone()));

    let mut total = CPoly::zero();
    for e in g.elements() {
        let d = e.det_one_minus_tg()?;
        total = &total + &common_c.div_exact(&d)?;
    }
    let inv_order = Rational::frac(1, g.order() as i64);
    let num: QPoly = Poly::new(
        total
            .coeffs()
            .iter()
            .map(|c| c.to_rational().map(|r| r * &inv_order).ok_or(Error::NonRationalResult))
            .collect::<Result<_>>()?,
    );
    let hilbert = RationalFunction::new(num, common)?;
    let laurent = rational_to_laurent(&hilbert, k)?;
    if laurent.pole_order != n {
        return Err(Error::Inconsistent(format!("pole order {} differs from dimension {n}", laurent.pole_order)));
    }
    Ok(MolienSeries { hilbert, laurent })
}

/// `Σ_i -μ^i / (μ - 1)^{i+1} x^i`, the expansion of `1 / (1 - μ t)` in `x = 1 - t`.
fn eigen_factor(mu: &CycloNumber, truncation: usize) -> Result<TruncatedSeries<CycloNumber>> {
    let one = CycloNumber::one_of(mu.order());
    let inv = (mu.clone() - one.clone()).inverse()?;
    let mut coeffs = Vec::with_capacity(truncation + 1);
    let mut term = -inv.clone();
    for _ in 0..=truncation {
        coeffs.push(term.clone());
        term = term * mu.clone() * inv.clone();
    }
    Ok(TruncatedSeries::new(coeffs, truncation))
}

/// `γ_0..γ_K` from the elements with `p(g) >= n - K`, using their eigenvalues.
pub fn stratified_gammas(g: &FiniteGroup, k: usize) -> Result<Vec<Rational>> {
    let n = g.dim();
    let mut acc: Vec<CycloNumber> = vec![CycloNumber::zero_of(1); k + 1];
    for (idx, (e, &p)) in g.elements().iter().zip(g.fixed_dims()).enumerate() {
        let shift = n - p;
        if shift > k {
            continue;
        }
        let mus = e.nontrivial_eigenvalues().ok_or(Error::EigenvaluesUnavailable(idx))??;
        if mus.len() != shift {
            return Err(Error::Inconsistent(format!("element {idx}: spectrum disagrees with fixed space")));
        }
        let t = k - shift;
        let mut prod = TruncatedSeries::<CycloNumber>::one(t);
        for mu in &mus {
            prod = prod.mul(&eigen_factor(mu, t)?);
        }
        for (i, c) in prod.coeffs().iter().enumerate() {
            acc[shift + i] = acc[shift + i].clone() + c.clone();
        }
    }
    let inv_order = Rational::frac(1, g.order() as i64);
    acc.iter()
        .map(|c| c.to_rational().map(|r| r * &inv_order).ok_or(Error::NonRationalResult))
        .collect()
}

/// `|G_{n-1}|`.
pub fn pseudoreflection_count(g: &FiniteGroup) -> usize {
    g.fixed_dims().iter().filter(|&&p| p + 1 == g.dim()).count()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ScreenVerdict {
    NotGorenstein { family: Family, m: i64, residual: Rational, certificate: String },
    ConsistentUpTo { m: i64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScreenReport {
    pub group: GroupSummary,
    pub pseudoreflections: usize,
    pub r: i64,
    pub gammas: Vec<Rational>,
    pub verdict: ScreenVerdict,
    pub relations: RelationCheck,
}

/// Runs the relation families on the Molien γ's with `r` = number of pseudoreflections.
pub fn gorenstein_screen(g: &FiniteGroup, k: usize, m_max: i64) -> Result<ScreenReport> {
    if k < 3 {
        return Err(Error::InsufficientCoefficients(format!("screening needs gamma_0..gamma_3, got K = {k}")));
    }
    let series = molien_series(g, k)?;
    let gammas = series.laurent.gammas;
    let p = pseudoreflection_count(g);
    let r = p as i64;
    let from_gammas = series.laurent.pole_order;
    let deg = crate::fgraded::degree_from_gammas(&gammas[0], &gammas[1])?;
    if deg != Rational::from(r) {
        return Err(Error::Inconsistent(format!(
            "pseudoreflection count {r} differs from 2γ_1/γ_0 = {deg} (pole order {from_gammas})"
        )));
    }
    let relations = check_relations(&gammas, r, m_max)?;
    let verdict = match relations.first_violation() {
        Some((family, res)) => ScreenVerdict::NotGorenstein {
            family,
            m: res.m,
            residual: res.reduced_residual.clone(),
            certificate: res.certificate(),
        },
        None => {
            let m = relations.reports.iter().flat_map(|rep| rep.residuals.iter().map(|x| x.m)).max().unwrap_or(0);
            ScreenVerdict::ConsistentUpTo { m }
        }
    };
    Ok(ScreenReport { group: g.summary(), pseudoreflections: p, r, gammas, verdict, relations })
}

/// Group input: `{"dim", "cyclo_order", "generators": [{"diag": [...]} | {"matrix": [[...]], "eigenvalues": [...]}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub dim: usize,
    pub cyclo_order: u64,
    pub generators: Vec<GeneratorSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GeneratorSpec {
    Diag {
        diag: Vec<i64>,
    },
    Matrix {
        matrix: Vec<Vec<EntrySpec>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        eigenvalues: Option<Vec<i64>>,
    },
}

/// A matrix entry: a rational or an explicit cyclotomic number.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntrySpec {
    Rational(Rational),
    Cyclo(CycloNumber),
}

impl GroupSpec {
    pub fn generators(&self) -> Result<Vec<GroupElement>> {
        if self.cyclo_order == 0 {
            return Err(Error::InvalidInput("cyclo_order must be positive".into()));
        }
        let n = self.cyclo_order;
        self.generators
            .iter()
            .map(|g| match g {
                GeneratorSpec::Diag { diag } => {
                    if diag.len() != self.dim {
                        return Err(Error::InvalidInput(format!("diag has {} entries, dim is {}", diag.len(), self.dim)));
                    }
                    Ok(GroupElement::Diagonal { order: n, exponents: diag.iter().map(|e| e.rem_euclid(n as i64)).collect() })
                }
                GeneratorSpec::Matrix { matrix, eigenvalues } => {
                    if matrix.len() != self.dim || matrix.iter().any(|row| row.len() != self.dim) {
                        return Err(Error::InvalidInput(format!("matrix must be {0}x{0}", self.dim)));
                    }
                    let entries = matrix
                        .iter()
                        .map(|row| {
                            row.iter()
                                .map(|c| match c {
                                    EntrySpec::Rational(r) => CycloNumber::from_rational(n, r.clone()),
                                    EntrySpec::Cyclo(z) => z.lift(n.lcm(&z.order())),
                                })
                                .collect::<Result<Vec<_>>>()
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let eigenvalues = match eigenvalues {
                        Some(e) if e.len() != self.dim => {
                            return Err(Error::InvalidInput("eigenvalue list must have dim entries".into()))
                        }
                        Some(e) => Some(Spectrum { order: n, exponents: e.clone() }),
                        None => None,
                    };
                    Ok(GroupElement::Matrix { entries, eigenvalues })
                }
            })
            .collect()
    }

    pub fn closure(&self, max_order: usize) -> Result<FiniteGroup> {
        group_closure(&self.generators()?, max_order)
    }
}

/// Taylor coefficients at t = 0: the dimensions of the graded pieces.
pub fn invariant_dimensions(series: &MolienSeries, degree: usize) -> Result<Vec<Rational>> {
    Ok(series.hilbert.taylor(degree)?.into_coeffs())
}

/// `C(n + k - 1, k)`: dimensions for the trivial group, used as a reference.
pub fn polynomial_ring_dimensions(n: usize, degree: usize) -> Vec<Rational> {
    (0..=degree as i64).map(|k| binomial(n as i64 + k - 1, k)).collect()
}

impl CycloNumber {
    fn from_scalar(r: Rational) -> Self {
        <CycloNumber as Scalar>::from_rational(r)
    }
}
