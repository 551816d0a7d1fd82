//! Coefficient triangles of the relation families, the Lucas triangle and the
//! symmetric rescalings.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{binomial, factorial, Rational};
use crate::fgraded::{families_for, family_m_bound, live_terms, reduce_row, relation_terms, Family};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Presentation {
    Raw,
    GcdReduced,
    Rescaled,
}

impl std::str::FromStr for Presentation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(Presentation::Raw),
            "gcd" | "gcd_reduced" => Ok(Presentation::GcdReduced),
            "rescaled" => Ok(Presentation::Rescaled),
            _ => Err(Error::Parse(format!("unknown presentation {s:?}"))),
        }
    }
}

/// One row; `start_index` is the γ-subscript of the first coefficient
/// (for plain number triangles, the row number).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleRow {
    pub start_index: i64,
    pub coefficients: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTriangle {
    pub r: Option<i64>,
    pub presentation: Presentation,
    pub rows: Vec<TriangleRow>,
}

impl CoefficientTriangle {
    pub fn entries(&self) -> Vec<Vec<Rational>> {
        self.rows.iter().map(|r| r.coefficients.clone()).collect()
    }
}

/// Right-aligned columns, one row per line, each prefixed by its label.
impl fmt::Display for CoefficientTriangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lw = self.rows.iter().map(|r| r.start_index.to_string().len()).max().unwrap_or(1);
        let w = self
            .rows
            .iter()
            .flat_map(|r| r.coefficients.iter().map(|c| c.to_string().len()))
            .max()
            .unwrap_or(1);
        for row in &self.rows {
            write!(f, "{:>lw$}:", row.start_index)?;
            for c in &row.coefficients {
                write!(f, " {c:>w$}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn relation_row(family: Family, r: i64, m: i64) -> Option<TriangleRow> {
    let terms = live_terms(&relation_terms(family, r, m));
    let start_index = terms.first()?.0;
    let coefficients = terms.into_iter().map(|(_, c)| c).collect();
    Some(TriangleRow { start_index, coefficients })
}

/// The first `n_rows` nonempty rows of the relation families for degree `r`.
///
/// For `r < 0` the finite block comes first, then the unbounded family.
/// `Rescaled` is available for odd negative `r` only.
pub fn emit_triangle(r: i64, n_rows: usize, presentation: Presentation) -> Result<CoefficientTriangle> {
    if n_rows == 0 {
        return Err(Error::InvalidInput("n_rows must be at least 1".into()));
    }
    if presentation == Presentation::Rescaled {
        let mut t = emit_rescaled(r)?;
        t.rows.truncate(n_rows);
        return Ok(t);
    }
    let mut rows = Vec::with_capacity(n_rows);
    'families: for family in families_for(r) {
        let bound = family_m_bound(family, r).unwrap_or(i64::MAX);
        let mut m = 1;
        while m <= bound {
            if rows.len() == n_rows {
                break 'families;
            }
            if let Some(mut row) = relation_row(family, r, m) {
                if presentation == Presentation::GcdReduced {
                    row.coefficients = reduce_row(&row.coefficients).0;
                }
                rows.push(row);
            }
            m += 1;
        }
    }
    Ok(CoefficientTriangle { r: Some(r), presentation, rows })
}

/// `(m+i)! (2k-m-i)! / ((m-i)! i! (k-m)!)`, the finite block for `r = 1 - 2k`
/// scaled by `(2k)! / (m! (k-m)!)`.
pub fn emit_rescaled(r: i64) -> Result<CoefficientTriangle> {
    if r >= 0 || r.rem_euclid(2) == 0 {
        return Err(Error::WrongParityOrSign(r));
    }
    let k = (1 - r) / 2;
    let fact = |n: i64| Rational::from(factorial(n as u64));
    let entry = |m: i64, i: i64| fact(m + i) * fact(2 * k - m - i) / (fact(m - i) * fact(i) * fact(k - m));
    let rows: Vec<TriangleRow> = (1..=k)
        .map(|m| TriangleRow { start_index: m - 1, coefficients: (0..=m).map(|i| entry(m, i)).collect() })
        .collect();
    for m in 1..=k {
        for i in 0..=m {
            if k - i >= 1 {
                assert_eq!(entry(m, i), entry(k - i, k - m), "slant symmetry at ({m},{i})");
            }
        }
    }
    Ok(CoefficientTriangle { r: Some(r), presentation: Presentation::Rescaled, rows })
}

/// Rows `n = 0..=k` with entries `k! / ((n-i)! i! (k-n)!)`.
pub fn emit_pascal_rescaled(k: i64) -> Result<CoefficientTriangle> {
    if k < 1 {
        return Err(Error::InvalidInput(format!("k must be at least 1, got {k}")));
    }
    let entry = |n: i64, i: i64| binomial(k, n) * binomial(n, i);
    let rows: Vec<TriangleRow> = (0..=k)
        .map(|n| TriangleRow { start_index: n, coefficients: (0..=n).map(|i| entry(n, i)).collect() })
        .collect();
    for n in 0..=k {
        for i in 0..=n {
            assert_eq!(entry(n, i), entry(k - i, k - n), "symmetry at ({n},{i})");
        }
    }
    Ok(CoefficientTriangle { r: None, presentation: Presentation::Rescaled, rows })
}

/// Lucas row `n`: `(2)` for `n = 0`, else `(n+j)/n · C(n,j)`.
pub fn lucas_row(n: i64) -> Vec<Rational> {
    if n == 0 {
        return vec![Rational::from(2)];
    }
    (0..=n).map(|j| Rational::frac(n + j, n) * binomial(n, j)).collect()
}

/// Rows `0..n_rows` of the Lucas triangle.
pub fn lucas_triangle(n_rows: usize) -> CoefficientTriangle {
    let rows = (0..n_rows as i64)
        .map(|n| TriangleRow { start_index: n, coefficients: lucas_row(n) })
        .collect();
    CoefficientTriangle { r: None, presentation: Presentation::Raw, rows }
}
