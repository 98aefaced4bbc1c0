//! Exact rational scalars and dense rational matrices.
//!
//! Every quantity in this crate is an arbitrary-precision rational; no
//! floating point is used anywhere. Rationals are kept reduced with a
//! positive denominator and serialize as `"p/q"` (or `"p"` when `q = 1`).

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number, always reduced, denominator > 0.
pub type Rational = num_rational::BigRational;

/// `n` as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d` as a rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders in canonical form: `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
}

/// Parses `"p/q"` or `"p"`. The result is reduced; a zero denominator is an error.
pub fn parse_rational(s: &str) -> Result<Rational, LinalgError> {
    let bad = || LinalgError::BadRational(s.to_string());
    let mut parts = s.splitn(2, '/');
    let numer: BigInt = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let denom: BigInt = match parts.next() {
        Some(d) => d.trim().parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(numer, denom))
}

/// Dense row-major matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows * cols");
        Self { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| rat_int(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        for k in 0..self.cols {
            self.data.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    /// Appends a row, returning a new matrix.
    pub fn with_row(&self, row: &[Rational]) -> Self {
        assert_eq!(row.len(), self.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(row);
        Self {
            rows: self.rows + 1,
            cols: self.cols,
            data,
        }
    }
}

/// Exact rank over the rationals by pivoted Gaussian elimination.
/// Pivot selection is deterministic: first nonzero entry in row-major order.
pub fn rank(m: &Matrix) -> usize {
    let mut a = m.clone();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a.at(i, c).is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let pivot = a.at(r, c).clone();
        for i in r + 1..a.rows {
            if a.at(i, c).is_zero() {
                continue;
            }
            let f = a.at(i, c) / &pivot;
            for j in c..a.cols {
                let v = a.at(i, j) - &f * a.at(r, j);
                a.data[i * a.cols + j] = v;
            }
        }
        r += 1;
    }
    r
}

/// True iff `v` lies in the row span of `basis_rows`.
pub fn in_span(v: &[Rational], basis_rows: &Matrix) -> Result<bool, LinalgError> {
    if v.len() != basis_rows.cols {
        return Err(LinalgError::DimensionMismatch {
            expected: basis_rows.cols,
            got: v.len(),
        });
    }
    let base = rank(basis_rows);
    Ok(rank(&basis_rows.with_row(v)) == base)
}

/// Solves `generators^T x = target`, i.e. finds coefficients expressing
/// `target` as a combination of the generator rows. Returns `None` when the
/// system is unsolvable. The solution is deterministic: pivots are chosen
/// first-come in row-major order and free coefficients are set to zero.
pub fn solve_in_basis(
    target: &[Rational],
    generators: &Matrix,
) -> Result<Option<Vec<Rational>>, LinalgError> {
    if target.len() != generators.cols {
        return Err(LinalgError::DimensionMismatch {
            expected: generators.cols,
            got: target.len(),
        });
    }
    let nvars = generators.rows;
    let neqs = generators.cols;
    // Augmented system: one equation per coordinate of the target.
    let mut a = Matrix::zero(neqs, nvars + 1);
    for e in 0..neqs {
        for v in 0..nvars {
            a.data[e * (nvars + 1) + v] = generators.at(v, e).clone();
        }
        a.data[e * (nvars + 1) + nvars] = target[e].clone();
    }

    let mut pivot_of_var: Vec<Option<usize>> = vec![None; nvars];
    let mut row = 0;
    for var in 0..nvars {
        if row == neqs {
            break;
        }
        let Some(p) = (row..neqs).find(|&i| !a.at(i, var).is_zero()) else {
            continue;
        };
        a.swap_rows(row, p);
        let pivot = a.at(row, var).clone();
        for j in var..=nvars {
            let v = a.at(row, j) / &pivot;
            a.data[row * (nvars + 1) + j] = v;
        }
        for i in 0..neqs {
            if i == row || a.at(i, var).is_zero() {
                continue;
            }
            let f = a.at(i, var).clone();
            for j in var..=nvars {
                let v = a.at(i, j) - &f * a.at(row, j);
                a.data[i * (nvars + 1) + j] = v;
            }
        }
        pivot_of_var[var] = Some(row);
        row += 1;
    }

    // Inconsistent iff some fully-eliminated equation has a nonzero rhs.
    for i in row..neqs {
        if !a.at(i, nvars).is_zero() {
            return Ok(None);
        }
    }

    let mut x = vec![Rational::zero(); nvars];
    for (xv, pr) in x.iter_mut().zip(pivot_of_var.iter()) {
        if let Some(r) = pr {
            *xv = a.at(*r, nvars).clone();
        }
    }
    Ok(Some(x))
}
