//! Exact dense linear algebra over Q and number fields, a sparse echelon
//! structure for large relation spaces, and univariate factorization over Q.

mod factor;
mod modpoly;
mod sparse;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::{Scalar, UniPoly};

pub use factor::{factor_rational, squarefree_decomposition, RationalFactorization};
pub use sparse::{SparseEchelon, SparseVec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cannot factor the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial has non-rational coefficients")]
    NonRational,
}

/// Dense row-major matrix of scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// # Panics
    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<Scalar>>, cols: usize) -> Matrix {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Matrix {
            rows: nrows,
            cols,
            data,
        }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
                .collect(),
            cols,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_rational(&self) -> bool {
        self.data.iter().all(Scalar::is_rational)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = &out.data[i * other.cols + j] + &(a * other.get(k, j));
                    out.data[i * other.cols + j] = v;
                }
            }
        }
        Ok(out)
    }

    /// `self * v` for a column vector.
    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Scalar::zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Reduced row-echelon form together with rank and pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Reduced row-echelon form. Rational input goes through fraction-free
/// (Bareiss) forward elimination on an integer scaling of the rows; number
/// field input uses ordinary Gauss-Jordan elimination.
pub fn rref(m: &Matrix) -> Rref {
    let echelon_rows = if m.is_rational() {
        bareiss_echelon(m)
    } else {
        gauss_echelon(m)
    };
    back_substitute(echelon_rows, m.rows, m.cols)
}

/// Forward elimination over the integers. Returns the nonzero echelon rows as
/// scalars (not yet normalized).
fn bareiss_echelon(m: &Matrix) -> Vec<Vec<Scalar>> {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|i| {
            let row: Vec<&BigRational> = m.row(i).iter().map(|x| x.as_rational().unwrap()).collect();
            let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter().map(|q| (*q * &lcm).to_integer()).collect()
        })
        .collect();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..m.rows {
            for j in c + 1..m.cols {
                let num = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                debug_assert!((&num % &prev).is_zero());
                a[i][j] = num / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    a.truncate(r);
    a.into_iter()
        .map(|row| row.into_iter().map(Scalar::from_bigint).collect())
        .collect()
}

fn gauss_echelon(m: &Matrix) -> Vec<Vec<Scalar>> {
    let mut a = m.row_vecs();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inv().unwrap();
        let pivot_row: Vec<Scalar> = a[r].iter().map(|x| x * &inv).collect();
        for row in a.iter_mut().skip(r + 1) {
            let factor = row[c].clone();
            if factor.is_zero() {
                continue;
            }
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = &*x - &(&factor * p);
            }
        }
        a[r] = pivot_row;
        r += 1;
    }
    a.truncate(r);
    a
}

fn back_substitute(mut rows: Vec<Vec<Scalar>>, nrows: usize, cols: usize) -> Rref {
    let mut pivots = Vec::with_capacity(rows.len());
    for i in 0..rows.len() {
        let c = rows[i].iter().position(|x| !x.is_zero()).expect("nonzero echelon row");
        let inv = rows[i][c].inv().unwrap();
        rows[i] = rows[i].iter().map(|x| x * &inv).collect();
        for k in 0..i {
            let factor = rows[k][c].clone();
            if factor.is_zero() {
                continue;
            }
            let pivot_row = rows[i].clone();
            for (x, p) in rows[k].iter_mut().zip(&pivot_row) {
                *x = &*x - &(&factor * p);
            }
        }
        pivots.push(c);
    }
    let rank = rows.len();
    rows.resize(nrows, vec![Scalar::zero(); cols]);
    Rref {
        matrix: Matrix::from_rows(rows, cols),
        rank,
        pivots,
    }
}

/// A subspace of `Q^n` (or `K^n`) stored as an RREF basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Subspace {
        Subspace::span(ambient, Matrix::identity(ambient).row_vecs()).unwrap()
    }

    /// Span of the given vectors.
    pub fn span(ambient: usize, vectors: Vec<Vec<Scalar>>) -> Result<Subspace, LinalgError> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(LinalgError::DimensionMismatch {
                expected: ambient,
                got: v.len(),
            });
        }
        if vectors.is_empty() {
            return Ok(Subspace::zero(ambient));
        }
        let r = rref(&Matrix::from_rows(vectors, ambient));
        let basis = r.matrix.row_vecs().into_iter().take(r.rank).collect();
        Ok(Subspace {
            ambient,
            basis,
            pivots: r.pivots,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Exact membership test.
    pub fn contains(&self, v: &[Scalar]) -> Result<bool, LinalgError> {
        if v.len() != self.ambient {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient,
                got: v.len(),
            });
        }
        let mut w = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let c = w[p].clone();
            if c.is_zero() {
                continue;
            }
            for (x, r) in w.iter_mut().zip(row) {
                *x = &*x - &(&c * r);
            }
        }
        Ok(w.iter().all(Scalar::is_zero))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        if other.ambient != self.ambient {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient,
                got: other.ambient,
            });
        }
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, rows)
    }

    /// Dimension of the ambient space modulo this subspace.
    pub fn quotient_dim(&self) -> usize {
        self.ambient - self.dim()
    }
}

/// Kernel (null space) of `m` as a subspace of the column space.
pub fn kernel_basis(m: &Matrix) -> Subspace {
    let r = rref(m);
    let mut vectors = Vec::new();
    for free in (0..m.cols).filter(|c| !r.pivots.contains(c)) {
        let mut v = vec![Scalar::zero(); m.cols];
        v[free] = Scalar::one();
        for (i, &p) in r.pivots.iter().enumerate() {
            v[p] = -r.matrix.get(i, free);
        }
        vectors.push(v);
    }
    Subspace::span(m.cols, vectors).expect("consistent dimensions")
}

/// Dimension of a coordinate space with `ambient` basis vectors (e.g. a
/// monomial list) modulo `s`.
pub fn quotient_dim(ambient: usize, s: &Subspace) -> Result<usize, LinalgError> {
    if s.ambient_dim() != ambient {
        return Err(LinalgError::DimensionMismatch {
            expected: ambient,
            got: s.ambient_dim(),
        });
    }
    Ok(s.quotient_dim())
}

/// Characteristic polynomial `det(t*I - m)`, computed with Berkowitz'
/// division-free algorithm.
pub fn charpoly(m: &Matrix) -> Result<UniPoly, LinalgError> {
    if m.rows != m.cols {
        return Err(LinalgError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(UniPoly::one());
    }
    // Peel the leading row/column off repeatedly, keeping a Toeplitz
    // transform for each step.
    let mut transforms: Vec<Vec<Vec<Scalar>>> = Vec::new();
    let mut a = m.row_vecs();
    while a.len() > 1 {
        let size = a.len();
        let r: Vec<Scalar> = a[0][1..].iter().map(|x| -x).collect();
        let c: Vec<Scalar> = a[1..].iter().map(|row| row[0].clone()).collect();
        let corner = -&a[0][0];
        let sub: Vec<Vec<Scalar>> = a[1..].iter().map(|row| row[1..].to_vec()).collect();
        let mut items = vec![Scalar::one(), corner];
        let mut v = c;
        for k in 0..size - 1 {
            items.push(dot(&r, &v));
            if k + 2 < size {
                v = sub.iter().map(|row| dot(row, &v)).collect();
            }
        }
        let mut t = vec![vec![Scalar::zero(); size]; size + 1];
        for col in 0..size {
            for row in col..=size {
                t[row][col] = items[row - col].clone();
            }
        }
        transforms.push(t);
        a = sub;
    }
    let mut poly = vec![Scalar::one(), -&a[0][0]];
    for t in transforms.iter().rev() {
        poly = t.iter().map(|row| dot(row, &poly)).collect();
    }
    // poly holds coefficients from the highest degree down
    poly.reverse();
    Ok(UniPoly::new(poly))
}

fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter()
        .zip(b)
        .fold(Scalar::zero(), |acc, (x, y)| &acc + &(x * y))
}
