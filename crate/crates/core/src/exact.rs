//! Exact dense linear algebra over arbitrary-precision integers.
//!
//! Determinants use fraction-free (Bareiss) elimination so every
//! intermediate value stays an integer; rational results only appear at
//! back-substitution time.

use std::fmt;
use std::ops::{Index, IndexMut};

use num::{BigInt, BigRational, One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::Graph;

pub type RationalVector = Vec<BigRational>;

/// Above this dimension the adjugate is assembled from solve columns
/// (`det * M^-1`) instead of `n^2` minor determinants.
pub const ADJUGATE_MINOR_LIMIT: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix rows are not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("bad index list: {0}")]
    BadIndex(String),
}

/// Square matrix of big integers, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

impl Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;

    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        assert!(r < self.n && c < self.n, "index ({r}, {c}) out of range");
        &self.data[r * self.n + c]
    }
}

impl IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        assert!(r < self.n && c < self.n, "index ({r}, {c}) out of range");
        &mut self.data[r * self.n + c]
    }
}

impl IntegerMatrix {
    pub fn zeros(n: usize) -> Self {
        IntegerMatrix {
            n,
            data: vec![BigInt::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, BigInt::one())
    }

    pub fn scalar(n: usize, value: BigInt) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = value.clone();
        }
        m
    }

    /// Convenience constructor from small literal rows.
    ///
    /// Panics if the rows are not square; use [`IntegerMatrix::try_from_rows`]
    /// for untrusted input.
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        Self::try_from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
        .expect("literal matrix must be square")
    }

    pub fn try_from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != n {
                return Err(MatrixError::NotSquare {
                    row,
                    len: r.len(),
                    n,
                });
            }
            data.extend(r);
        }
        Ok(IntegerMatrix { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.n..(r + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        (0..self.n).map(move |r| self.row(r))
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.rows().map(<[BigInt]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|r| (r + 1..self.n).all(|c| self[(r, c)] == self[(c, r)]))
    }

    pub fn row_sums(&self) -> Vec<BigInt> {
        self.rows().map(|r| r.iter().sum()).collect()
    }

    /// Returns `self + diag(diag)`.
    pub fn add_diagonal(&self, diag: &[BigInt]) -> Result<Self, MatrixError> {
        if diag.len() != self.n {
            return Err(MatrixError::DimensionMismatch {
                expected: self.n,
                got: diag.len(),
            });
        }
        let mut m = self.clone();
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] += d;
        }
        Ok(m)
    }

    /// Returns `self + e_i e_i^T` for 0-based `i`.
    pub fn add_unit_diagonal(&self, i: usize) -> Self {
        let mut m = self.clone();
        m[(i, i)] += 1;
        m
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        if other.n != self.n {
            return Err(MatrixError::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let n = self.n;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out[(r, c)] = (0..n).map(|k| &self[(r, k)] * &other[(k, c)]).sum();
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, MatrixError> {
        if v.len() != self.n {
            return Err(MatrixError::DimensionMismatch {
                expected: self.n,
                got: v.len(),
            });
        }
        Ok(self
            .rows()
            .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Matrix with 0-based row `row` and column `col` deleted.
    pub fn minor_matrix(&self, row: usize, col: usize) -> Self {
        let n = self.n;
        assert!(row < n && col < n, "minor index out of range");
        let mut data = Vec::with_capacity((n - 1) * (n - 1));
        for r in (0..n).filter(|&r| r != row) {
            for c in (0..n).filter(|&c| c != col) {
                data.push(self[(r, c)].clone());
            }
        }
        IntegerMatrix { n: n - 1, data }
    }

    /// Copy of the matrix with 0-based row `row` replaced by `values`.
    pub fn with_row(&self, row: usize, values: &[BigInt]) -> Result<Self, MatrixError> {
        if values.len() != self.n {
            return Err(MatrixError::DimensionMismatch {
                expected: self.n,
                got: values.len(),
            });
        }
        let mut m = self.clone();
        m.data[row * self.n..(row + 1) * self.n].clone_from_slice(values);
        Ok(m)
    }

    /// Rows and columns restricted to `keep` (0-based, strictly ascending).
    pub fn principal_submatrix(&self, keep: &[usize]) -> Result<Self, MatrixError> {
        if let Some(&bad) = keep.iter().find(|&&i| i >= self.n) {
            return Err(MatrixError::BadIndex(format!(
                "index {bad} out of range for dimension {}",
                self.n
            )));
        }
        if keep.windows(2).any(|w| w[0] >= w[1]) {
            return Err(MatrixError::BadIndex(
                "indices must be distinct and ascending".into(),
            ));
        }
        let mut data = Vec::with_capacity(keep.len() * keep.len());
        for &r in keep {
            for &c in keep {
                data.push(self[(r, c)].clone());
            }
        }
        Ok(IntegerMatrix {
            n: keep.len(),
            data,
        })
    }

    pub fn determinant(&self) -> BigInt {
        determinant_int(self)
    }
}

/// Fraction-free Gaussian elimination on an `n x width` row-major block
/// whose leading `n x n` part is the system matrix. Row swaps are applied
/// to whole rows. Returns the permutation sign, or `None` when a pivot
/// column is entirely zero (singular leading block).
fn bareiss_in_place(rows: &mut [Vec<BigInt>], n: usize) -> Option<i8> {
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    for k in 0..n {
        if rows[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !rows[r][k].is_zero())?;
            rows.swap(k, swap);
            sign = -sign;
        }
        let width = rows[k].len();
        let (top, bottom) = rows.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            let factor = row[k].clone();
            for j in k + 1..width {
                let v = &row[j] * &pivot_row[k] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = pivot_row[k].clone();
    }
    Some(sign)
}

/// Exact determinant by Bareiss elimination. The empty matrix has determinant 1.
pub fn determinant_int(m: &IntegerMatrix) -> BigInt {
    let n = m.dim();
    if n == 0 {
        return BigInt::one();
    }
    let mut rows = m.to_rows();
    match bareiss_in_place(&mut rows, n) {
        Some(sign) => {
            let d = rows[n - 1][n - 1].clone();
            if sign < 0 {
                -d
            } else {
                d
            }
        }
        None => BigInt::zero(),
    }
}

/// Transpose of the cofactor matrix, so that `M * adj(M) = det(M) * I`.
pub fn adjugate_int(m: &IntegerMatrix) -> IntegerMatrix {
    let n = m.dim();
    match n {
        0 => return IntegerMatrix::zeros(0),
        1 => return IntegerMatrix::identity(1),
        _ => {}
    }
    if n > ADJUGATE_MINOR_LIMIT {
        if let Some(adj) = adjugate_by_solve(m) {
            return adj;
        }
    }
    let cofactors: Vec<BigInt> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            // adj[r][c] = (-1)^(r+c) det(minor(c, r))
            let (r, c) = (idx / n, idx % n);
            let d = determinant_int(&m.minor_matrix(c, r));
            if (r + c) % 2 == 1 {
                -d
            } else {
                d
            }
        })
        .collect();
    IntegerMatrix { n, data: cofactors }
}

fn adjugate_by_solve(m: &IntegerMatrix) -> Option<IntegerMatrix> {
    let n = m.dim();
    let det = determinant_int(m);
    if det.is_zero() {
        return None;
    }
    let identity: Vec<Vec<BigInt>> = IntegerMatrix::identity(n).to_rows();
    let cols = solve_rational_multi(m, &identity).ok()?;
    let mut adj = IntegerMatrix::zeros(n);
    for (c, col) in cols.iter().enumerate() {
        for (r, x) in col.iter().enumerate() {
            let scaled = x * BigRational::from_integer(det.clone());
            debug_assert!(scaled.is_integer());
            adj[(r, c)] = scaled.to_integer();
        }
    }
    Some(adj)
}

/// `1^T adj(M) e_col`, i.e. the sum of the cofactors along row `col`,
/// evaluated as the determinant of `M` with that row replaced by ones.
pub fn adjugate_column_sum(m: &IntegerMatrix, col: usize) -> BigInt {
    let ones = vec![BigInt::one(); m.dim()];
    determinant_int(&m.with_row(col, &ones).expect("row length matches"))
}

/// Solves `M x = b` exactly.
pub fn solve_rational(m: &IntegerMatrix, b: &[BigInt]) -> Result<RationalVector, MatrixError> {
    let mut cols = solve_rational_multi(m, std::slice::from_ref(&b.to_vec()))?;
    Ok(cols.pop().expect("one right-hand side"))
}

/// Solves `M X = B` for several right-hand sides at once; `rhs[c]` is the
/// `c`-th column of `B` and the result holds the matching solution columns.
pub fn solve_rational_multi(
    m: &IntegerMatrix,
    rhs: &[Vec<BigInt>],
) -> Result<Vec<RationalVector>, MatrixError> {
    let n = m.dim();
    if let Some(bad) = rhs.iter().find(|b| b.len() != n) {
        return Err(MatrixError::DimensionMismatch {
            expected: n,
            got: bad.len(),
        });
    }
    let mut rows: Vec<Vec<BigInt>> = (0..n)
        .map(|r| {
            let mut row = m.row(r).to_vec();
            row.extend(rhs.iter().map(|b| b[r].clone()));
            row
        })
        .collect();
    bareiss_in_place(&mut rows, n).ok_or(MatrixError::Singular)?;
    if n > 0 && rows[n - 1][n - 1].is_zero() {
        return Err(MatrixError::Singular);
    }

    let solutions = (0..rhs.len())
        .map(|c| {
            let mut x = vec![BigRational::zero(); n];
            for i in (0..n).rev() {
                let mut acc = BigRational::from_integer(rows[i][n + c].clone());
                for j in i + 1..n {
                    acc -= &x[j] * BigRational::from_integer(rows[i][j].clone());
                }
                x[i] = acc / BigRational::from_integer(rows[i][i].clone());
            }
            x
        })
        .collect();
    Ok(solutions)
}

/// Exact inverse, returned as rows of rationals.
pub fn inverse_rational(m: &IntegerMatrix) -> Result<Vec<RationalVector>, MatrixError> {
    let n = m.dim();
    let cols = solve_rational_multi(m, &IntegerMatrix::identity(n).to_rows())?;
    Ok((0..n)
        .map(|r| cols.iter().map(|col| col[r].clone()).collect())
        .collect())
}

/// Determinants of the leading `1x1, 2x2, ..., nxn` blocks.
pub fn leading_principal_minors(m: &IntegerMatrix) -> Vec<BigInt> {
    (1..=m.dim())
        .map(|k| {
            let keep: Vec<usize> = (0..k).collect();
            determinant_int(
                &m.principal_submatrix(&keep)
                    .expect("prefix indices are valid"),
            )
        })
        .collect()
}

/// Sylvester's criterion on a symmetric matrix, evaluated exactly.
pub fn is_positive_definite(m: &IntegerMatrix) -> bool {
    m.is_symmetric() && leading_principal_minors(m).iter().all(Signed::is_positive)
}

/// Number of spanning trees: the determinant of the Laplacian with its
/// first row and column removed. Zero for disconnected graphs.
pub fn spanning_tree_count(g: &Graph) -> BigInt {
    determinant_int(&g.laplacian().minor_matrix(0, 0))
}
