//! Dense linear algebra over the quaternions.
//!
//! Matrices act on column vectors from the left; scalars multiply entries
//! from whichever side the formula being implemented writes them. Nothing in
//! here commutes two quaternion factors silently.

mod embed;
mod ldl;
mod sylvester;

use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::Quaternion;

pub use embed::{complex_embed, hermitian_eigenvalues, CMatrix};
pub use ldl::{default_psd_tol, ldl_psd, pivoted_rank_indices, PsdReport};
pub use sylvester::{sylvester_series, sylvester_unit};

/// A column vector of quaternions.
pub type QVector = Vec<Quaternion>;

/// Row-major dense quaternion matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Quaternion::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Quaternion::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        QMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Quaternion>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn diagonal(d: &[Quaternion]) -> Self {
        let mut m = QMatrix::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn column(v: &[Quaternion]) -> Self {
        QMatrix { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Quaternion] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> QVector {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Quaternion>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        QMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &QMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Quaternion]) -> Result<QVector> {
        if self.cols != v.len() {
            return Err(Error::Dimension(format!("{} columns, vector of {}", self.cols, v.len())));
        }
        Ok((0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(&a, &x)| a * x).sum()).collect())
    }

    pub fn add(&self, other: &QMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &QMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &QMatrix, f: impl Fn(Quaternion, Quaternion) -> Quaternion) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("shape mismatch".into()));
        }
        Ok(QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|q| q.abs()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|q| q.is_finite())
    }

    /// Principal submatrix on `idx` (rows and columns in that order).
    pub fn principal(&self, idx: &[usize]) -> Self {
        QMatrix::from_fn(idx.len(), idx.len(), |i, j| self[(idx[i], idx[j])])
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        QMatrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.data
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Quaternion;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Quaternion {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Quaternion {
        &mut self.data[i * self.cols + j]
    }
}

impl std::fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// A square matrix equal to its adjoint (within `1e-12·scale`), with the
/// diagonal stored exactly real.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct HermitianQMatrix(QMatrix);

impl HermitianQMatrix {
    pub fn new(m: QMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Domain(format!("{}x{} matrix is not square", m.rows, m.cols)));
        }
        if !m.is_finite() {
            return Err(Error::Domain("non-finite entry".into()));
        }
        let tol = 1e-12 * (1.0 + m.max_abs());
        let n = m.rows;
        for i in 0..n {
            for j in i..n {
                let d = m[(i, j)] - m[(j, i)].conj();
                if d.abs() > tol {
                    return Err(Error::Domain(format!("not Hermitian at ({i},{j}): defect {}", d.abs())));
                }
            }
        }
        Ok(HermitianQMatrix::symmetrize(m))
    }

    /// Averages `m` with its adjoint; no check.
    pub fn symmetrize(mut m: QMatrix) -> Self {
        let n = m.rows;
        for i in 0..n {
            m[(i, i)] = Quaternion::real(m[(i, i)].re());
            for j in i + 1..n {
                let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                m[(i, j)] = avg;
                m[(j, i)] = avg.conj();
            }
        }
        HermitianQMatrix(m)
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.0
    }

    pub fn into_inner(self) -> QMatrix {
        self.0
    }

    pub fn principal(&self, idx: &[usize]) -> Self {
        HermitianQMatrix(self.0.principal(idx))
    }

    /// Hermitian form `v* A v` (real).
    pub fn quadratic_form(&self, v: &[Quaternion]) -> Result<f64> {
        let av = self.0.mul_vec(v)?;
        Ok(v.iter().zip(&av).map(|(&x, &y)| x.conj() * y).sum::<Quaternion>().re())
    }
}

impl Index<(usize, usize)> for HermitianQMatrix {
    type Output = Quaternion;
    fn index(&self, idx: (usize, usize)) -> &Quaternion {
        &self.0[idx]
    }
}

/// Inverse by Gauss-Jordan elimination with partial pivoting. Row operations
/// multiply rows on the left, so the result is a left (hence two-sided)
/// inverse.
pub fn qmat_inverse(a: &QMatrix) -> Result<QMatrix> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("{}x{} matrix has no inverse", a.rows, a.cols)));
    }
    let n = a.rows;
    let mut m = a.clone();
    let mut inv = QMatrix::identity(n);
    let singular_tol = f64::EPSILON * (n.max(1) as f64) * a.max_abs();
    for c in 0..n {
        let (piv_row, piv_abs) =
            (c..n).map(|r| (r, m[(r, c)].abs())).fold((c, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if piv_abs <= singular_tol || piv_abs == 0.0 {
            return Err(Error::Singular { index: c });
        }
        if piv_row != c {
            for j in 0..n {
                let (x, y) = (m[(c, j)], m[(piv_row, j)]);
                m[(c, j)] = y;
                m[(piv_row, j)] = x;
                let (x, y) = (inv[(c, j)], inv[(piv_row, j)]);
                inv[(c, j)] = y;
                inv[(piv_row, j)] = x;
            }
        }
        let pinv = m[(c, c)].inv_unchecked();
        for j in 0..n {
            m[(c, j)] = pinv * m[(c, j)];
            inv[(c, j)] = pinv * inv[(c, j)];
        }
        for r in 0..n {
            if r == c {
                continue;
            }
            let f = m[(r, c)];
            if f.is_zero() {
                continue;
            }
            for j in 0..n {
                let (mc, ic) = (m[(c, j)], inv[(c, j)]);
                m[(r, j)] -= f * mc;
                inv[(r, j)] -= f * ic;
            }
        }
    }
    Ok(inv)
}
