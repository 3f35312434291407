//! Dense quaternion matrices.

use std::fmt;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{QError, Result};
use crate::quat::{ComponentFmt, Quaternion};
use crate::scalar::{Real, DEFAULT_TOL};

/// An `m × n` quaternion matrix stored row-major.
///
/// The conjugate transpose and the rank are computed on first use and cached.
pub struct QMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion<T>>,
    adjoint: OnceLock<Box<QMatrix<T>>>,
    rank: OnceLock<usize>,
}

impl<T: Real> Clone for QMatrix<T> {
    fn clone(&self) -> Self {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.clone(),
            adjoint: self.adjoint.clone(),
            rank: self.rank.clone(),
        }
    }
}

impl<T: Real> PartialEq for QMatrix<T> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl<T: Real> fmt::Debug for QMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QMatrix")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("data", &self.data)
            .finish()
    }
}

impl<T: Real> QMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<Quaternion<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(QError::dims(
                "QMatrix::new",
                format!("{} entries for a {rows}x{cols} matrix", data.len()),
            ));
        }
        Ok(Self::from_parts(rows, cols, data))
    }

    fn from_parts(rows: usize, cols: usize, data: Vec<Quaternion<T>>) -> Self {
        QMatrix {
            rows,
            cols,
            data,
            adjoint: OnceLock::new(),
            rank: OnceLock::new(),
        }
    }

    pub fn from_rows(rows: Vec<Vec<Quaternion<T>>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(QError::dims("QMatrix::from_rows", "ragged rows"));
        }
        Ok(Self::from_parts(m, n, rows.into_iter().flatten().collect()))
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Quaternion<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_parts(rows, cols, data)
    }

    /// Builds a matrix from integer component quadruples.
    pub fn from_int_rows(rows: &[Vec<[i64; 4]>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|c| Quaternion::from_ints(c[0], c[1], c[2], c[3])).collect())
                .collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| Quaternion::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Quaternion::one() } else { Quaternion::zero() })
    }

    pub fn diag_real(values: &[T]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Quaternion::real(values[i].clone())
            } else {
                Quaternion::zero()
            }
        })
    }

    pub fn column_vector(entries: Vec<Quaternion<T>>) -> Self {
        let m = entries.len();
        Self::from_parts(m, 1, entries)
    }

    pub fn row_vector(entries: Vec<Quaternion<T>>) -> Self {
        let n = entries.len();
        Self::from_parts(1, n, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Quaternion<T>] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Quaternion<T> {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, q: Quaternion<T>) {
        self.data[i * self.cols + j] = q;
        self.adjoint = OnceLock::new();
        self.rank = OnceLock::new();
    }

    pub fn row(&self, i: usize) -> Vec<Quaternion<T>> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Quaternion<T>> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn into_entries(self) -> Vec<Quaternion<T>> {
        self.data
    }

    /// `C = A·B` with products taken in that order.
    pub fn matmul(&self, rhs: &QMatrix<T>) -> Result<QMatrix<T>> {
        if self.cols != rhs.rows {
            return Err(QError::dims(
                "matmul",
                format!("{}x{} times {}x{}", self.rows, self.cols, rhs.rows, rhs.cols),
            ));
        }
        Ok(QMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = Quaternion::zero();
            for k in 0..self.cols {
                acc += self.get(i, k) * rhs.get(k, j);
            }
            acc
        }))
    }

    /// Product of a chain of matrices, left to right.
    pub fn chain(factors: &[&QMatrix<T>]) -> Result<QMatrix<T>> {
        let (first, rest) = factors
            .split_first()
            .ok_or_else(|| QError::dims("chain", "empty product"))?;
        rest.iter().try_fold((*first).clone(), |acc, f| acc.matmul(f))
    }

    pub fn add(&self, rhs: &QMatrix<T>) -> Result<QMatrix<T>> {
        self.zip_with(rhs, "add", |a, b| a + b)
    }

    pub fn sub(&self, rhs: &QMatrix<T>) -> Result<QMatrix<T>> {
        self.zip_with(rhs, "sub", |a, b| a - b)
    }

    fn zip_with(
        &self,
        rhs: &QMatrix<T>,
        op: &'static str,
        f: impl Fn(&Quaternion<T>, &Quaternion<T>) -> Quaternion<T>,
    ) -> Result<QMatrix<T>> {
        if self.shape() != rhs.shape() {
            return Err(QError::dims(
                op,
                format!("{}x{} vs {}x{}", self.rows, self.cols, rhs.rows, rhs.cols),
            ));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect();
        Ok(QMatrix::from_parts(self.rows, self.cols, data))
    }

    pub fn scale_real(&self, s: &T) -> QMatrix<T> {
        self.map_entries(|q| q.scale(s))
    }

    pub fn map_entries(&self, f: impl Fn(&Quaternion<T>) -> Quaternion<T>) -> QMatrix<T> {
        QMatrix::from_parts(self.rows, self.cols, self.data.iter().map(f).collect())
    }

    /// `(A*)_ij = conj(A_ji)`, cached.
    pub fn conj_transpose(&self) -> &QMatrix<T> {
        self.adjoint.get_or_init(|| {
            Box::new(QMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj()))
        })
    }

    pub fn transpose(&self) -> QMatrix<T> {
        QMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Largest entry norm `max |a_ij|`.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(Quaternion::norm).fold(0.0, f64::max)
    }

    /// Largest entry-wise distance to `other`.
    pub fn max_dist(&self, other: &QMatrix<T>) -> Result<f64> {
        Ok(self.sub(other)?.max_norm())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Quaternion::is_zero)
    }

    /// Hermitian test: exact on rationals; on floats `max|A - A*| <= tol (1 + max|A|)`.
    pub fn is_hermitian(&self, tol: f64) -> Result<bool> {
        if !self.is_square() {
            return Err(QError::dims("is_hermitian", format!("{}x{} is not square", self.rows, self.cols)));
        }
        let scale = 1.0 + self.max_norm();
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = self.get(i, j) - &self.get(j, i).conj();
                if !d.is_negligible(scale, tol) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Rank over the quaternion division ring, cached for the default tolerance.
    pub fn rank(&self) -> usize {
        *self.rank.get_or_init(|| self.rank_with_tol(DEFAULT_TOL))
    }

    /// Rank by Gaussian elimination with left-division pivoting. Pivots are the
    /// first nonzero entry on exact backends and the largest-norm entry on floats;
    /// float pivots below `tol · max|a_ij| · max(m, n)` count as zero.
    pub fn rank_with_tol(&self, tol: f64) -> usize {
        let mut work = self.data.clone();
        let (m, n) = (self.rows, self.cols);
        let scale = self.max_norm() * m.max(n) as f64;
        let mut rank = 0;
        for c in 0..n {
            if rank == m {
                break;
            }
            let Some(p) = pick_pivot(&work, n, rank, m, c, scale, tol) else {
                continue;
            };
            swap_rows(&mut work, n, rank, p);
            let pivot_inv = work[rank * n + c].inv().expect("pivot is nonzero");
            for r in rank + 1..m {
                if work[r * n + c].is_zero() {
                    continue;
                }
                let factor = &work[r * n + c] * &pivot_inv;
                for t in c..n {
                    let delta = &factor * &work[rank * n + t];
                    work[r * n + t] -= &delta;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Two-sided inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<QMatrix<T>> {
        self.inverse_with_tol(DEFAULT_TOL)
    }

    pub fn inverse_with_tol(&self, tol: f64) -> Result<QMatrix<T>> {
        if !self.is_square() {
            return Err(QError::dims("inverse", format!("{}x{} is not square", self.rows, self.cols)));
        }
        let n = self.rows;
        let w = 2 * n;
        let mut work = Vec::with_capacity(n * w);
        for i in 0..n {
            work.extend(self.row(i));
            work.extend((0..n).map(|j| if i == j { Quaternion::one() } else { Quaternion::zero() }));
        }
        let scale = self.max_norm() * n as f64;
        for c in 0..n {
            let p = pick_pivot(&work, w, c, n, c, scale, tol).ok_or(QError::SingularMatrix)?;
            swap_rows(&mut work, w, c, p);
            let pivot_inv = work[c * w + c].inv()?;
            for t in 0..w {
                work[c * w + t] = &pivot_inv * &work[c * w + t];
            }
            for r in 0..n {
                if r == c || work[r * w + c].is_zero() {
                    continue;
                }
                let factor = work[r * w + c].clone();
                for t in 0..w {
                    let delta = &factor * &work[c * w + t];
                    work[r * w + t] -= &delta;
                }
            }
        }
        Ok(QMatrix::from_fn(n, n, |i, j| work[i * w + n + j].clone()))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> QMatrix<T> {
        QMatrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Principal submatrix `A_α^α`.
    pub fn principal(&self, idx: &[usize]) -> QMatrix<T> {
        self.submatrix(idx, idx)
    }

    /// `A_{.j}(b)`: column `j` replaced by `b`.
    pub fn replace_col(&self, j: usize, b: &[Quaternion<T>]) -> Result<QMatrix<T>> {
        if j >= self.cols {
            return Err(QError::IndexOutOfRange { index: j, bound: self.cols });
        }
        if b.len() != self.rows {
            return Err(QError::dims("replace_col", format!("column of length {} for {} rows", b.len(), self.rows)));
        }
        let mut out = self.data.clone();
        for (i, q) in b.iter().enumerate() {
            out[i * self.cols + j] = q.clone();
        }
        Ok(QMatrix::from_parts(self.rows, self.cols, out))
    }

    /// `A_{i.}(b)`: row `i` replaced by `b`.
    pub fn replace_row(&self, i: usize, b: &[Quaternion<T>]) -> Result<QMatrix<T>> {
        if i >= self.rows {
            return Err(QError::IndexOutOfRange { index: i, bound: self.rows });
        }
        if b.len() != self.cols {
            return Err(QError::dims("replace_row", format!("row of length {} for {} columns", b.len(), self.cols)));
        }
        let mut out = self.data.clone();
        out[i * self.cols..(i + 1) * self.cols].clone_from_slice(b);
        Ok(QMatrix::from_parts(self.rows, self.cols, out))
    }

    pub fn to_f64(&self) -> QMatrix<f64> {
        QMatrix::from_parts(self.rows, self.cols, self.data.iter().map(Quaternion::to_f64).collect())
    }

    /// Left-multiplies `A` by a column vector's worth of entries: `A·b`.
    pub fn mul_col(&self, b: &[Quaternion<T>]) -> Result<Vec<Quaternion<T>>> {
        Ok(self.matmul(&QMatrix::column_vector(b.to_vec()))?.into_entries())
    }

    /// `b·A` for a row vector `b`.
    pub fn row_mul(b: &[Quaternion<T>], a: &QMatrix<T>) -> Result<Vec<Quaternion<T>>> {
        Ok(QMatrix::row_vector(b.to_vec()).matmul(a)?.into_entries())
    }
}

impl QMatrix<f64> {
    /// Converts a float matrix to another backend exactly (binary value of each float).
    pub fn lift<T: Real>(&self) -> Result<QMatrix<T>> {
        let data = self.data.iter().map(Quaternion::lift).collect::<Result<Vec<_>>>()?;
        Ok(QMatrix::from_parts(self.rows, self.cols, data))
    }

    /// `(A + A*) / 2`, used to remove rounding asymmetry before spectral work.
    pub fn hermitian_part(&self) -> QMatrix<f64> {
        let adj = self.conj_transpose();
        QMatrix::from_fn(self.rows, self.cols, |i, j| (self.get(i, j) + adj.get(i, j)).scale(&0.5))
    }
}

fn pick_pivot<T: Real>(
    work: &[Quaternion<T>],
    width: usize,
    from: usize,
    to: usize,
    c: usize,
    scale: f64,
    tol: f64,
) -> Option<usize> {
    if T::EXACT {
        return (from..to).find(|&r| !work[r * width + c].is_zero());
    }
    let (best, norm) = (from..to)
        .map(|r| (r, work[r * width + c].norm()))
        .fold((from, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    (norm > tol * scale && norm > 0.0).then_some(best)
}

fn swap_rows<T>(work: &mut [T], width: usize, a: usize, b: usize) {
    if a == b {
        return;
    }
    for t in 0..width {
        work.swap(a * width + t, b * width + t);
    }
}

impl<T: Real + ComponentFmt> fmt::Display for QMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(|q| q.to_string()).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            let line: Vec<String> = (0..self.cols)
                .map(|j| format!("{:>width$}", cells[i * self.cols + j]))
                .collect();
            writeln!(f, "[ {} ]", line.join("  "))?;
        }
        Ok(())
    }
}

/// The `2m × 2n` complex adjoint `[[A1, A2], [-conj(A2), conj(A1)]]` of `A = A1 + A2 j`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexBlockMatrix {
    pub quat_rows: usize,
    pub quat_cols: usize,
    pub data: DMatrix<Complex64>,
}

impl ComplexBlockMatrix {
    /// Wraps a complex matrix of even dimensions.
    pub fn from_complex(data: DMatrix<Complex64>) -> Result<Self> {
        if !data.nrows().is_multiple_of(2) || !data.ncols().is_multiple_of(2) {
            return Err(QError::dims("ComplexBlockMatrix", "odd dimensions"));
        }
        Ok(ComplexBlockMatrix {
            quat_rows: data.nrows() / 2,
            quat_cols: data.ncols() / 2,
            data,
        })
    }

    /// Largest deviation from the block symmetry that characterizes the image.
    pub fn block_defect(&self) -> f64 {
        let (m, n) = (self.quat_rows, self.quat_cols);
        let mut worst: f64 = 0.0;
        for i in 0..m {
            for j in 0..n {
                let a1 = self.data[(i, j)];
                let a2 = self.data[(i, n + j)];
                worst = worst.max((self.data[(m + i, j)] + a2.conj()).norm());
                worst = worst.max((self.data[(m + i, n + j)] - a1.conj()).norm());
            }
        }
        worst
    }
}

pub fn complex_embed<T: Real>(a: &QMatrix<T>) -> ComplexBlockMatrix {
    let (m, n) = a.shape();
    let mut c = DMatrix::<Complex64>::zeros(2 * m, 2 * n);
    for i in 0..m {
        for j in 0..n {
            let q = a.get(i, j).to_f64();
            let z1 = Complex64::new(q.a0, q.a1);
            let z2 = Complex64::new(q.a2, q.a3);
            c[(i, j)] = z1;
            c[(i, n + j)] = z2;
            c[(m + i, j)] = -z2.conj();
            c[(m + i, n + j)] = z1.conj();
        }
    }
    ComplexBlockMatrix {
        quat_rows: m,
        quat_cols: n,
        data: c,
    }
}

/// Inverse of [`complex_embed`]; the block symmetry must hold within `tol · (1 + max|c|)`.
pub fn complex_unembed(c: &ComplexBlockMatrix, tol: f64) -> Result<QMatrix<f64>> {
    let defect = c.block_defect();
    let scale = 1.0 + c.data.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if defect > tol * scale {
        return Err(QError::NotInImage { defect });
    }
    Ok(unembed_top(&c.data, c.quat_rows, c.quat_cols))
}

/// Reads `A1`, `A2` from the top block row without checking symmetry.
pub(crate) fn unembed_top(c: &DMatrix<Complex64>, m: usize, n: usize) -> QMatrix<f64> {
    QMatrix::from_fn(m, n, |i, j| {
        let z1 = c[(i, j)];
        let z2 = c[(i, n + j)];
        Quaternion::new(z1.re, z1.im, z2.re, z2.im)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type QR = Quaternion<Rational>;
    type MR = QMatrix<Rational>;

    fn q(a: i64, b: i64, c: i64, d: i64) -> QR {
        QR::from_ints(a, b, c, d)
    }

    #[test]
    fn matmul_units() {
        let a = MR::from_rows(vec![vec![QR::i()]]).unwrap();
        let b = MR::from_rows(vec![vec![QR::j()]]).unwrap();
        assert_eq!(a.matmul(&b).unwrap().get(0, 0), &QR::k());
        assert_eq!(b.matmul(&a).unwrap().get(0, 0), &-QR::k());
    }

    #[test]
    fn matmul_dimension_error() {
        let a = MR::zeros(2, 3);
        assert!(matches!(a.matmul(&a), Err(QError::DimensionMismatch { .. })));
    }

    #[test]
    fn identity_is_neutral() {
        let a = MR::from_int_rows(&[vec![[1, 2, 0, 0], [0, 0, 1, 1]], vec![[3, 0, 0, -1], [0, 1, 0, 0]]]).unwrap();
        assert_eq!(a.matmul(&MR::identity(2)).unwrap(), a);
        assert_eq!(MR::identity(2).matmul(&a).unwrap(), a);
    }

    #[test]
    fn conj_transpose_of_row() {
        let a = MR::from_rows(vec![vec![QR::i(), QR::j()]]).unwrap();
        let expected = MR::from_rows(vec![vec![-QR::i()], vec![-QR::j()]]).unwrap();
        assert_eq!(a.conj_transpose(), &expected);
        assert_eq!(MR::identity(3).conj_transpose(), &MR::identity(3));
    }

    #[test]
    fn set_invalidates_caches() {
        let mut a = MR::identity(2);
        assert_eq!(a.rank(), 2);
        let _ = a.conj_transpose();
        a.set(1, 1, QR::zero());
        assert_eq!(a.rank(), 1);
        a.set(0, 1, QR::i());
        assert_eq!(a.conj_transpose().get(1, 0), &-QR::i());
    }

    #[test]
    fn rank_basics() {
        assert_eq!(MR::zeros(3, 4).rank(), 0);
        assert_eq!(MR::identity(4).rank(), 4);
        // second row is i times the first: rank one over H
        let a = MR::from_rows(vec![vec![q(1, 0, 0, 0), QR::j()], vec![QR::i(), QR::k()]]).unwrap();
        assert_eq!(a.rank(), 1);
        // right multiple in the second column breaks left dependence of rows
        let b = MR::from_rows(vec![vec![q(1, 0, 0, 0), QR::j()], vec![QR::i(), -QR::k()]]).unwrap();
        assert_eq!(b.rank(), 2);
        assert_eq!(a.to_f64().rank(), 1);
        assert_eq!(b.to_f64().rank(), 2);
    }

    #[test]
    fn hermitian_test() {
        let not = MR::from_rows(vec![vec![QR::zero(), QR::i()], vec![QR::i(), QR::zero()]]).unwrap();
        assert!(!not.is_hermitian(0.0).unwrap());
        let yes = MR::from_rows(vec![vec![q(2, 0, 0, 0), QR::i()], vec![-QR::i(), q(2, 0, 0, 0)]]).unwrap();
        assert!(yes.is_hermitian(0.0).unwrap());
        assert!(MR::zeros(2, 3).is_hermitian(0.0).is_err());
        let mut f = yes.to_f64();
        f.set(0, 1, Quaternion::new(0.0, 1.0 + 1e-13, 0.0, 0.0));
        assert!(f.is_hermitian(DEFAULT_TOL).unwrap());
        f.set(0, 1, Quaternion::new(0.0, 1.0 + 1e-6, 0.0, 0.0));
        assert!(!f.is_hermitian(DEFAULT_TOL).unwrap());
    }

    #[test]
    fn inverse_exact() {
        let a = MR::from_int_rows(&[vec![[1, 1, 0, 0], [0, 0, 2, 0]], vec![[0, 0, 0, 1], [3, 0, 0, 0]]]).unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(a.matmul(&inv).unwrap(), MR::identity(2));
        assert_eq!(inv.matmul(&a).unwrap(), MR::identity(2));
        assert_eq!(MR::zeros(2, 2).inverse(), Err(QError::SingularMatrix));
    }

    #[test]
    fn embedding_of_units() {
        let j = complex_embed(&MR::from_rows(vec![vec![QR::j()]]).unwrap());
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(j.data, DMatrix::from_row_slice(2, 2, &[zero, one, -one, zero]));
        let i = complex_embed(&MR::from_rows(vec![vec![QR::i()]]).unwrap());
        let ii = Complex64::new(0.0, 1.0);
        assert_eq!(i.data, DMatrix::from_row_slice(2, 2, &[ii, zero, zero, -ii]));
    }

    #[test]
    fn unembed_rejects_broken_symmetry() {
        let mut c = complex_embed(&MR::identity(2));
        c.data[(2, 2)] = Complex64::new(5.0, 0.0);
        assert!(matches!(complex_unembed(&c, DEFAULT_TOL), Err(QError::NotInImage { .. })));
    }
}
