//! Hermitian positive definite weight pairs `(M, N)`.

use std::sync::OnceLock;

use crate::error::{QError, Result};
use crate::qmatrix::QMatrix;
use crate::scalar::{Real, DEFAULT_TOL};
use crate::spectral::{inv_sqrt_pd, is_positive_definite, sqrt_pd};

/// Float square roots of the weights, computed on first use.
#[derive(Clone, Debug)]
pub struct WeightRoots {
    pub m_sqrt: QMatrix<f64>,
    pub m_inv_sqrt: QMatrix<f64>,
    pub n_sqrt: QMatrix<f64>,
    pub n_inv_sqrt: QMatrix<f64>,
}

/// Weights `M` (order `m`) and `N` (order `n`) for an `m × n` matrix, with `N^{-1}` kept alongside.
#[derive(Debug)]
pub struct WeightPair<T: Real> {
    m: QMatrix<T>,
    n: QMatrix<T>,
    n_inv: QMatrix<T>,
    roots: OnceLock<Result<WeightRoots>>,
}

impl<T: Real> Clone for WeightPair<T> {
    fn clone(&self) -> Self {
        WeightPair {
            m: self.m.clone(),
            n: self.n.clone(),
            n_inv: self.n_inv.clone(),
            roots: self.roots.clone(),
        }
    }
}

/// `(A + A*) / 2`.
pub fn symmetrize<T: Real>(a: &QMatrix<T>) -> QMatrix<T> {
    let half = T::from_ratio(1, 2);
    let adj = a.conj_transpose();
    QMatrix::from_fn(a.rows(), a.cols(), |i, j| (a.get(i, j) + adj.get(i, j)).scale(&half))
}

fn validate<T: Real>(w: &QMatrix<T>, name: &str) -> Result<QMatrix<T>> {
    if !w.is_square() {
        return Err(QError::dims("WeightPair", format!("{name} is {}x{}", w.rows(), w.cols())));
    }
    if !w.is_hermitian(DEFAULT_TOL)? {
        return Err(QError::NotPositiveDefinite(format!("{name} is not Hermitian")));
    }
    // float inputs may carry rounding asymmetry; exact ones are left untouched
    let w = if T::EXACT { w.clone() } else { symmetrize(w) };
    if !is_positive_definite(&w)? {
        return Err(QError::NotPositiveDefinite(format!("{name} has a nonpositive leading principal minor")));
    }
    Ok(w)
}

impl<T: Real> WeightPair<T> {
    /// Validates `M` and `N` and inverts `N`.
    pub fn new(m: QMatrix<T>, n: QMatrix<T>) -> Result<Self> {
        let m = validate(&m, "M")?;
        let n = validate(&n, "N")?;
        let n_inv = n.inverse().map_err(|_| QError::NotPositiveDefinite("N is singular".into()))?;
        Ok(WeightPair {
            m,
            n,
            n_inv,
            roots: OnceLock::new(),
        })
    }

    /// Builds the pair from `M` and `N^{-1}`, which is what some data sets publish.
    pub fn from_n_inv(m: QMatrix<T>, n_inv: QMatrix<T>) -> Result<Self> {
        let m = validate(&m, "M")?;
        let n_inv = validate(&n_inv, "N^-1")?;
        let n = n_inv
            .inverse()
            .map_err(|_| QError::NotPositiveDefinite("N^-1 is singular".into()))?;
        let n = if T::EXACT { n } else { symmetrize(&n) };
        Ok(WeightPair {
            m,
            n,
            n_inv,
            roots: OnceLock::new(),
        })
    }

    /// `M = I_m`, `N = I_n`.
    pub fn identity(m: usize, n: usize) -> Self {
        WeightPair {
            m: QMatrix::identity(m),
            n: QMatrix::identity(n),
            n_inv: QMatrix::identity(n),
            roots: OnceLock::new(),
        }
    }

    pub fn m(&self) -> &QMatrix<T> {
        &self.m
    }

    pub fn n(&self) -> &QMatrix<T> {
        &self.n
    }

    pub fn n_inv(&self) -> &QMatrix<T> {
        &self.n_inv
    }

    /// Orders `(m, n)` of the weights.
    pub fn orders(&self) -> (usize, usize) {
        (self.m.rows(), self.n.rows())
    }

    /// Checks that the weights fit an `m × n` matrix.
    pub fn check_dims(&self, a: &QMatrix<T>) -> Result<()> {
        if self.orders() != a.shape() {
            let (wm, wn) = self.orders();
            return Err(QError::dims(
                "weights",
                format!("weights of orders {wm}, {wn} for a {}x{} matrix", a.rows(), a.cols()),
            ));
        }
        Ok(())
    }

    /// `M^{1/2}`, `M^{-1/2}`, `N^{1/2}`, `N^{-1/2}` on the float backend.
    pub fn roots(&self) -> Result<&WeightRoots> {
        self.roots
            .get_or_init(|| {
                let m = self.m.to_f64();
                let n = self.n.to_f64();
                Ok(WeightRoots {
                    m_sqrt: sqrt_pd(&m)?,
                    m_inv_sqrt: inv_sqrt_pd(&m)?,
                    n_sqrt: sqrt_pd(&n)?,
                    n_inv_sqrt: inv_sqrt_pd(&n)?,
                })
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn to_f64(&self) -> WeightPair<f64> {
        WeightPair {
            m: self.m.to_f64(),
            n: self.n.to_f64(),
            n_inv: self.n_inv.to_f64(),
            roots: self.roots.clone(),
        }
    }

    /// The pair `(N, M)`, suited to `A♯`: with it, `(A♯)♯ = A`.
    pub fn swapped(&self) -> Result<WeightPair<T>> {
        Ok(WeightPair {
            m: self.n.clone(),
            n: self.m.clone(),
            n_inv: self.m.inverse()?,
            roots: OnceLock::new(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::Quaternion;
    use crate::scalar::Rational;

    #[test]
    fn identity_weights() {
        let w = WeightPair::<Rational>::identity(3, 2);
        assert_eq!(w.orders(), (3, 2));
        assert_eq!(w.n_inv(), &QMatrix::identity(2));
        let r = w.roots().unwrap();
        assert!(r.m_sqrt.max_dist(&QMatrix::identity(3)).unwrap() < 1e-12);
    }

    #[test]
    fn rejects_indefinite_and_non_hermitian() {
        let bad = QMatrix::<Rational>::diag_real(&[Rational::from_i64(1), Rational::from_i64(-1)]);
        assert!(matches!(
            WeightPair::new(QMatrix::identity(1), bad),
            Err(QError::NotPositiveDefinite(_))
        ));
        let skew = QMatrix::<Rational>::from_rows(vec![
            vec![Quaternion::from_ints(2, 0, 0, 0), Quaternion::from_ints(0, 1, 0, 0)],
            vec![Quaternion::from_ints(0, 1, 0, 0), Quaternion::from_ints(2, 0, 0, 0)],
        ])
        .unwrap();
        assert!(WeightPair::new(skew, QMatrix::identity(1)).is_err());
    }

    #[test]
    fn n_inverse_is_exact() {
        let n = QMatrix::<Rational>::from_int_rows(&[vec![[2, 0, 0, 0], [0, 1, 0, 0]], vec![[0, -1, 0, 0], [2, 0, 0, 0]]]).unwrap();
        let w = WeightPair::new(QMatrix::identity(1), n.clone()).unwrap();
        assert_eq!(n.matmul(w.n_inv()).unwrap(), QMatrix::identity(2));
        let w2 = WeightPair::from_n_inv(QMatrix::identity(1), w.n_inv().clone()).unwrap();
        assert_eq!(w2.n(), &n);
    }
}
