//! Independent checks: Penrose residuals, cross-method comparison, an
//! SVD oracle in the complex domain, and random test instances.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{QError, Result};
use crate::qmatrix::{complex_embed, complex_unembed, ComplexBlockMatrix, QMatrix};
use crate::quat::Quaternion;
use crate::scalar::Real;
use crate::weights::WeightPair;
use crate::wmp::{run_methods, Method, WmpReport};

/// Residuals of the four weighted Penrose axioms, as max-entry quaternion norms.
#[derive(Clone, Debug, PartialEq)]
pub struct PenroseResiduals {
    /// `‖AXA − A‖`
    pub r1: f64,
    /// `‖XAX − X‖`
    pub r2: f64,
    /// `‖(MAX)* − MAX‖`
    pub r3m: f64,
    /// `‖(NXA)* − NXA‖`
    pub r4n: f64,
    /// All four residual matrices are exactly zero.
    pub exact_zero: bool,
}

impl PenroseResiduals {
    pub fn max(&self) -> f64 {
        self.r1.max(self.r2).max(self.r3m).max(self.r4n)
    }
}

fn hermitian_defect<T: Real>(a: &QMatrix<T>) -> Result<QMatrix<T>> {
    a.conj_transpose().sub(a)
}

/// Evaluates the axioms for a candidate `X` (`n × m`).
pub fn penrose_residuals<T: Real>(a: &QMatrix<T>, w: &WeightPair<T>, x: &QMatrix<T>) -> Result<PenroseResiduals> {
    w.check_dims(a)?;
    if x.shape() != (a.cols(), a.rows()) {
        return Err(QError::dims(
            "penrose_residuals",
            format!("candidate is {}x{} for a {}x{} matrix", x.rows(), x.cols(), a.rows(), a.cols()),
        ));
    }
    let ax = a.matmul(x)?;
    let xa = x.matmul(a)?;
    let d1 = ax.matmul(a)?.sub(a)?;
    let d2 = x.matmul(&ax)?.sub(x)?;
    let d3 = hermitian_defect(&w.m().matmul(&ax)?)?;
    let d4 = hermitian_defect(&w.n().matmul(&xa)?)?;
    Ok(PenroseResiduals {
        r1: d1.max_norm(),
        r2: d2.max_norm(),
        r3m: d3.max_norm(),
        r4n: d4.max_norm(),
        exact_zero: [&d1, &d2, &d3, &d4].iter().all(|d| d.is_zero()),
    })
}

/// Runs at least two routes and reports residuals and their largest disagreement.
pub fn cross_check<T: Real>(a: &QMatrix<T>, w: &WeightPair<T>, methods: &[Method]) -> Result<WmpReport<T>> {
    if methods.len() < 2 {
        return Err(QError::NotApplicable(
            "cross_check".into(),
            "at least two methods are needed".into(),
        ));
    }
    run_methods(a, w, methods)
}

/// Unweighted Moore-Penrose inverse computed entirely on the complex adjoint
/// with an SVD, then mapped back. Shares no code with the determinantal routes.
pub fn brute_force_mp(a: &QMatrix<f64>) -> Result<QMatrix<f64>> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Ok(QMatrix::zeros(n, m));
    }
    let c: DMatrix<Complex64> = complex_embed(a).data;
    let svd = c.svd(true, true);
    let smax = svd.singular_values.iter().fold(0.0_f64, |acc, &s| acc.max(s));
    let eps = 1e-10 * smax.max(f64::MIN_POSITIVE) * (2 * m.max(n)) as f64;
    let pinv = svd.pseudo_inverse(eps).map_err(|_| QError::NonFinite)?;
    complex_unembed(&ComplexBlockMatrix::from_complex(pinv)?, 1e-8)
}

/// A test instance: a matrix together with a weight pair.
#[derive(Clone, Debug)]
pub struct Instance<T: Real> {
    pub a: QMatrix<T>,
    pub weights: WeightPair<T>,
}

/// Integer quaternion entries drawn uniformly from `[-bound, bound]`.
pub fn random_int_matrix<T: Real, R: Rng + ?Sized>(rng: &mut R, m: usize, n: usize, bound: i64) -> QMatrix<T> {
    QMatrix::from_fn(m, n, |_, _| {
        let mut c = || rng.gen_range(-bound..=bound);
        Quaternion::from_ints(c(), c(), c(), c())
    })
}

/// `B*B + I` with `B` a random integer matrix, which is Hermitian positive definite.
pub fn random_hpd<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, bound: i64) -> QMatrix<T> {
    let b: QMatrix<T> = random_int_matrix(rng, n, n, bound);
    b.conj_transpose()
        .matmul(&b)
        .and_then(|g| g.add(&QMatrix::identity(n)))
        .expect("square factors")
}

/// How the weights of a random instance are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightKind {
    Identity,
    /// Positive integer multiples of the identity, keeping `A♯A` Hermitian.
    Scalar,
    /// General `B*B + I`.
    General,
}

/// A random instance of shape `m × n`.
///
/// `rank` below `min(m, n)` builds `A` as a product of `m × rank` and
/// `rank × n` integer factors, which is rank deficient with high probability.
pub fn random_instance<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    n: usize,
    rank: Option<usize>,
    kind: WeightKind,
) -> Result<Instance<T>> {
    let a = match rank {
        Some(k) if k < m.min(n) => {
            if k == 0 {
                QMatrix::zeros(m, n)
            } else {
                let left: QMatrix<T> = random_int_matrix(rng, m, k, 2);
                left.matmul(&random_int_matrix(rng, k, n, 2))?
            }
        }
        _ => random_int_matrix(rng, m, n, 3),
    };
    let weights = match kind {
        WeightKind::Identity => WeightPair::identity(m, n),
        WeightKind::Scalar => {
            let sm = T::from_i64(rng.gen_range(1..=4));
            let sn = T::from_i64(rng.gen_range(1..=4));
            WeightPair::new(QMatrix::diag_real(&vec![sm; m]), QMatrix::diag_real(&vec![sn; n]))?
        }
        WeightKind::General => WeightPair::new(random_hpd(rng, m, 1), random_hpd(rng, n, 1))?,
    };
    Ok(Instance { a, weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_candidate_leaves_first_residual() {
        let a = QMatrix::<Rational>::from_int_rows(&[vec![[1, 2, 0, 0], [0, 0, 0, 3]]]).unwrap();
        let w = WeightPair::identity(1, 2);
        let res = penrose_residuals(&a, &w, &QMatrix::zeros(2, 1)).unwrap();
        assert!((res.r1 - a.max_norm()).abs() < 1e-12);
        assert!(!res.exact_zero);
        assert_eq!(res.r2, 0.0);
    }

    #[test]
    fn inverse_of_invertible_matrix_is_exact() {
        let a = QMatrix::<Rational>::from_int_rows(&[vec![[1, 1, 0, 0], [0, 0, 1, 0]], vec![[0, 0, 0, 2], [3, 0, 0, 0]]]).unwrap();
        let res = penrose_residuals(&a, &WeightPair::identity(2, 2), &a.inverse().unwrap()).unwrap();
        assert!(res.exact_zero);
    }

    #[test]
    fn brute_force_small_cases() {
        let d = QMatrix::diag_real(&[2.0, 0.0]);
        assert!(brute_force_mp(&d).unwrap().max_dist(&QMatrix::diag_real(&[0.5, 0.0])).unwrap() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a: QMatrix<f64> = random_int_matrix(&mut rng, 5, 3, 3);
        let x = brute_force_mp(&a).unwrap();
        let res = penrose_residuals(&a, &WeightPair::identity(5, 3), &x).unwrap();
        assert!(res.max() < 1e-10, "{res:?}");
    }

    #[test]
    fn generator_respects_rank_and_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let inst: Instance<Rational> = random_instance(&mut rng, 4, 3, Some(1), WeightKind::General).unwrap();
        assert!(inst.a.rank() <= 1);
        assert_eq!(inst.weights.orders(), (4, 3));
        assert!(cross_check(&inst.a, &inst.weights, &[Method::Wsvd]).is_err());
    }
}
