//! Floating-point spectral routines through the complex adjoint embedding.
//!
//! A Hermitian quaternion matrix of order `n` embeds as a `2n × 2n` complex
//! Hermitian matrix whose eigenvalues come in equal pairs. A complex
//! eigenvector `[u; v]` maps back to the quaternion eigenvector
//! `u - conj(v)·j`; within an eigenspace the images are orthonormalized over
//! the quaternions with a pivoted Gram-Schmidt pass.

use num_complex::Complex64;

use crate::error::{QError, Result};
use crate::qmatrix::{complex_embed, QMatrix};
use crate::quat::Quaternion;
use crate::rcdet::{det_hermitian_tol, size_cap};
use crate::scalar::{parse_rational, Real, DEFAULT_TOL};
use crate::weights::WeightPair;

type QVec = Vec<Quaternion<f64>>;

/// Eigendecomposition `A = U diag(λ) U*` of a Hermitian quaternion matrix.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    /// Real right eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching right eigenvectors.
    pub vectors: QMatrix<f64>,
}

impl HermitianEig {
    /// `U f(D) U*`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> QMatrix<f64> {
        let n = self.values.len();
        let u = &self.vectors;
        QMatrix::from_fn(n, n, |i, j| {
            let mut acc = Quaternion::zero();
            for (t, &lam) in self.values.iter().enumerate() {
                acc += (u.get(i, t) * &u.get(j, t).conj()).scale(&f(lam));
            }
            acc
        })
    }
}

/// Counts of positive, negative and zero eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

fn dot(a: &[Quaternion<f64>], b: &[Quaternion<f64>]) -> Quaternion<f64> {
    a.iter().zip(b).map(|(x, y)| &x.conj() * y).sum()
}

fn vec_norm(a: &[Quaternion<f64>]) -> f64 {
    a.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
}

/// Removes the components of `x` along the orthonormal `basis` (twice, for stability).
fn project_out(x: &mut QVec, basis: &[QVec]) {
    for _ in 0..2 {
        for q in basis {
            let c = dot(q, x);
            for (xt, qt) in x.iter_mut().zip(q) {
                *xt -= &(qt * &c);
            }
        }
    }
}

/// Picks `count` quaternion-orthonormal vectors out of `candidates`, always
/// taking the candidate with the largest residual against what is already chosen.
fn pivoted_gram_schmidt(candidates: &[QVec], basis: &mut Vec<QVec>, count: usize) -> Result<()> {
    let mut used = vec![false; candidates.len()];
    for _ in 0..count {
        let mut best: Option<(usize, QVec, f64)> = None;
        for (idx, cand) in candidates.iter().enumerate() {
            if used[idx] {
                continue;
            }
            let mut y = cand.clone();
            project_out(&mut y, basis);
            let r = vec_norm(&y);
            if best.as_ref().is_none_or(|b| r > b.2) {
                best = Some((idx, y, r));
            }
        }
        let (idx, y, r) = best.ok_or(QError::EmbeddingPairingFailure { gap: f64::NAN })?;
        if r < 1e-6 {
            return Err(QError::EmbeddingPairingFailure { gap: r });
        }
        used[idx] = true;
        basis.push(y.iter().map(|q| q.scale(&(1.0 / r))).collect());
    }
    Ok(())
}

fn complex_to_quat(e: &[Complex64], n: usize) -> QVec {
    (0..n)
        .map(|t| {
            let u = e[t];
            let v = e[n + t];
            Quaternion::new(u.re, u.im, -v.re, v.im)
        })
        .collect()
}

fn columns_to_matrix(cols: &[QVec], rows: usize) -> QMatrix<f64> {
    QMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
}

/// Hermitian eigendecomposition.
pub fn eig_hermitian(a: &QMatrix<f64>, tol: f64) -> Result<HermitianEig> {
    if !a.is_hermitian(tol)? {
        return Err(QError::NotHermitian);
    }
    let n = a.rows();
    if n == 0 {
        return Ok(HermitianEig {
            values: vec![],
            vectors: QMatrix::zeros(0, 0),
        });
    }
    let c = complex_embed(&a.hermitian_part()).data;
    let eig = c.symmetric_eigen();
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));
    let sorted: Vec<f64> = order.iter().map(|&t| eig.eigenvalues[t]).collect();
    let spread = 1.0 + sorted.iter().fold(0.0_f64, |m, v| m.max(v.abs()));

    let mut values = Vec::with_capacity(n);
    for k in 0..n {
        let gap = (sorted[2 * k] - sorted[2 * k + 1]).abs();
        if gap > tol.max(1e-12) * spread {
            return Err(QError::EmbeddingPairingFailure { gap });
        }
        values.push(0.5 * (sorted[2 * k] + sorted[2 * k + 1]));
    }

    // eigenspace clusters: runs of embedded eigenvalues closer than the cluster tolerance
    let cluster_tol = 1e-8 * spread;
    let mut basis: Vec<QVec> = Vec::with_capacity(n);
    let mut start = 0;
    while start < 2 * n {
        let mut end = start + 1;
        while end < 2 * n && sorted[end - 1] - sorted[end] <= cluster_tol {
            end += 1;
        }
        if (end - start) % 2 != 0 {
            return Err(QError::EmbeddingPairingFailure {
                gap: sorted[end - 1] - sorted.get(end).copied().unwrap_or(f64::NAN),
            });
        }
        let candidates: Vec<QVec> = order[start..end]
            .iter()
            .map(|&t| {
                let col: Vec<Complex64> = eig.eigenvectors.column(t).iter().copied().collect();
                complex_to_quat(&col, n)
            })
            .collect();
        pivoted_gram_schmidt(&candidates, &mut basis, (end - start) / 2)?;
        start = end;
    }
    Ok(HermitianEig {
        values,
        vectors: columns_to_matrix(&basis, n),
    })
}

/// Inertia with eigenvalues `|λ| <= tol · max|λ|` counted as zero.
pub fn inertia(a: &QMatrix<f64>, tol: f64) -> Result<Inertia> {
    let eig = eig_hermitian(a, tol)?;
    let scale = eig.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut out = Inertia {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    for &v in &eig.values {
        if v.abs() <= tol * scale {
            out.zero += 1;
        } else if v > 0.0 {
            out.positive += 1;
        } else {
            out.negative += 1;
        }
    }
    Ok(out)
}

/// Positive definiteness by leading principal minors. Orders above the
/// enumeration cap fall back to the eigenvalue test.
pub fn is_positive_definite<T: Real>(a: &QMatrix<T>) -> Result<bool> {
    if !a.is_hermitian(DEFAULT_TOL)? {
        return Err(QError::NotHermitian);
    }
    if a.rows() > size_cap() {
        return is_positive_definite_spectral(&a.to_f64());
    }
    for k in 1..=a.rows() {
        let idx: Vec<usize> = (0..k).collect();
        let minor = det_hermitian_tol(&a.principal(&idx), DEFAULT_TOL)?;
        if minor <= T::zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Positive definiteness by the smallest eigenvalue.
pub fn is_positive_definite_spectral(a: &QMatrix<f64>) -> Result<bool> {
    let eig = eig_hermitian(a, DEFAULT_TOL)?;
    let scale = eig.values.first().map_or(0.0, |v| v.abs());
    Ok(eig.values.iter().all(|&v| v > DEFAULT_TOL * scale && v > 0.0))
}

fn pd_function(a: &QMatrix<f64>, f: impl Fn(f64) -> f64) -> Result<QMatrix<f64>> {
    let eig = eig_hermitian(a, DEFAULT_TOL)?;
    let max = eig.values.first().copied().unwrap_or(0.0);
    if let Some(&min) = eig.values.last() {
        if min <= DEFAULT_TOL * max.abs() || min <= 0.0 {
            return Err(QError::NotPositiveDefinite(format!("smallest eigenvalue {min:e}")));
        }
    }
    Ok(eig.reconstruct_with(f).hermitian_part())
}

/// The unique Hermitian positive definite square root.
pub fn sqrt_pd(a: &QMatrix<f64>) -> Result<QMatrix<f64>> {
    pd_function(a, f64::sqrt)
}

/// Inverse of [`sqrt_pd`].
pub fn inv_sqrt_pd(a: &QMatrix<f64>) -> Result<QMatrix<f64>> {
    pd_function(a, |v| 1.0 / v.sqrt())
}

/// Quaternion SVD `A = U Σ V*` with unitary `U`, `V`.
#[derive(Clone, Debug)]
pub struct Qsvd {
    pub u: QMatrix<f64>,
    /// `min(m, n)` singular values in descending order; entries past `rank` are zero.
    pub sigma: Vec<f64>,
    pub v: QMatrix<f64>,
    pub rank: usize,
}

impl Qsvd {
    /// The `m × n` rectangular diagonal factor.
    pub fn sigma_matrix(&self) -> QMatrix<f64> {
        let (m, n) = (self.u.rows(), self.v.rows());
        QMatrix::from_fn(m, n, |i, j| {
            if i == j && i < self.sigma.len() {
                Quaternion::real(self.sigma[i])
            } else {
                Quaternion::zero()
            }
        })
    }
}

/// Quaternion SVD, with the rank taken from Gaussian elimination on `A`.
pub fn qsvd(a: &QMatrix<f64>) -> Result<Qsvd> {
    qsvd_with_rank(a, a.rank())
}

/// Quaternion SVD with a known rank. Built from the eigendecomposition of the
/// smaller Gram matrix; the other factor is completed by Gram-Schmidt.
pub fn qsvd_with_rank(a: &QMatrix<f64>, rank: usize) -> Result<Qsvd> {
    let (m, n) = a.shape();
    if m < n {
        let t = qsvd_with_rank(a.conj_transpose(), rank)?;
        return Ok(Qsvd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
            rank: t.rank,
        });
    }
    let gram = a.conj_transpose().matmul(a)?;
    let eig = eig_hermitian(&gram.hermitian_part(), 1e-6)?;
    let rank = rank.min(n);
    let sigma: Vec<f64> = eig
        .values
        .iter()
        .enumerate()
        .map(|(t, &l)| if t < rank { l.max(0.0).sqrt() } else { 0.0 })
        .collect();
    if rank > 0 && sigma[rank - 1] <= 0.0 {
        return Err(QError::ZeroDenominator { rank });
    }
    let w = eig.vectors;
    let mut left: Vec<QVec> = Vec::with_capacity(m);
    for (t, s) in sigma.iter().enumerate().take(rank) {
        let col = a.mul_col(&w.col(t))?;
        let inv = 1.0 / s;
        let mut col: QVec = col.iter().map(|q| q.scale(&inv)).collect();
        project_out(&mut col, &left);
        let r = vec_norm(&col);
        left.push(col.iter().map(|q| q.scale(&(1.0 / r))).collect());
    }
    let standard: Vec<QVec> = (0..m)
        .map(|i| (0..m).map(|t| if t == i { Quaternion::one() } else { Quaternion::zero() }).collect())
        .collect();
    pivoted_gram_schmidt(&standard, &mut left, m - rank)?;
    Ok(Qsvd {
        u: columns_to_matrix(&left, m),
        sigma,
        v: w,
        rank,
    })
}

/// Weighted SVD `A = U D V*` with `U*MU = I`, `V*N^{-1}V = I`.
#[derive(Clone, Debug)]
pub struct WsvdResult {
    pub u: QMatrix<f64>,
    pub v: QMatrix<f64>,
    /// The positive weighted singular values `σ_1 ≥ … ≥ σ_r`.
    pub sigma: Vec<f64>,
    pub rank: usize,
}

impl WsvdResult {
    /// `D = diag(Σ, 0)`, of size `m × n`.
    pub fn d_matrix(&self) -> QMatrix<f64> {
        let (m, n) = (self.u.rows(), self.v.rows());
        QMatrix::from_fn(m, n, |i, j| {
            if i == j && i < self.rank {
                Quaternion::real(self.sigma[i])
            } else {
                Quaternion::zero()
            }
        })
    }

    /// `diag(Σ^{-1}, 0)`, of size `n × m`.
    pub fn d_pinv(&self) -> QMatrix<f64> {
        let (m, n) = (self.u.rows(), self.v.rows());
        QMatrix::from_fn(n, m, |i, j| {
            if i == j && i < self.rank {
                Quaternion::real(1.0 / self.sigma[i])
            } else {
                Quaternion::zero()
            }
        })
    }
}

/// Weighted SVD from the ordinary SVD of `M^{1/2} A N^{-1/2}`.
pub fn wsvd<T: Real>(a: &QMatrix<T>, w: &WeightPair<T>) -> Result<WsvdResult> {
    w.check_dims(a)?;
    let roots = w.roots()?;
    let af = a.to_f64();
    let tilde = QMatrix::chain(&[&roots.m_sqrt, &af, &roots.n_inv_sqrt])?;
    let svd = qsvd_with_rank(&tilde, a.rank())?;
    Ok(WsvdResult {
        u: roots.m_inv_sqrt.matmul(&svd.u)?,
        v: roots.n_sqrt.matmul(&svd.v)?,
        sigma: svd.sigma[..svd.rank].to_vec(),
        rank: svd.rank,
    })
}

/// `A†_{M,N} = N^{-1} V diag(Σ^{-1}, 0) U* M`.
pub fn wmp_wsvd<T: Real>(a: &QMatrix<T>, w: &WeightPair<T>) -> Result<QMatrix<f64>> {
    let ws = wsvd(a, w)?;
    let n_inv = w.n_inv().to_f64();
    let m = w.m().to_f64();
    QMatrix::chain(&[&n_inv, &ws.v, &ws.d_pinv(), ws.u.conj_transpose(), &m])
}

/// Which regularized product the limit route evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitSide {
    /// `(λI + A♯A)^{-1} A♯`
    Right,
    /// `A♯ (λI + AA♯)^{-1}`
    Left,
}

/// The default schedule `10^-1, …, 10^-8`.
pub fn default_schedule() -> Vec<f64> {
    (1..=8).map(|k| 10f64.powi(-k)).collect()
}

/// Iterates of the limit route and their distances to the WSVD inverse.
#[derive(Clone, Debug)]
pub struct LimitTrace<T: Real> {
    pub inverse: QMatrix<T>,
    pub lambdas: Vec<f64>,
    pub distances: Vec<f64>,
}

/// Evaluates the regularized product down `schedule` and returns the last iterate.
///
/// Fails with `NonConvergence` when the distance to the WSVD answer grows
/// anywhere across the final three values of `λ`. On float backends growth
/// below the rounding level of the regularized solve is tolerated.
pub fn wmp_limit<T: Real>(a: &QMatrix<T>, w: &WeightPair<T>, side: LimitSide, schedule: &[f64]) -> Result<LimitTrace<T>> {
    if schedule.is_empty() {
        return Err(QError::ScheduleEmpty);
    }
    if schedule.iter().any(|&l| l <= 0.0 || !l.is_finite()) || schedule.windows(2).any(|p| p[1] >= p[0]) {
        return Err(QError::BadSchedule);
    }
    w.check_dims(a)?;
    let reference = wmp_wsvd(a, w)?;
    let sharp = crate::wmp::weighted_adjoint(a, w)?;
    let (m, n) = a.shape();
    let gram = match side {
        LimitSide::Right => sharp.matmul(a)?,
        LimitSide::Left => a.matmul(&sharp)?,
    };
    let order = if side == LimitSide::Right { n } else { m };
    let ref_scale = 1.0 + reference.max_norm();
    let mut distances = Vec::with_capacity(schedule.len());
    let mut noise = Vec::with_capacity(schedule.len());
    let mut last = None;
    for &lambda in schedule {
        let lam = exact_decimal::<T>(lambda)?;
        let inv = shift(&gram, &lam, order).inverse_with_tol(0.0)?;
        let x = match side {
            LimitSide::Right => inv.matmul(&sharp)?,
            LimitSide::Left => sharp.matmul(&inv)?,
        };
        distances.push(x.to_f64().max_dist(&reference)?);
        // rounding in the regularized solve grows like the condition number ‖G‖/λ
        let cond = if T::EXACT { 0.0 } else { (lambda + gram.max_norm() * order as f64) / lambda };
        noise.push((1e-12 + 10.0 * order as f64 * f64::EPSILON * cond) * ref_scale);
        last = Some(x);
    }
    let k = distances.len();
    if k >= 3 && (k - 2..k).any(|t| distances[t] > distances[t - 1] + noise[t]) {
        return Err(QError::NonConvergence(distances));
    }
    Ok(LimitTrace {
        inverse: last.expect("schedule is nonempty"),
        lambdas: schedule.to_vec(),
        distances,
    })
}

/// `λ` as written in decimal, so `1e-8` becomes exactly `1/10^8` on rationals.
fn exact_decimal<T: Real>(lambda: f64) -> Result<T> {
    if T::EXACT {
        let r = parse_rational(&format!("{lambda:e}")).ok_or(QError::NonFinite)?;
        Ok(T::from_rational(&r))
    } else {
        T::from_f64(lambda).ok_or(QError::NonFinite)
    }
}

fn shift<T: Real>(a: &QMatrix<T>, lambda: &T, n: usize) -> QMatrix<T> {
    let mut out = a.clone();
    for t in 0..n {
        let d = a.get(t, t) + &Quaternion::real(lambda.clone());
        out.set(t, t, d);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qf(a: f64, b: f64, c: f64, d: f64) -> Quaternion<f64> {
        Quaternion::new(a, b, c, d)
    }

    fn check_eig(a: &QMatrix<f64>, eig: &HermitianEig) {
        let n = a.rows();
        let u = &eig.vectors;
        let utu = u.conj_transpose().matmul(u).unwrap();
        assert!(utu.max_dist(&QMatrix::identity(n)).unwrap() < 1e-10);
        for t in 0..n {
            let x = u.col(t);
            let ax = a.mul_col(&x).unwrap();
            for (l, r) in ax.iter().zip(&x) {
                assert!(l.dist(&r.scale(&eig.values[t])) < 1e-9);
            }
        }
        assert!(eig.reconstruct_with(|v| v).max_dist(a).unwrap() < 1e-9);
    }

    #[test]
    fn eigenvalues_of_small_matrices() {
        let e = eig_hermitian(&QMatrix::identity(2), DEFAULT_TOL).unwrap();
        assert_eq!(e.values.len(), 2);
        assert!((e.values[0] - 1.0).abs() < 1e-12 && (e.values[1] - 1.0).abs() < 1e-12);
        check_eig(&QMatrix::identity(2), &e);

        let d = QMatrix::diag_real(&[3.0, -1.0]);
        let e = eig_hermitian(&d, DEFAULT_TOL).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-12 && (e.values[1] + 1.0).abs() < 1e-12);

        let h = QMatrix::from_rows(vec![
            vec![qf(2.0, 0.0, 0.0, 0.0), qf(0.0, 1.0, 0.0, 0.0)],
            vec![qf(0.0, -1.0, 0.0, 0.0), qf(2.0, 0.0, 0.0, 0.0)],
        ])
        .unwrap();
        let e = eig_hermitian(&h, DEFAULT_TOL).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-12 && (e.values[1] - 1.0).abs() < 1e-12);
        check_eig(&h, &e);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let a = QMatrix::from_rows(vec![vec![qf(0.0, 0.0, 0.0, 0.0), qf(0.0, 1.0, 0.0, 0.0)], vec![qf(0.0, 1.0, 0.0, 0.0), qf(0.0, 0.0, 0.0, 0.0)]]).unwrap();
        assert_eq!(eig_hermitian(&a, DEFAULT_TOL).unwrap_err(), QError::NotHermitian);
    }

    #[test]
    fn repeated_quaternion_eigenvalues() {
        // j-coupled entries force genuinely quaternionic eigenvectors
        let h = QMatrix::from_rows(vec![
            vec![qf(2.0, 0.0, 0.0, 0.0), qf(0.0, 0.0, 1.0, 0.0), qf(0.0, 0.0, 0.0, 0.0)],
            vec![qf(0.0, 0.0, -1.0, 0.0), qf(2.0, 0.0, 0.0, 0.0), qf(0.0, 0.0, 0.0, 0.0)],
            vec![qf(0.0, 0.0, 0.0, 0.0), qf(0.0, 0.0, 0.0, 0.0), qf(3.0, 0.0, 0.0, 0.0)],
        ])
        .unwrap();
        let e = eig_hermitian(&h, DEFAULT_TOL).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-12);
        assert!((e.values[1] - 3.0).abs() < 1e-12);
        assert!((e.values[2] - 1.0).abs() < 1e-12);
        check_eig(&h, &e);
    }

    #[test]
    fn inertia_counts() {
        let i = inertia(&QMatrix::identity(3), DEFAULT_TOL).unwrap();
        assert_eq!((i.positive, i.negative, i.zero), (3, 0, 0));
        let z = inertia(&QMatrix::zeros(2, 2), DEFAULT_TOL).unwrap();
        assert_eq!((z.positive, z.negative, z.zero), (0, 0, 2));
        let d = inertia(&QMatrix::diag_real(&[1.0, -2.0, 0.0]), DEFAULT_TOL).unwrap();
        assert_eq!((d.positive, d.negative, d.zero), (1, 1, 1));
    }

    #[test]
    fn positive_definiteness() {
        assert!(is_positive_definite(&QMatrix::<f64>::identity(3)).unwrap());
        assert!(!is_positive_definite(&QMatrix::diag_real(&[1.0, -1.0])).unwrap());
        assert!(!is_positive_definite_spectral(&QMatrix::diag_real(&[1.0, -1.0])).unwrap());
    }

    #[test]
    fn square_roots() {
        assert!(sqrt_pd(&QMatrix::identity(3)).unwrap().max_dist(&QMatrix::identity(3)).unwrap() < 1e-12);
        let s = sqrt_pd(&QMatrix::diag_real(&[4.0, 9.0])).unwrap();
        assert!(s.max_dist(&QMatrix::diag_real(&[2.0, 3.0])).unwrap() < 1e-12);
        let is = inv_sqrt_pd(&QMatrix::diag_real(&[4.0, 9.0])).unwrap();
        assert!(is.max_dist(&QMatrix::diag_real(&[0.5, 1.0 / 3.0])).unwrap() < 1e-12);
        assert!(matches!(sqrt_pd(&QMatrix::diag_real(&[1.0, -1.0])), Err(QError::NotPositiveDefinite(_))));
    }

    #[test]
    fn svd_of_diagonal_and_zero() {
        let s = qsvd(&QMatrix::diag_real(&[3.0, 1.0])).unwrap();
        assert!((s.sigma[0] - 3.0).abs() < 1e-12 && (s.sigma[1] - 1.0).abs() < 1e-12);
        let z = qsvd(&QMatrix::zeros(2, 3)).unwrap();
        assert_eq!(z.rank, 0);
        assert!(z.sigma.iter().all(|&v| v == 0.0));
        let recon = QMatrix::chain(&[&z.u, &z.sigma_matrix(), z.v.conj_transpose()]).unwrap();
        assert!(recon.is_zero());
    }

    #[test]
    fn limit_schedule_validation() {
        let a = QMatrix::<f64>::identity(2);
        let w = WeightPair::identity(2, 2);
        assert_eq!(wmp_limit(&a, &w, LimitSide::Right, &[]).unwrap_err(), QError::ScheduleEmpty);
        assert_eq!(wmp_limit(&a, &w, LimitSide::Right, &[0.1, 0.2]).unwrap_err(), QError::BadSchedule);
        assert_eq!(wmp_limit(&a, &w, LimitSide::Right, &[0.1, -0.2]).unwrap_err(), QError::BadSchedule);
    }

    #[test]
    fn limit_on_invertible_matrix() {
        let a = QMatrix::from_rows(vec![
            vec![qf(2.0, 1.0, 0.0, 0.0), qf(0.0, 0.0, 1.0, 0.0)],
            vec![qf(0.0, 0.0, 0.0, 1.0), qf(3.0, 0.0, 0.0, 0.0)],
        ])
        .unwrap();
        let w = WeightPair::identity(2, 2);
        let inv = a.inverse().unwrap();
        for side in [LimitSide::Right, LimitSide::Left] {
            let t = wmp_limit(&a, &w, side, &default_schedule()).unwrap();
            assert!(t.inverse.max_dist(&inv).unwrap() < 1e-7);
        }
    }
}
