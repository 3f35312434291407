//! Cramer-type rules for the weighted Moore-Penrose solutions of `Ax = b`
//! and `xA = b`.
//!
//! Each rule reuses the bordered principal-minor sums from [`crate::rcdet`].

use crate::error::{QError, Result};
use crate::qmatrix::QMatrix;
use crate::quat::Quaternion;
use crate::rcdet::{bordered_minor_sum_col, bordered_minor_sum_row, principal_minor_sum};
use crate::scalar::Real;
use crate::weights::WeightPair;
use crate::wmp::{sharp_products, SHARP_TOL};

/// `Ax = b` with `A` of size `m × n` and `b` of length `m`.
#[derive(Clone, Debug)]
pub struct RightSystem<T: Real> {
    pub a: QMatrix<T>,
    pub b: Vec<Quaternion<T>>,
    pub weights: WeightPair<T>,
}

/// `xA = b` with `A` of size `m × n` and `b` of length `n`.
#[derive(Clone, Debug)]
pub struct LeftSystem<T: Real> {
    pub a: QMatrix<T>,
    pub b: Vec<Quaternion<T>>,
    pub weights: WeightPair<T>,
}

/// Which rule produced a solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// `A♯A` (right systems) or `AA♯` (left systems) is Hermitian.
    Hermitian,
    /// Full column rank (right) or full row rank (left), without the Hermitian property.
    FullRank,
    /// Rank deficient without the Hermitian property; uses float weight roots.
    General,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution<T: Real> {
    pub x: Vec<Quaternion<T>>,
    pub rule: Rule,
}

fn denominator<T: Real>(g: &QMatrix<T>, r: usize) -> Result<T> {
    let d = principal_minor_sum(g, r)?;
    let scale = (1.0 + g.max_norm()).powi(r as i32);
    if d.is_negligible(scale, 1e-14) || d < T::zero() {
        return Err(QError::ZeroDenominator { rank: r });
    }
    Ok(d)
}

/// `x_i = Σ_{β ∋ i} cdet_i((G_{.i}(f))_β^β) / d_r(G)` for every `i`.
fn col_rule<T: Real>(g: &QMatrix<T>, f: &[Quaternion<T>], r: usize) -> Result<Vec<Quaternion<T>>> {
    let d = denominator(g, r)?;
    (0..g.rows()).map(|i| bordered_minor_sum_col(g, f, i, r)?.div_real(&d)).collect()
}

/// `x_j = Σ_{α ∋ j} rdet_j((H_{j.}(g))_α^α) / d_r(H)` for every `j`.
fn row_rule<T: Real>(h: &QMatrix<T>, g: &[Quaternion<T>], r: usize) -> Result<Vec<Quaternion<T>>> {
    let d = denominator(h, r)?;
    (0..h.rows()).map(|j| bordered_minor_sum_row(h, g, j, r)?.div_real(&d)).collect()
}

fn lift_vec<T: Real>(v: Vec<Quaternion<f64>>) -> Result<Vec<Quaternion<T>>> {
    v.iter().map(Quaternion::lift).collect()
}

/// The solution `A†_{M,N} b` of a right system.
pub fn solve_right<T: Real>(sys: &RightSystem<T>) -> Result<Solution<T>> {
    let RightSystem { a, b, weights: w } = sys;
    w.check_dims(a)?;
    let (m, n) = a.shape();
    if b.len() != m {
        return Err(QError::dims("solve_right", format!("right-hand side of length {} for {m} rows", b.len())));
    }
    let r = a.rank();
    let (sharp, left, _) = sharp_products(a, w)?;
    if left.is_hermitian(SHARP_TOL)? {
        let x = if r == 0 { vec![Quaternion::zero(); n] } else { col_rule(&left, &sharp.mul_col(b)?, r)? };
        return Ok(Solution { x, rule: Rule::Hermitian });
    }
    let adj_m = a.conj_transpose().matmul(w.m())?;
    if r == n {
        let k = adj_m.matmul(a)?;
        let x = col_rule(&k, &adj_m.mul_col(b)?, r)?;
        return Ok(Solution { x, rule: Rule::FullRank });
    }
    let roots = w.roots()?;
    let g_rhs = roots.n_inv_sqrt.matmul(&adj_m.to_f64())?;
    let g = g_rhs.matmul(&a.to_f64())?.matmul(&roots.n_inv_sqrt)?.hermitian_part();
    let bf: Vec<Quaternion<f64>> = b.iter().map(Quaternion::to_f64).collect();
    let y = col_rule(&g, &g_rhs.mul_col(&bf)?, r)?;
    Ok(Solution {
        x: lift_vec(roots.n_inv_sqrt.mul_col(&y)?)?,
        rule: Rule::General,
    })
}

/// The solution `b A†_{M,N}` of a left system.
pub fn solve_left<T: Real>(sys: &LeftSystem<T>) -> Result<Solution<T>> {
    let LeftSystem { a, b, weights: w } = sys;
    w.check_dims(a)?;
    let (m, n) = a.shape();
    if b.len() != n {
        return Err(QError::dims("solve_left", format!("right-hand side of length {} for {n} columns", b.len())));
    }
    let r = a.rank();
    let (sharp, _, right) = sharp_products(a, w)?;
    if right.is_hermitian(SHARP_TOL)? {
        let x = if r == 0 { vec![Quaternion::zero(); m] } else { row_rule(&right, &QMatrix::row_mul(b, &sharp)?, r)? };
        return Ok(Solution { x, rule: Rule::Hermitian });
    }
    let n_inv_adj = w.n_inv().matmul(a.conj_transpose())?;
    if r == m {
        let k = a.matmul(&n_inv_adj)?;
        let x = row_rule(&k, &QMatrix::row_mul(b, &n_inv_adj)?, r)?;
        return Ok(Solution { x, rule: Rule::FullRank });
    }
    let roots = w.roots()?;
    let h_rhs = n_inv_adj.to_f64().matmul(&roots.m_sqrt)?;
    let h = QMatrix::chain(&[&roots.m_sqrt, &a.to_f64(), &h_rhs])?.hermitian_part();
    let bf: Vec<Quaternion<f64>> = b.iter().map(Quaternion::to_f64).collect();
    let y = row_rule(&h, &QMatrix::row_mul(&bf, &h_rhs)?, r)?;
    Ok(Solution {
        x: lift_vec(QMatrix::row_mul(&y, &roots.m_sqrt)?)?,
        rule: Rule::General,
    })
}
