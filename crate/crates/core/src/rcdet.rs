//! Noncommutative row and column determinants.
//!
//! `rdet_i` sums over all permutations of `S_n`. Each permutation is written as
//! disjoint cycles: the cycle through `i` comes first and starts at `i`, and
//! every other cycle starts at its smallest element, in increasing order of
//! those leading elements. Each cycle `(c, σ(c), …)` contributes the factors
//! `a_{c σ(c)} a_{σ(c) σ²(c)} …` read left to right, and the term carries the
//! sign `(-1)^{n-r}`, where `r` counts all cycles including fixed points.
//!
//! `cdet_j` mirrors this. The cycle through `j` is read last and starts at row
//! `j`, the remaining cycles come before it in decreasing order of their leading
//! elements, and so the final factor of every term lies in column `j`.
//!
//! All indices are zero-based.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;

use crate::error::{QError, Result};
use crate::qmatrix::QMatrix;
use crate::quat::Quaternion;
use crate::scalar::{Real, DEFAULT_TOL};

/// Default largest order for full `S_n` enumeration.
pub const DEFAULT_SIZE_CAP: usize = 8;

/// The enumeration cap, overridable through `QWMP_SIZE_CAP`.
pub fn size_cap() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("QWMP_SIZE_CAP")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .filter(|&c: &usize| c > 0)
            .unwrap_or(DEFAULT_SIZE_CAP)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Kind {
    Row,
    Col,
}

/// One signed term of an expansion: the ordered list of `(row, col)` factors.
#[derive(Debug)]
struct Term {
    negative: bool,
    path: Vec<(usize, usize)>,
}

type TermTable = Arc<Vec<Term>>;
type TermCache = Mutex<HashMap<(Kind, usize, usize), TermTable>>;

fn terms(kind: Kind, n: usize, anchor: usize) -> TermTable {
    static CACHE: OnceLock<TermCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("term cache poisoned").get(&(kind, n, anchor)) {
        return Arc::clone(t);
    }
    let table: TermTable = Arc::new(
        (0..n)
            .permutations(n)
            .map(|sigma| canonical_term(kind, &sigma, anchor))
            .collect(),
    );
    cache
        .lock()
        .expect("term cache poisoned")
        .insert((kind, n, anchor), Arc::clone(&table));
    table
}

fn canonical_term(kind: Kind, sigma: &[usize], anchor: usize) -> Term {
    let n = sigma.len();
    let mut visited = vec![false; n];
    let mut path = Vec::with_capacity(n);
    let mut cycles = 0;

    let mark = |start: usize, visited: &mut Vec<bool>| {
        let mut c = start;
        loop {
            visited[c] = true;
            c = sigma[c];
            if c == start {
                break;
            }
        }
    };
    let walk = |start: usize, path: &mut Vec<(usize, usize)>| {
        let mut c = start;
        loop {
            path.push((c, sigma[c]));
            c = sigma[c];
            if c == start {
                break;
            }
        }
    };

    mark(anchor, &mut visited);
    cycles += 1;
    let mut leaders = Vec::new();
    for t in 0..n {
        if !visited[t] {
            mark(t, &mut visited);
            leaders.push(t);
            cycles += 1;
        }
    }
    match kind {
        Kind::Row => {
            walk(anchor, &mut path);
            for &t in &leaders {
                walk(t, &mut path);
            }
        }
        Kind::Col => {
            for &t in leaders.iter().rev() {
                walk(t, &mut path);
            }
            walk(anchor, &mut path);
        }
    }
    Term {
        negative: (n - cycles) % 2 == 1,
        path,
    }
}

fn product<T: Real>(a: &QMatrix<T>, factors: &[(usize, usize)]) -> Quaternion<T> {
    let mut it = factors.iter();
    let Some(&(r, c)) = it.next() else {
        return Quaternion::one();
    };
    it.fold(a.get(r, c).clone(), |acc, &(r, c)| &acc * a.get(r, c))
}

fn check_square<T: Real>(a: &QMatrix<T>, op: &'static str) -> Result<usize> {
    if !a.is_square() {
        return Err(QError::dims(op, format!("{}x{} is not square", a.rows(), a.cols())));
    }
    let n = a.rows();
    if n > size_cap() {
        return Err(QError::SizeCapExceeded { n, cap: size_cap() });
    }
    Ok(n)
}

fn expand<T: Real>(kind: Kind, anchor: usize, a: &QMatrix<T>) -> Result<Quaternion<T>> {
    let op = if kind == Kind::Row { "rdet" } else { "cdet" };
    let n = check_square(a, op)?;
    if anchor >= n {
        return Err(QError::IndexOutOfRange { index: anchor, bound: n });
    }
    let mut acc = Quaternion::zero();
    for term in terms(kind, n, anchor).iter() {
        let p = product(a, &term.path);
        if term.negative {
            acc -= &p;
        } else {
            acc += &p;
        }
    }
    Ok(acc)
}

/// The `i`-th row determinant.
pub fn rdet<T: Real>(i: usize, a: &QMatrix<T>) -> Result<Quaternion<T>> {
    expand(Kind::Row, i, a)
}

/// The `j`-th column determinant.
pub fn cdet<T: Real>(j: usize, a: &QMatrix<T>) -> Result<Quaternion<T>> {
    expand(Kind::Col, j, a)
}

/// Determinant of a Hermitian matrix, the common real value of all row and
/// column determinants.
pub fn det_hermitian<T: Real>(a: &QMatrix<T>) -> Result<T> {
    det_hermitian_tol(a, DEFAULT_TOL)
}

pub fn det_hermitian_tol<T: Real>(a: &QMatrix<T>, tol: f64) -> Result<T> {
    if !a.is_hermitian(tol)? {
        return Err(QError::NotHermitian);
    }
    let d = rdet(0, a)?;
    #[cfg(debug_assertions)]
    if a.rows() <= 5 {
        let scale = 1.0 + d.norm();
        for t in 0..a.rows() {
            for e in [rdet(t, a)?, cdet(t, a)?] {
                debug_assert!(
                    e.dist(&d) <= 1e-8 * scale || (T::EXACT && e == d),
                    "row/column determinants of a Hermitian matrix disagree"
                );
            }
        }
    }
    Ok(d.a0)
}

/// Right cofactors `R` and left cofactors `L`:
/// `rdet_i A = Σ_j a_ij R_ij` and `cdet_j A = Σ_i L_ij a_ij`.
pub fn cofactors<T: Real>(a: &QMatrix<T>) -> Result<(QMatrix<T>, QMatrix<T>)> {
    let n = check_square(a, "cofactors")?;
    let mut right = QMatrix::zeros(n, n);
    let mut left = QMatrix::zeros(n, n);
    let mut r_acc = vec![Quaternion::zero(); n * n];
    let mut l_acc = vec![Quaternion::zero(); n * n];
    for anchor in 0..n {
        for term in terms(Kind::Row, n, anchor).iter() {
            let (_, col) = term.path[0];
            let p = product(a, &term.path[1..]);
            let slot = &mut r_acc[anchor * n + col];
            if term.negative {
                *slot -= &p;
            } else {
                *slot += &p;
            }
        }
        for term in terms(Kind::Col, n, anchor).iter() {
            let (row, _) = term.path[n - 1];
            let p = product(a, &term.path[..n - 1]);
            let slot = &mut l_acc[row * n + anchor];
            if term.negative {
                *slot -= &p;
            } else {
                *slot += &p;
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            right.set(i, j, r_acc[i * n + j].clone());
            left.set(i, j, l_acc[i * n + j].clone());
        }
    }
    Ok((right, left))
}

/// Inverse of a nonsingular Hermitian matrix from its cofactors,
/// `(A^{-1})_ij = R_ji / det A`, cross-checked against `L_ji / det A`.
pub fn hermitian_inverse<T: Real>(a: &QMatrix<T>) -> Result<QMatrix<T>> {
    let det = det_hermitian(a)?;
    let scale = a.max_norm().max(1.0).powi(a.rows() as i32);
    if det.is_negligible(scale, DEFAULT_TOL) {
        return Err(QError::SingularMatrix);
    }
    let (right, left) = cofactors(a)?;
    let n = a.rows();
    let from_right = QMatrix::from_fn(n, n, |i, j| right.get(j, i).div_real(&det).expect("det is nonzero"));
    let from_left = QMatrix::from_fn(n, n, |i, j| left.get(j, i).div_real(&det).expect("det is nonzero"));
    let inv_scale = 1.0 + from_right.max_norm();
    for (x, y) in from_right.entries().iter().zip(from_left.entries()) {
        if !(x - y).is_negligible(inv_scale, 1e-8) {
            return Err(QError::NotHermitian);
        }
    }
    Ok(from_right)
}

/// Real part of `rdet` of a principal submatrix, the determinant of a
/// Hermitian principal minor.
fn principal_det<T: Real>(g: &QMatrix<T>, idx: &[usize]) -> Result<T> {
    Ok(rdet(0, &g.principal(idx))?.a0)
}

/// `d_k`, the sum of all principal minors of order `k`.
pub fn principal_minor_sum<T: Real>(g: &QMatrix<T>, k: usize) -> Result<T> {
    let n = g.rows();
    if !g.is_square() {
        return Err(QError::dims("principal_minor_sum", "not square"));
    }
    if k == 0 || k > n {
        return Err(QError::RankOutOfRange { r: k, n });
    }
    if k > size_cap() {
        return Err(QError::SizeCapExceeded { n: k, cap: size_cap() });
    }
    (0..n).combinations(k).try_fold(T::zero(), |acc, idx| Ok(acc + principal_det(g, &idx)?))
}

/// Sums of principal minors `d_1 … d_n` of a Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CharPolyCoeffs<T: Real> {
    /// `d[k-1]` is the sum of principal minors of order `k`.
    pub d: Vec<T>,
}

impl<T: Real> CharPolyCoeffs<T> {
    /// `det(tI + A) = t^n + d_1 t^{n-1} + … + d_n`.
    pub fn eval_plus(&self, t: &T) -> T {
        self.d.iter().fold(T::one(), |acc, dk| acc * t.clone() + dk.clone())
    }

    /// `det(tI - A) = t^n - d_1 t^{n-1} + … + (-1)^n d_n`.
    pub fn eval_minus(&self, t: &T) -> T {
        let mut acc = T::one();
        for (k, dk) in self.d.iter().enumerate() {
            let term = if k % 2 == 0 { -dk.clone() } else { dk.clone() };
            acc = acc * t.clone() + term;
        }
        acc
    }
}

pub fn principal_minor_sums<T: Real>(a: &QMatrix<T>) -> Result<CharPolyCoeffs<T>> {
    if !a.is_hermitian(DEFAULT_TOL)? {
        return Err(QError::NotHermitian);
    }
    let d = (1..=a.rows()).map(|k| principal_minor_sum(a, k)).collect::<Result<_>>()?;
    Ok(CharPolyCoeffs { d })
}

fn check_border<T: Real>(g: &QMatrix<T>, b_len: usize, at: usize, r: usize, op: &'static str) -> Result<usize> {
    if !g.is_square() {
        return Err(QError::dims(op, "not square"));
    }
    let n = g.rows();
    if b_len != n {
        return Err(QError::dims(op, format!("vector of length {b_len} for order {n}")));
    }
    if at >= n {
        return Err(QError::IndexOutOfRange { index: at, bound: n });
    }
    if r == 0 || r > n {
        return Err(QError::RankOutOfRange { r, n });
    }
    if r > size_cap() {
        return Err(QError::SizeCapExceeded { n: r, cap: size_cap() });
    }
    Ok(n)
}

/// Index sets of size `r` from `0..n` that contain `fixed`, in lexicographic order.
pub fn index_sets_containing(n: usize, r: usize, fixed: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n).filter(move |&t| t != fixed).combinations(r - 1).map(move |mut rest| {
        let pos = rest.partition_point(|&t| t < fixed);
        rest.insert(pos, fixed);
        rest
    })
}

/// `Σ_{β ∋ i, |β| = r} cdet_i((G_{.i}(b))_β^β)`, with `cdet` taken at the
/// position of `i` inside `β`.
pub fn bordered_minor_sum_col<T: Real>(g: &QMatrix<T>, b: &[Quaternion<T>], i: usize, r: usize) -> Result<Quaternion<T>> {
    let n = check_border(g, b.len(), i, r, "bordered_minor_sum_col")?;
    let replaced = g.replace_col(i, b)?;
    let mut acc = Quaternion::zero();
    for beta in index_sets_containing(n, r, i) {
        let pos = beta.iter().position(|&t| t == i).expect("beta contains i");
        acc += cdet(pos, &replaced.principal(&beta))?;
    }
    Ok(acc)
}

/// `Σ_{α ∋ j, |α| = r} rdet_j((G_{j.}(b))_α^α)`, the row-replacement mirror.
pub fn bordered_minor_sum_row<T: Real>(g: &QMatrix<T>, b: &[Quaternion<T>], j: usize, r: usize) -> Result<Quaternion<T>> {
    let n = check_border(g, b.len(), j, r, "bordered_minor_sum_row")?;
    let replaced = g.replace_row(j, b)?;
    let mut acc = Quaternion::zero();
    for alpha in index_sets_containing(n, r, j) {
        let pos = alpha.iter().position(|&t| t == j).expect("alpha contains j");
        acc += rdet(pos, &replaced.principal(&alpha))?;
    }
    Ok(acc)
}

/// Left cofactors of column `j`: `cdet_j A = Σ_t L_t a_tj`, with `L_t` free of column `j`.
fn col_cofactors<T: Real>(a: &QMatrix<T>, j: usize) -> Vec<Quaternion<T>> {
    let n = a.rows();
    let mut out = vec![Quaternion::zero(); n];
    for term in terms(Kind::Col, n, j).iter() {
        let (row, _) = term.path[n - 1];
        let p = product(a, &term.path[..n - 1]);
        if term.negative {
            out[row] -= &p;
        } else {
            out[row] += &p;
        }
    }
    out
}

/// Right cofactors of row `i`: `rdet_i A = Σ_t a_it R_t`.
fn row_cofactors<T: Real>(a: &QMatrix<T>, i: usize) -> Vec<Quaternion<T>> {
    let n = a.rows();
    let mut out = vec![Quaternion::zero(); n];
    for term in terms(Kind::Row, n, i).iter() {
        let (_, col) = term.path[0];
        let p = product(a, &term.path[1..]);
        if term.negative {
            out[col] -= &p;
        } else {
            out[col] += &p;
        }
    }
    out
}

/// The matrix `C` with `bordered_minor_sum_col(G, b, i, r) = Σ_t C_it b_t` for every `b`.
///
/// A column determinant is right-linear in its own column, so one pass over
/// the minors replaces a separate expansion per right-hand side.
pub fn bordered_cofactors_col<T: Real>(g: &QMatrix<T>, r: usize) -> Result<QMatrix<T>> {
    let n = check_border(g, g.rows(), 0, r, "bordered_cofactors_col")?;
    let mut c = vec![Quaternion::zero(); n * n];
    for beta in (0..n).combinations(r) {
        let sub = g.principal(&beta);
        for (p, &i) in beta.iter().enumerate() {
            for (q, l) in col_cofactors(&sub, p).iter().enumerate() {
                c[i * n + beta[q]] += l;
            }
        }
    }
    QMatrix::new(n, n, c)
}

/// The matrix `C` with `bordered_minor_sum_row(G, b, j, r) = Σ_t b_t C_tj` for every `b`.
pub fn bordered_cofactors_row<T: Real>(g: &QMatrix<T>, r: usize) -> Result<QMatrix<T>> {
    let n = check_border(g, g.rows(), 0, r, "bordered_cofactors_row")?;
    let mut c = vec![Quaternion::zero(); n * n];
    for alpha in (0..n).combinations(r) {
        let sub = g.principal(&alpha);
        for (p, &j) in alpha.iter().enumerate() {
            for (q, rc) in row_cofactors(&sub, p).iter().enumerate() {
                c[alpha[q] * n + j] += rc;
            }
        }
    }
    QMatrix::new(n, n, c)
}

/// Coefficients `c_1 … c_n` with `cdet_i((tI + G)_{.i}(b)) = Σ_k c_k t^{n-k}`.
pub fn charpoly_border_coeffs<T: Real>(g: &QMatrix<T>, b: &[Quaternion<T>], i: usize) -> Result<Vec<Quaternion<T>>> {
    let n = g.rows();
    (1..=n).map(|k| bordered_minor_sum_col(g, b, i, k)).collect()
}
