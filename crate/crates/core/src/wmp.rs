//! Weighted Moore-Penrose inverses: the weighted adjoint, determinantal
//! representations, the reduction to the unweighted inverse, projections,
//! and a dispatcher that runs and verifies any of the routes.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::error::{QError, Result};
use crate::qmatrix::QMatrix;
use crate::rcdet::{bordered_cofactors_col, bordered_cofactors_row, principal_minor_sum};
use crate::scalar::Real;
use crate::spectral::{default_schedule, wmp_limit, wmp_wsvd, LimitSide};
use crate::verify::{penrose_residuals, PenroseResiduals};
use crate::weights::WeightPair;

/// Relative tolerance for the Hermitian test on `A♯A` and `AA♯` over floats.
pub const SHARP_TOL: f64 = 1e-9;

/// Residual bound for float routes.
pub const FLOAT_AXIOM_TOL: f64 = 1e-8;

/// Residual bound for the last iterate of the limit route.
pub const LIMIT_AXIOM_TOL: f64 = 1e-5;

/// `A♯ = N^{-1} A* M`.
pub fn weighted_adjoint<T: Real>(a: &QMatrix<T>, w: &WeightPair<T>) -> Result<QMatrix<T>> {
    w.check_dims(a)?;
    QMatrix::chain(&[w.n_inv(), a.conj_transpose(), w.m()])
}

/// Whether `A♯A` (left) and `AA♯` (right) are Hermitian.
pub fn sharp_hermitian_flags<T: Real>(a: &QMatrix<T>, w: &WeightPair<T>) -> Result<(bool, bool)> {
    let sharp = weighted_adjoint(a, w)?;
    let left = sharp.matmul(a)?.is_hermitian(SHARP_TOL)?;
    let right = a.matmul(&sharp)?.is_hermitian(SHARP_TOL)?;
    Ok((left, right))
}

fn check_denominator<T: Real>(d: &T, g: &QMatrix<T>, r: usize) -> Result<()> {
    let scale = (1.0 + g.max_norm()).powi(r as i32);
    if d.is_negligible(scale, 1e-14) || *d < T::zero() {
        return Err(QError::ZeroDenominator { rank: r });
    }
    Ok(())
}

/// Column kernel: entry `(i, j)` is `Σ_{β ∋ i} cdet_i((G_{.i}(c_{.j}))_β^β) / d_r(G)`.
/// For Hermitian positive semidefinite `G` of rank `r` this is `G† C`
/// whenever the columns of `C` lie in the range of `G`.
fn col_kernel<T: Real>(g: &QMatrix<T>, rhs: &QMatrix<T>, r: usize) -> Result<QMatrix<T>> {
    if r == 0 {
        return Ok(QMatrix::zeros(g.rows(), rhs.cols()));
    }
    let d = principal_minor_sum(g, r)?;
    check_denominator(&d, g, r)?;
    let inv_d = T::one() / d;
    Ok(bordered_cofactors_col(g, r)?.matmul(rhs)?.scale_real(&inv_d))
}

/// Row kernel: entry `(i, j)` is `Σ_{α ∋ j} rdet_j((H_{j.}(c_{i.}))_α^α) / d_r(H)`, i.e. `C H†`.
fn row_kernel<T: Real>(h: &QMatrix<T>, rhs: &QMatrix<T>, r: usize) -> Result<QMatrix<T>> {
    if r == 0 {
        return Ok(QMatrix::zeros(rhs.rows(), h.rows()));
    }
    let d = principal_minor_sum(h, r)?;
    check_denominator(&d, h, r)?;
    let inv_d = T::one() / d;
    Ok(rhs.matmul(&bordered_cofactors_row(h, r)?)?.scale_real(&inv_d))
}

pub(crate) fn sharp_products<T: Real>(a: &QMatrix<T>, w: &WeightPair<T>) -> Result<(QMatrix<T>, QMatrix<T>, QMatrix<T>)> {
    let sharp = weighted_adjoint(a, w)?;
    let left = sharp.matmul(a)?;
    let right = a.matmul(&sharp)?;
    Ok((sharp, left, right))
}

/// Hermitian-case column representation, built on `A♯A`. Requires `A♯A` Hermitian.
pub fn wmp_det_hermitian_col<T: Real>(a: &QMatrix<T>, w: &WeightPair<T>) -> Result<QMatrix<T>> {
    let (sharp, left, _) = sharp_products(a, w)?;
    if !left.is_hermitian(SHARP_TOL)? {
        return Err(QError::NotHermitianSharp("A♯A"));
    }
    col_kernel(&left, &sharp, a.rank())
}

/// Hermitian-case row representation, built on `AA♯`. Requires `AA♯` Hermitian.
pub fn wmp_det_hermitian_row<T: Real>(a: &QMatrix<T>, w: &WeightPair<T>) -> Result<QMatrix<T>> {
    let (sharp, _, right) = sharp_products(a, w)?;
    if !right.is_hermitian(SHARP_TOL)? {
        return Err(QError::NotHermitianSharp("AA♯"));
    }
    row_kernel(&right, &sharp, a.rank())
}

/// Which Gram matrix a determinantal formula expands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Column determinants of `A*A`.
    Col,
    /// Row determinants of `AA*`.
    Row,
}

/// The unweighted Moore-Penrose inverse by determinantal formulas.
pub fn mp_det<T: Real>(a: &QMatrix<T>, side: Side) -> Result<QMatrix<T>> {
    mp_det_with_rank(a, side, a.rank())
}

/// [`mp_det`] with the rank supplied by the caller.
pub fn mp_det_with_rank<T: Real>(a: &QMatrix<T>, side: Side, r: usize) -> Result<QMatrix<T>> {
    let adj = a.conj_transpose();
    match side {
        Side::Col => col_kernel(&adj.matmul(a)?, adj, r),
        Side::Row => row_kernel(&a.matmul(adj)?, adj, r),
    }
}

/// General-case column representation.
///
/// At full column rank this is `(A*MA)^{-1} A*M` entrywise by column
/// determinants, exact on rationals. Otherwise it expands
/// `G = N^{-1/2} A*MA N^{-1/2}` against the columns of `N^{-1/2} A*M` and
/// multiplies by `N^{-1/2}` on the left, which needs the float square root.
pub fn wmp_det_general_col<T: Real>(a: &QMatrix<T>, w: &WeightPair<T>) -> Result<QMatrix<T>> {
    w.check_dims(a)?;
    let (m, n) = a.shape();
    let r = a.rank();
    if r == 0 {
        return Ok(QMatrix::zeros(n, m));
    }
    let adj_m = a.conj_transpose().matmul(w.m())?;
    if r == n {
        let k = adj_m.matmul(a)?;
        return col_kernel(&k, &adj_m, r);
    }
    let roots = w.roots()?;
    let g_rhs = roots.n_inv_sqrt.matmul(&adj_m.to_f64())?;
    let g = g_rhs.matmul(&a.to_f64())?.matmul(&roots.n_inv_sqrt)?;
    let y = col_kernel(&g.hermitian_part(), &g_rhs, r)?;
    roots.n_inv_sqrt.matmul(&y)?.lift()
}

/// General-case row representation.
///
/// At full row rank this is `N^{-1}A*(AN^{-1}A*)^{-1}` entrywise by row
/// determinants. Otherwise it expands `H = M^{1/2} A N^{-1} A* M^{1/2}`
/// against the rows of `N^{-1} A* M^{1/2}` and multiplies by `M^{1/2}` on the right.
pub fn wmp_det_general_row<T: Real>(a: &QMatrix<T>, w: &WeightPair<T>) -> Result<QMatrix<T>> {
    w.check_dims(a)?;
    let (m, n) = a.shape();
    let r = a.rank();
    if r == 0 {
        return Ok(QMatrix::zeros(n, m));
    }
    let n_inv_adj = w.n_inv().matmul(a.conj_transpose())?;
    if r == m {
        let k = a.matmul(&n_inv_adj)?;
        return row_kernel(&k, &n_inv_adj, r);
    }
    let roots = w.roots()?;
    let h_rhs = n_inv_adj.to_f64().matmul(&roots.m_sqrt)?;
    let h = QMatrix::chain(&[&roots.m_sqrt, &a.to_f64(), &h_rhs])?;
    let y = row_kernel(&h.hermitian_part(), &h_rhs, r)?;
    y.matmul(&roots.m_sqrt)?.lift()
}

/// `A†_{M,N} = N^{-1/2} (M^{1/2} A N^{-1/2})† M^{1/2}` with the inner inverse
/// from the unweighted determinantal formula.
pub fn reduction_route<T: Real>(a: &QMatrix<T>, w: &WeightPair<T>) -> Result<QMatrix<T>> {
    w.check_dims(a)?;
    let roots = w.roots()?;
    let b = QMatrix::chain(&[&roots.m_sqrt, &a.to_f64(), &roots.n_inv_sqrt])?;
    let b_pinv = mp_det_with_rank(&b, Side::Col, a.rank())?;
    QMatrix::chain(&[&roots.n_inv_sqrt, &b_pinv, &roots.m_sqrt])?.lift()
}

/// `P = A†_{M,N} A` from the column kernel applied to the columns of `A♯A`.
pub fn projection_p<T: Real>(a: &QMatrix<T>, w: &WeightPair<T>) -> Result<QMatrix<T>> {
    let (_, left, _) = sharp_products(a, w)?;
    if !left.is_hermitian(SHARP_TOL)? {
        return Err(QError::NotHermitianSharp("A♯A"));
    }
    col_kernel(&left, &left, a.rank())
}

/// `Q = A A†_{M,N}` from the row kernel applied to the rows of `AA♯`.
pub fn projection_q<T: Real>(a: &QMatrix<T>, w: &WeightPair<T>) -> Result<QMatrix<T>> {
    let (_, _, right) = sharp_products(a, w)?;
    if !right.is_hermitian(SHARP_TOL)? {
        return Err(QError::NotHermitianSharp("AA♯"));
    }
    row_kernel(&right, &right, a.rank())
}

/// The routes to `A†_{M,N}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Auto,
    HermitianCol,
    HermitianRow,
    GeneralCol,
    GeneralRow,
    Wsvd,
    Limit,
    Reduction,
}

impl Method {
    /// Every concrete route, in the order reports list them.
    pub const CONCRETE: [Method; 7] = [
        Method::HermitianCol,
        Method::HermitianRow,
        Method::GeneralCol,
        Method::GeneralRow,
        Method::Wsvd,
        Method::Reduction,
        Method::Limit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::HermitianCol => "hermitian-col",
            Method::HermitianRow => "hermitian-row",
            Method::GeneralCol => "general-col",
            Method::GeneralRow => "general-row",
            Method::Wsvd => "wsvd",
            Method::Limit => "limit",
            Method::Reduction => "reduction",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = QError;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        std::iter::once(Method::Auto)
            .chain(Method::CONCRETE)
            .find(|m| m.name() == key)
            .ok_or_else(|| QError::Parse(format!("unknown method '{s}'")))
    }
}

/// One route's output and its axiom residuals.
#[derive(Clone, Debug)]
pub struct MethodOutcome<T: Real> {
    pub method: Method,
    pub inverse: QMatrix<T>,
    pub residuals: PenroseResiduals,
    /// True when the route ran in exact arithmetic end to end.
    pub exact: bool,
    /// Largest residual the route is allowed; zero means exact equality.
    pub tolerance: f64,
}

/// Result of [`wmp`] or [`run_methods`].
#[derive(Clone, Debug)]
pub struct WmpReport<T: Real> {
    /// The route whose output is reported as `inverse`.
    pub method: Method,
    pub inverse: QMatrix<T>,
    pub residuals: PenroseResiduals,
    pub outcomes: Vec<MethodOutcome<T>>,
    /// Routes that could not run, with the reason.
    pub skipped: Vec<(Method, QError)>,
    /// Largest entrywise distance between any two outcomes.
    pub max_discrepancy: Option<f64>,
}

/// The route `auto` stands for.
///
/// Exact backends prefer the Hermitian-case formulas, then the full-rank
/// general formulas (also exact), then the float general column formula.
/// Float backends prefer the Hermitian-case formulas, then the general
/// formula on the side of the smaller Gram matrix.
pub fn resolve_auto<T: Real>(a: &QMatrix<T>, w: &WeightPair<T>) -> Result<Method> {
    let (left, right) = sharp_hermitian_flags(a, w)?;
    let (m, n) = a.shape();
    let r = a.rank();
    Ok(if left {
        Method::HermitianCol
    } else if right {
        Method::HermitianRow
    } else if T::EXACT && r == n {
        Method::GeneralCol
    } else if T::EXACT && r == m {
        Method::GeneralRow
    } else if m >= n {
        Method::GeneralCol
    } else {
        Method::GeneralRow
    })
}

/// Runs one concrete route; returns the inverse and whether it was exact.
fn compute<T: Real>(a: &QMatrix<T>, w: &WeightPair<T>, method: Method) -> Result<(QMatrix<T>, bool)> {
    let (m, n) = a.shape();
    let r = a.rank();
    let exact_if = |cond: bool| T::EXACT && (cond || r == 0);
    match method {
        Method::Auto => compute(a, w, resolve_auto(a, w)?),
        Method::HermitianCol => Ok((wmp_det_hermitian_col(a, w)?, exact_if(true))),
        Method::HermitianRow => Ok((wmp_det_hermitian_row(a, w)?, exact_if(true))),
        Method::GeneralCol => Ok((wmp_det_general_col(a, w)?, exact_if(r == n))),
        Method::GeneralRow => Ok((wmp_det_general_row(a, w)?, exact_if(r == m))),
        Method::Wsvd => Ok((wmp_wsvd(a, w)?.lift()?, false)),
        Method::Reduction => Ok((reduction_route(a, w)?, false)),
        Method::Limit => Ok((wmp_limit(a, w, LimitSide::Right, &default_schedule())?.inverse, false)),
    }
}

fn outcome<T: Real>(a: &QMatrix<T>, w: &WeightPair<T>, method: Method) -> Result<MethodOutcome<T>> {
    let method = if method == Method::Auto { resolve_auto(a, w)? } else { method };
    let (inverse, exact) = compute(a, w, method)?;
    let residuals = penrose_residuals(a, w, &inverse)?;
    let tolerance = if exact {
        0.0
    } else if method == Method::Limit {
        LIMIT_AXIOM_TOL
    } else {
        FLOAT_AXIOM_TOL
    };
    Ok(MethodOutcome {
        method,
        inverse,
        residuals,
        exact,
        tolerance,
    })
}

fn check_axioms<T: Real>(o: &MethodOutcome<T>) -> Result<()> {
    let ok = if o.tolerance == 0.0 {
        o.residuals.exact_zero
    } else {
        o.residuals.max() <= o.tolerance
    };
    if ok {
        Ok(())
    } else {
        Err(QError::AxiomViolation {
            method: o.method.name().to_string(),
            residual: o.residuals.max(),
        })
    }
}

/// Computes `A†_{M,N}` by one route and verifies the four axioms.
pub fn wmp<T: Real>(a: &QMatrix<T>, w: &WeightPair<T>, method: Method) -> Result<WmpReport<T>> {
    let o = outcome(a, w, method)?;
    check_axioms(&o)?;
    Ok(WmpReport {
        method: o.method,
        inverse: o.inverse.clone(),
        residuals: o.residuals.clone(),
        outcomes: vec![o],
        skipped: vec![],
        max_discrepancy: None,
    })
}

/// Runs several routes side by side.
///
/// Routes that do not apply (a Hermitian-case formula without the Hermitian
/// property, a limit that does not settle) are listed in `skipped`; any other
/// error aborts. The first successful route supplies `inverse`. Every
/// outcome is checked against the axioms.
pub fn run_methods<T: Real>(a: &QMatrix<T>, w: &WeightPair<T>, methods: &[Method]) -> Result<WmpReport<T>> {
    let mut outcomes = Vec::new();
    let mut skipped = Vec::new();
    for &method in methods.iter().unique() {
        match outcome(a, w, method) {
            Ok(o) => outcomes.push(o),
            Err(e @ (QError::NotHermitianSharp(_) | QError::NonConvergence(_))) => skipped.push((method, e)),
            Err(e) => return Err(e),
        }
    }
    for o in &outcomes {
        check_axioms(o)?;
    }
    let Some(first) = outcomes.first() else {
        return Err(match skipped.pop() {
            Some((_, e)) if methods.len() == 1 => e,
            _ => QError::NotApplicable("requested methods".into(), "none of them applies".into()),
        });
    };
    let mut max_discrepancy = None;
    for (x, y) in outcomes.iter().tuple_combinations() {
        let d = x.inverse.max_dist(&y.inverse)?;
        max_discrepancy = Some(max_discrepancy.map_or(d, |m: f64| m.max(d)));
    }
    Ok(WmpReport {
        method: first.method,
        inverse: first.inverse.clone(),
        residuals: first.residuals.clone(),
        outcomes,
        skipped,
        max_discrepancy,
    })
}
