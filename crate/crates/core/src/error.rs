use thiserror::Error;

pub type Result<T, E = QError> = std::result::Result<T, E>;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("dimension mismatch in {op}: {detail}")]
    DimensionMismatch { op: &'static str, detail: String },

    #[error("division by the zero quaternion")]
    ZeroDivision,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("matrix is not Hermitian")]
    NotHermitian,

    #[error("{0} is not Hermitian for the given weights")]
    NotHermitianSharp(&'static str),

    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("order {n} exceeds the permutation enumeration cap {cap}")]
    SizeCapExceeded { n: usize, cap: usize },

    #[error("index {index} out of range 0..{bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("minor order {r} out of range 1..={n}")]
    RankOutOfRange { r: usize, n: usize },

    #[error("complex matrix is not the image of a quaternion matrix (block defect {defect:e})")]
    NotInImage { defect: f64 },

    #[error("eigenvalues of the complex adjoint do not pair up (gap {gap:e})")]
    EmbeddingPairingFailure { gap: f64 },

    #[error("zero denominator in determinantal formula (rank {rank})")]
    ZeroDenominator { rank: usize },

    #[error("lambda schedule is empty")]
    ScheduleEmpty,

    #[error("lambda schedule must be strictly decreasing and positive")]
    BadSchedule,

    #[error("limit iteration did not converge: distances {0:?}")]
    NonConvergence(Vec<f64>),

    #[error("{method} violates the Penrose axioms (max residual {residual:e})")]
    AxiomViolation { method: String, residual: f64 },

    #[error("non-finite value encountered")]
    NonFinite,

    #[error("method {0} is not applicable: {1}")]
    NotApplicable(String, String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl QError {
    pub(crate) fn dims(op: &'static str, detail: impl Into<String>) -> Self {
        QError::DimensionMismatch {
            op,
            detail: detail.into(),
        }
    }
}
