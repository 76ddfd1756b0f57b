use thiserror::Error;

/// Errors produced by the matrix, spectral and sequence routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {op} expects matching dimensions, got {left} and {right}")]
    DimensionMismatch {
        op: &'static str,
        left: usize,
        right: usize,
    },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("argument `{arg}` is not unitary (residual {residual:.3e})")]
    NotUnitary { arg: &'static str, residual: f64 },

    #[error("argument `{arg}` is not hermitian (residual {residual:.3e})")]
    NotHermitian { arg: &'static str, residual: f64 },

    #[error("matrix is not normal (residual {residual:.3e})")]
    NotNormal { residual: f64 },

    #[error("matrix is neither unitary nor hermitian (unitarity residual {unitary:.3e}, hermiticity residual {hermitian:.3e})")]
    UnsupportedSource { unitary: f64, hermitian: f64 },

    #[error("eigensolver failed: {0}")]
    EigenSolver(String),

    #[error("ill-conditioned eigenvalue clustering: a chain of near-coincident eigenvalues spans {span:.3e} (limit {limit:.3e})")]
    IllConditionedCluster { span: f64, limit: f64 },

    #[error("Gram-Schmidt on projected basis produced {found} vectors for a cluster of multiplicity {expected}")]
    ClusterRank { expected: usize, found: usize },

    #[error("cannot phase-fix a vector whose entries are all below {eps:.1e} in magnitude")]
    ZeroVector { eps: f64 },

    #[error("two eigenframe columns compare equal under the ordering; tolerances are too loose for this input")]
    OrderingTie,

    #[error("initial matrix is a global phase of identity, F_n degenerates to identity (d = {distance:.3e})")]
    GlobalPhaseIdentity { distance: f64 },

    #[error("operation requires a frame built from a unitary matrix")]
    HermitianFrame,

    #[error("singular matrix in linear solve")]
    Singular,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown gate `{0}`")]
    UnknownGate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
