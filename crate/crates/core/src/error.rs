use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("form is not positive-definite")]
    NotPositiveDefinite,

    #[error("invalid rational literal {0:?}")]
    BadRational(String),

    #[error("form is not perfect")]
    NotPerfect,

    #[error("ray set is not full-dimensional: rank {rank} < {dim}")]
    Degenerate { rank: usize, dim: usize },

    #[error("neighbor step failed across facet {facet}: {reason}")]
    NeighborFailed { facet: usize, reason: String },

    #[error("catalog for n={n} is incomplete")]
    IncompleteCatalog { n: usize },

    #[error("catalog record {index} failed its content hash check")]
    HashMismatch { index: usize },

    #[error("reduction walk exceeded {0} steps")]
    WalkLimit(usize),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("group action is not free: cell {cell} is fixed by a nonidentity element")]
    NotFree { cell: String },

    #[error("complex is not pure")]
    NotPure,

    #[error("level {0} is not supported (need N >= 3)")]
    BadLevel(u32),

    #[error("invalid partition: {0}")]
    BadPartition(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
