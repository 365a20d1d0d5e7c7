use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),

    /// The vector to be reflected has (numerically) vanished; `index` is the
    /// 1-based column or reflector number.
    #[error("degenerate vector at column {index}")]
    DegenerateColumn { index: usize },

    #[error("reflector capacity {capacity} exceeded")]
    CapacityExceeded { capacity: usize },

    #[error("reflector accumulator is empty")]
    EmptyAccumulator,

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("backend {0} is not valid for this driver")]
    WrongBackend(&'static str),
}
