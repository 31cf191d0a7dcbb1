use thiserror::Error;

/// Errors raised by the numerical and group-theoretic routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QexpError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix {index} is not unitary (residual {residual:.3e})")]
    NotUnitary { index: usize, residual: f64 },

    #[error("tuple flagged symmetric but member {index} has no adjoint partner")]
    NotSymmetric { index: usize },

    #[error("degenerate dimension: the trace-zero subspace of M_1 is empty")]
    DegenerateDimension,

    #[error("solver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("group order exceeds the cap of {max_order}")]
    OrderExceeded { max_order: usize },

    #[error("generator {index} is not invertible")]
    NonInvertibleGenerator { index: usize },

    #[error("set size {size} exceeds the cap of {max}")]
    SetSizeExceeded { size: usize, max: usize },

    #[error("action is not transitive ({orbits} orbits on {set_size} points)")]
    NotTransitive { orbits: usize, set_size: usize },

    #[error("ring dimension k = {0} is outside the enumerable range 1..=3")]
    RingOutOfRange(usize),

    #[error("heterogeneous family: {0}")]
    HeterogeneousFamily(String),
}

pub type Result<T> = std::result::Result<T, QexpError>;
