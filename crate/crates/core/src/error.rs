use thiserror::Error;

/// Errors for register construction, operator application, and parameter
/// validation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Index qubit count outside the supported range.
    #[error("index qubit count must be in 1..={max}, got {n}")]
    QubitCount { n: usize, max: usize },

    /// Two objects that must agree on the register size do not.
    #[error(
        "qubit count mismatch: state has {state_qubits} index qubits, argument has {other_qubits}"
    )]
    QubitCountMismatch {
        state_qubits: usize,
        other_qubits: usize,
    },

    /// Operator dimension does not match the state length.
    #[error("dimension mismatch: state has {state_len} amplitudes, operator is {matrix_dim} x {matrix_dim}")]
    DimensionMismatch { state_len: usize, matrix_dim: usize },

    /// A list index is not a valid item for the register size.
    #[error("index {index} out of range for {items} items")]
    IndexOutOfRange { index: usize, items: usize },

    /// A marked set must contain at least one match.
    #[error("marked set must contain at least one index")]
    EmptyMarkedSet,

    /// Dense reference matrices are capped to keep the O(4^n) path tractable.
    #[error("dense operator construction is limited to n <= {max}, got {n}")]
    DenseTooLarge { n: usize, max: usize },

    /// Match count outside 1..=N.
    #[error("match count must be in 1..={items}, got {matches}")]
    MatchCount { matches: u64, items: u64 },

    /// Item count must be a power of two (N = 2^n, n >= 1).
    #[error("item count must be a power of two >= 2, got {items}")]
    ItemCount { items: u64 },

    /// Match ratio outside the half-open interval (0, 1].
    #[error("match ratio must lie in (0, 1], got {ratio}")]
    RatioOutOfRange { ratio: f64 },

    /// Chebyshev argument outside [-1, 1].
    #[error("Chebyshev argument must lie in [-1, 1], got {y}")]
    ChebyshevDomain { y: f64 },

    /// A sweep or scan was configured with no points.
    #[error("{what} requires at least {min} points, got {got}")]
    GridTooSmall {
        what: &'static str,
        min: usize,
        got: usize,
    },
}
