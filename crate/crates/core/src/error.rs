use thiserror::Error;

/// Errors raised by validation and by the numerical operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("probability vector is empty")]
    Empty,
    #[error("factored system has no marginals")]
    EmptySystem,
    #[error("at least one axis must be kept")]
    NoAxesKept,
    #[error("negative probability {value} at index {index}")]
    NegativeProbability { index: usize, value: f64 },
    #[error("non-finite probability at index {index}")]
    NonFinite { index: usize },
    #[error("probabilities sum to {sum}, not 1 (tolerance {tol})")]
    NotNormalized { sum: f64, tol: f64 },
    #[error("table shape {shape:?} implies {expected} cells but {actual} were given")]
    ShapeMismatch {
        shape: Vec<usize>,
        expected: usize,
        actual: usize,
    },
    #[error("joint would have {cells} cells, exceeding the cap of {max}")]
    TooLarge { cells: u128, max: usize },
    #[error("axis {axis} out of range for a table with {arity} axes")]
    BadAxis { axis: usize, arity: usize },
    #[error("power-sum exponent must be positive, got {0}")]
    NonPositiveExponent(f64),
    #[error("entropy parameters must be positive and finite, got q = {q}, r = {r}")]
    BadParams { q: f64, r: f64 },
    #[error("logarithm base must be greater than 1, got {0}")]
    BadBase(f64),
    #[error("expansion audit supports 2 or 3 subsystems, got {0}")]
    UnsupportedArity(usize),
    #[error("synergy needs at least 2 subsystems, got {0}")]
    ArityTooSmall(usize),
    #[error("Tsallis-specific forms exclude q = 1")]
    QEqualsOne,
    #[error("{measure} expects {expected} axes, got {actual}")]
    WrongArity {
        measure: &'static str,
        expected: &'static str,
        actual: usize,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
