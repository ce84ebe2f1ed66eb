use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "matrix is not Hermitian: |a[{row}][{col}] - conj(a[{col}][{row}])| = {deviation:e} exceeds {tolerance:e}"
    )]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
        tolerance: f64,
    },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("eigensolver did not converge for a {dim}x{dim} matrix within {iterations} iterations")]
    EigenFailure { dim: usize, iterations: usize },

    #[error("tr exp overflows: scale {scale:e} times eigenvalue {eigenvalue:e} exceeds the f64 exponent range")]
    Overflow { eigenvalue: f64, scale: f64 },

    #[error("ensemble must contain at least one matrix")]
    EmptyEnsemble,

    #[error("ensemble is not centered: norm of the mean is {mean_norm:e}")]
    NotCentered { mean_norm: f64 },

    #[error("override ({name} = {supplied:e}) is smaller than the computed value {computed:e}")]
    OverrideTooSmall {
        name: &'static str,
        supplied: f64,
        computed: f64,
    },

    #[error("cannot draw {m} distinct elements from a collection of {size}")]
    SampleTooLarge { m: usize, size: usize },

    #[error("sample vector refers to a collection of {sample} elements but the ensemble has {ensemble}")]
    SizeMismatch { sample: usize, ensemble: usize },

    #[error("draw has a repeated component {value}; it lies outside the domain of the coupling")]
    RepeatedComponent { value: usize },

    #[error("value {value} is not an element of the collection of size {size}")]
    ValueOutOfRange { value: usize, size: usize },

    #[error("prefix has probability zero under the coupling")]
    UnreachablePrefix,

    #[error("enumeration refused: {what} = {requested} exceeds the limit {limit}")]
    EnumerationTooLarge {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("sampling mode {0} is not supported here")]
    UnsupportedMode(crate::sampler::SamplingMode),

    #[error("sum is deterministic (c = 0, V = 0); the tail bound is undefined for t > 0")]
    DegenerateEnsemble,

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
