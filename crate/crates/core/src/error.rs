use thiserror::Error;

/// Coarse classification used by front ends to map failures onto exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Invalid parameters, shapes or nodes.
    Domain,
    /// A numerical routine could not deliver a trustworthy result.
    Numerical,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension must be at least 1, got {0}")]
    BadDimension(usize),

    #[error("bandwidth must be an even integer >= 2, got {0}")]
    BadBandwidth(usize),

    #[error("oversampling parameter must be nonnegative, got {0}")]
    NegativeOversampling(String),

    #[error("grid length M(1+lambda) = {0} is not an integer")]
    NonIntegerGridLength(String),

    #[error("grid length {0} is odd")]
    OddGridLength(usize),

    #[error("truncation parameter m = {m} is too large for grid length {grid_len} (need 1 <= m and 2m <= L)")]
    TruncationTooLarge { m: usize, grid_len: usize },

    #[error("invalid oversampling parameter {0:?}")]
    BadRational(String),

    #[error("window shape parameter must be a positive finite number, got {0}")]
    BadShapeParameter(f64),

    #[error("window (m = {window_m}, L = {window_len}) does not match geometry (m = {m}, L = {grid_len})")]
    WindowMismatch {
        window_m: usize,
        window_len: usize,
        m: usize,
        grid_len: usize,
    },

    #[error("node at row {} has coordinate {coordinate} = {value} outside [{lower}, {upper}]", .node + 1)]
    NodeOutOfDomain {
        node: usize,
        coordinate: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },

    #[error("node at row {} has a non-finite coordinate", .node + 1)]
    NonFiniteNode { node: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("size guard exceeded: {what} = {size} > {limit}")]
    SizeGuardExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("quadrature did not converge at frequency {frequency}: last relative change {relative_change:e}")]
    QuadratureNotConverged {
        frequency: f64,
        relative_change: f64,
    },

    #[error("spectral factor vanishes at k = {k} (value {value:e})")]
    SpectralFactorVanishes { k: i64, value: f64 },

    #[error("shape parameter calibration degenerate: best error {best_error:e} exceeds 0.5")]
    CalibrationDegenerate { best_error: f64 },
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::QuadratureNotConverged { .. }
            | Error::SpectralFactorVanishes { .. }
            | Error::CalibrationDegenerate { .. } => ErrorClass::Numerical,
            _ => ErrorClass::Domain,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
