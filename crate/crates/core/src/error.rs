use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("point ({x}, {y}) lies outside the triangle moduli region")]
    OutsideModuliRegion { x: f64, y: f64 },

    #[error("degenerate facet {facet} of simplex")]
    DegenerateFacet { facet: usize },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("no interior degrees of freedom left after boundary elimination")]
    EmptyInterior,

    #[error("factorization failed at pivot {index} (value {value:e})")]
    Factorization { index: usize, value: f64 },

    #[error("eigensolver did not converge after {restarts} restarts (worst residual {residual:e})")]
    NoConvergence { restarts: usize, residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("vector has zero mass norm")]
    ZeroNorm,

    #[error("test vectors are not orthogonal (off-diagonal {value:e} at ({i}, {j}))")]
    NotOrthogonal { i: usize, j: usize, value: f64 },

    #[error("weight vanishes on the interior of the interval near x = {x}")]
    DisconnectedWeight { x: f64 },

    #[error("aspect ratio {ratio:e} exceeds the resolution guard {limit:e}")]
    AspectRatio { ratio: f64, limit: f64 },

    #[error("segment leaves the interior sampling region")]
    SegmentOutsideInterior,
}

impl Error {
    /// The numerics failed, as opposed to the inputs being rejected.
    pub fn is_solver_failure(&self) -> bool {
        matches!(self, Error::Factorization { .. } | Error::NoConvergence { .. })
    }

    pub(crate) fn invalid_arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
