use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A cell vector had zero length where a direction was required.
    #[error("degenerate state: zero-length magnetization at cell {cell}")]
    DegenerateState { cell: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A BDF2 step was requested before a second history level exists.
    #[error("solver state error: {0}")]
    State(String),

    #[error("linear solver failed to converge after {iterations} iterations (relative residual {residual:.3e})")]
    SolverFailure { residual: f64, iterations: usize },

    /// Malformed snapshot or checkpoint bytes.
    #[error("decode error: {0}")]
    Decode(String),

    /// All images of a string coincide, so no arc-length parametrization exists.
    #[error("degenerate string: total arc length is zero")]
    DegenerateString,

    #[error("image {image}: {source}")]
    Image {
        image: usize,
        #[source]
        source: Box<Error>,
    },
}
