use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet sizes differ: {0} vs {1}")]
    AlphabetMismatch(usize, usize),

    #[error("truncation depths differ: {0} vs {1}")]
    DepthMismatch(usize, usize),

    #[error("tensor of alphabet {dim} and depth {depth} exceeds the storage cap")]
    TooLarge { dim: usize, depth: usize },

    #[error("letter {letter} out of range for alphabet of size {dim}")]
    LetterOutOfRange { letter: usize, dim: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),

    #[error("degenerate chord: start and end points coincide")]
    DegenerateChord,

    #[error("path is not closed")]
    NotClosed,

    #[error("point lies within {0} of the path trace")]
    OnTrace(f64),

    #[error("singular input: {0}")]
    Singular(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("need at least {needed} degrees, got {got}")]
    InsufficientDegrees { needed: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
