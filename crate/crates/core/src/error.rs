use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {0} is outside the supported range 3..=8")]
    DimensionOutOfRange(usize),

    #[error("graph has {0} vertices, at most 256 are supported")]
    TooManyVertices(usize),

    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(usize, usize),

    #[error("a clique exceeds {0} vertices")]
    CliqueTooLarge(usize),

    #[error("polytope validation failed: {0}")]
    Validation(String),

    #[error("colouring is improper: adjacent facets {0} and {1} share colour {2}")]
    ImproperColouring(usize, usize, usize),

    #[error("invalid colouring: {0}")]
    InvalidColouring(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("complex is disconnected")]
    Disconnected,

    #[error("no candidate colouring reproduces the published invariants for n = {0}")]
    NoMatchingColouring(usize),

    #[error("unsupported document version {found} (expected {expected})")]
    SchemaVersion { found: u32, expected: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
