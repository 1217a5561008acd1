use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed document at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{location}: {message}")]
    Malformed { location: String, message: String },

    #[error("{location}: unknown feature `{feature}`")]
    UnknownFeature { location: String, feature: String },

    #[error("{location}: value does not match the {expected} kind of feature `{feature}`")]
    KindMismatch {
        location: String,
        feature: String,
        expected: &'static str,
    },

    #[error("{location}: duplicate vertex `{name}`")]
    DuplicateVertex { location: String, name: String },

    #[error("{location}: duplicate edge `{src}` -> `{dst}` in a simple graph")]
    DuplicateEdge {
        location: String,
        src: String,
        dst: String,
    },

    #[error("{location}: edge endpoint `{name}` is not a vertex")]
    DanglingEdge { location: String, name: String },

    #[error("duplicate feature dimension `{0}`")]
    DuplicateDimension(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("no colour dimension is designated")]
    NoColorDimension,

    #[error("feature `{0}` is not categorical and cannot act as the colour")]
    NotCategorical(String),

    #[error("`{0}` is not a value of the colour dimension")]
    UnknownColor(String),

    #[error("vertex set must not be empty: {0}")]
    EmptyVertexSet(&'static str),

    #[error("invalid criterion: {0}")]
    InvalidCriterion(String),

    #[error("feature vectors of include #{include} and exclude #{exclude} are identical")]
    Inseparable { include: usize, exclude: usize },

    #[error("schema has no feature dimensions to build a criterion from")]
    NoDimensions,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("enumeration of {requested} candidates exceeds the cap of {cap}")]
    CapExceeded { requested: u128, cap: u128 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}
