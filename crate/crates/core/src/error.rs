use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("incompatible cyclotomic orders {left} and {right}")]
    IncompatibleOrder { left: u32, right: u32 },

    #[error("invalid cyclotomic literal {literal:?}: {reason}")]
    Literal { literal: String, reason: String },

    #[error("basis index {index} out of range for local dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("local factor is the zero vector")]
    ZeroFactor,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid party structure: {0}")]
    InvalidParties(String),

    #[error("states {0} and {1} are not orthogonal")]
    NotOrthogonal(String, String),

    #[error("party {party} is not strippable: factors of {first} and {second} are not proportional")]
    NotStrippable {
        party: usize,
        first: String,
        second: String,
    },

    #[error("{family} requires {constraint} (got dims {dims:?})")]
    Inadmissible {
        family: String,
        constraint: String,
        dims: Vec<usize>,
    },

    #[error("hard-coded {family} list drifted from the generator at state {label}")]
    ConstructionDrift { family: String, label: String },

    #[error("unknown construction family {0:?}")]
    UnknownFamily(String),

    #[error("document error: {0}")]
    Document(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
