use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("amplitude vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("every party dimension must be at least 1, got {0:?}")]
    BadDimension(Vec<usize>),
    #[error("the set of kept parties is empty")]
    EmptyKeepSet,
    #[error("bad party set: {0}")]
    BadPartySet(String),
    #[error("party counts differ: {left} vs {right}")]
    PartyCountMismatch { left: usize, right: usize },
    #[error("bad grouping: {0}")]
    BadGrouping(String),
    #[error("bad rank: {0}")]
    BadRank(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operator for party {party} is not unitary (deviation {deviation:.3e})")]
    NonUnitary { party: usize, deviation: f64 },
    #[error("Kraus operators are not trace non-increasing (least eigenvalue of I - sum A^dag A is {0:.3e})")]
    NotTraceNonincreasing(f64),
    #[error("operator is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("operator is not positive semidefinite (least eigenvalue {0:.3e})")]
    NotPositive(f64),
    #[error("ensemble weight {0} exceeds 1")]
    Overweight(f64),
    #[error("ensemble members must be pure states")]
    NotPure,
    #[error("vectors have different sums: {0} vs {1}")]
    SumMismatch(f64, f64),
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("index `{index}` occurs {count} times, expected exactly 2")]
    IndexArity { index: String, count: usize },
    #[error("slot arity: {0}")]
    SlotArity(String),
    #[error("eps index `{index}` is bound to a party of dimension {dim}, eps needs dimension 2")]
    EpsDimension { index: String, dim: usize },
    #[error("expression is not in simple form: {0}")]
    NotSimpleForm(String),
    #[error("unsupported party structure: {0}")]
    PartyCountUnsupported(String),
    #[error("states have different party structures: {0}")]
    StructureMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("malformed JSON: {0}")]
    Json(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
