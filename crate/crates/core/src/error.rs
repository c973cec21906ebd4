use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("duplicate class `{0}`")]
    DuplicateClass(String),

    #[error("inheritance cycle: {}", .0.join(" -> "))]
    InheritanceCycle(Vec<String>),

    #[error("unknown class `{0}`")]
    UnknownClass(String),

    #[error("invalid facts: {0}")]
    InvalidFacts(String),

    #[error("syntax error at line {line}: expected {}", .expected.join(" | "))]
    Syntax { line: usize, expected: Vec<String> },

    #[error("source is not valid UTF-8: {0}")]
    Encoding(String),

    #[error("unbalanced block at line {0}")]
    UnbalancedBlock(usize),

    #[error("malformed control-flow graph: {0}")]
    MalformedGraph(String),

    #[error("degenerate system: {0}")]
    DegenerateSystem(String),

    #[error("{variant} is undefined: {reason}")]
    Undefined { variant: String, reason: String },

    #[error("model contains no system classes")]
    EmptyModel,

    #[error("missing property {property} needed by {index}")]
    MissingProperty { index: String, property: String },

    #[error("unknown metric mnemonic `{0}`")]
    UnknownMnemonic(String),

    #[error("record has no value for `{0}`")]
    MissingMetric(String),

    #[error("value outside formula domain: {0}")]
    Domain(String),

    #[error("bad version range {j}..{k} for history of {len} versions")]
    BadRange { j: usize, k: usize, len: usize },

    #[error("degenerate baseline: {0}")]
    DegenerateBaseline(String),

    #[error("baseline mismatch: {0}")]
    BaselineMismatch(String),

    #[error("no input files")]
    NoInput,

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("expected {expected} kiviat axes, got {got}")]
    WrongAxisCount { expected: usize, got: usize },

    #[error("{0}")]
    Io(String),

    #[error("json: {0}")]
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
