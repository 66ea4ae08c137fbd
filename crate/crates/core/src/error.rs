use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} parse error at position {pos}: {msg}")]
    Parse {
        what: &'static str,
        pos: usize,
        msg: String,
    },

    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },

    #[error("expansion index must be positive")]
    ZeroIndex,

    #[error("vertex {0} does not exist in the tree")]
    InvalidVertex(String),

    #[error("leaf counts differ: {left} vs {right}")]
    LeafCountMismatch { left: usize, right: usize },

    #[error("enumeration of {n}-leaf trees exceeds the cap of {cap}")]
    EnumerationCap { n: usize, cap: usize },

    #[error("expected {expected} arguments, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("invalid piecewise-linear map: {0}")]
    InvalidPl(String),

    #[error("invalid magma: {0}")]
    InvalidMagma(String),

    #[error("tuple space of {tuples} exceeds the cost guard of {limit}")]
    CostGuard { tuples: u128, limit: u128 },

    #[error("a zero element is required")]
    NoZero,

    #[error("rewrite step does not match: {0}")]
    StepMismatch(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn parse(what: &'static str, pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            what,
            pos,
            msg: msg.into(),
        }
    }
}
