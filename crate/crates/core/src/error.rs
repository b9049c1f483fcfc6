use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("{what} of {requested} exceeds the cap of {cap}")]
    Resource {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("degree {degree} exceeds the maximum of {max}")]
    DegreeTooHigh { degree: usize, max: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("slot map is not injective: {0}")]
    Aliasing(String),

    #[error("unknown gadget `{0}`")]
    UnknownGadget(String),

    #[error("unknown gate op `{0}`")]
    UnknownGate(String),

    #[error("wire error: {0}")]
    Wire(String),

    #[error("gap condition violated: {0}")]
    GapCondition(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numeric conversion failed: {0}")]
    Conversion(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
