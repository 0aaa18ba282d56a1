use thiserror::Error;

/// Errors raised anywhere in the engine. Validation failures carry the
/// violated invariant as text so the CLI can print it verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("unknown derivation `{0}`")]
    UnknownDerivation(String),
    #[error("second-order derivative required: {derivation} applied to derivative symbol `{symbol}`")]
    SecondOrderDerivativeRequired { derivation: String, symbol: String },
    #[error("context mismatch")]
    ContextMismatch,
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("invalid model `{model}`: {reason}")]
    InvalidModel { model: String, reason: String },
    #[error("symbol `{0}` has no value at a sample point")]
    NotEvaluable(String),
    #[error("spinor vanishes at sample point {0}")]
    ZeroSpinorAtPoint(usize),
    #[error("cone bracket requires a cone model")]
    NotACone,
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("non-invariant input: {0}")]
    NonInvariant(String),
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn invalid_model(model: &str, reason: impl Into<String>) -> Self {
        Error::InvalidModel { model: model.to_string(), reason: reason.into() }
    }
}
