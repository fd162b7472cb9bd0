use thiserror::Error;

/// Library-wide error type.
///
/// Failures of *verification* are not errors: the verifier reports them as
/// structured results. Errors here are misuse (bad inputs, violated
/// preconditions) or genuine construction failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at offset {offset}: {msg}")]
    Parse { msg: String, offset: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("division by zero polynomial")]
    ZeroPolynomialDivisor,

    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("polynomial is unbounded below")]
    UnboundedBelow,

    #[error("derivative floor not certifiable: {0}")]
    DerivativeFloor(String),

    #[error("negative argument: {0}")]
    NegativeArgument(String),

    #[error("taylor depth {k} too small for argument {t}")]
    TaylorDepth { t: String, k: u32 },

    #[error("construction failed at stage {stage}: {msg}")]
    Construction { stage: usize, msg: String },

    #[error("evaluation point outside certified disk of radius {radius}")]
    OutsideDisk { radius: String },

    #[error("no registered preimage for {0}")]
    Unhandled(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
