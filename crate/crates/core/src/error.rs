use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different number fields ({0} vs {1})")]
    FieldMismatch(String, String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("polynomial {0} is reducible over Q")]
    Reducible(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("duplicate element {0}")]
    DuplicateElement(String),
    #[error("invalid set: {0}")]
    InvalidSet(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("value {value} of {element} lies outside codomain {codomain}")]
    NotInCodomain {
        element: String,
        value: String,
        codomain: String,
    },
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("unknown family {0}")]
    UnknownFamily(String),
    #[error("unknown universe tag {0}")]
    UnknownUniverse(String),
    #[error("unknown witness {0}")]
    UnknownWitness(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("lemma error: {0}")]
    Lemma(String),
    #[error("trace replay failed at step {step}: {reason}")]
    Replay { step: usize, reason: String },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("json error: {0}")]
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
