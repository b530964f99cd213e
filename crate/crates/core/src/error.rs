use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,

    #[error("division by zero")]
    DivisionByZero,

    #[error("operators belong to different Ore algebras")]
    MixedKinds,

    #[error("operation is undefined for the zero operator")]
    ZeroOperator,

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("operator is not in the left ideal generated by the divisor")]
    NotInIdeal,

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A hypothesis of one of the bounds fails; `at` names the offending field or witness.
    #[error("hypothesis violated at {at}: {what}")]
    Hypothesis { at: String, what: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("resource limit reached: {0}")]
    ResourceLimit(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn hypothesis(at: impl Into<String>, what: impl Into<String>) -> Self {
        Error::Hypothesis {
            at: at.into(),
            what: what.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
