use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a supported prime")]
    InvalidPrime(u32),

    #[error("too large: {0}")]
    TooLarge(String),

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("quotient is not elementary abelian")]
    NotElementary,

    #[error("class is not transgressive: {0}")]
    NotTransgressive(String),

    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("invalid multiplicative system: {0}")]
    InvalidSystem(String),

    #[error("invalid defining system: {0}")]
    InvalidDefiningSystem(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown id: {0}")]
    UnknownId(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvariantViolation(_) => 1,
            Error::Parse(_) | Error::Json(_) => 3,
            Error::TooLarge(_) => 4,
            Error::UnknownId(_) => 5,
            Error::Io(_) => 6,
            _ => 7,
        }
    }
}
