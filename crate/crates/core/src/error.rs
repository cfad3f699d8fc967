use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field degree {0} is outside the supported range 2..=16")]
    DegreeOutOfRange(u32),

    #[error("modulus {modulus:#x} is not an irreducible polynomial of degree {n}")]
    NotIrreducible { n: u32, modulus: u32 },

    #[error("element {value:#x} does not belong to GF(2^{n})")]
    ElementOutOfRange { n: u32, value: u32 },

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("zero raised to a negative power")]
    ZeroNegativePower,

    #[error("{e} has no inverse modulo {m} (gcd = {gcd})")]
    NoInverse { e: u64, m: u64, gcd: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("hypothesis does not hold: {0}")]
    Hypothesis(String),

    #[error("over budget: {0}")]
    Budget(String),

    #[error("field mismatch: operands live in different fields")]
    FieldMismatch,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
