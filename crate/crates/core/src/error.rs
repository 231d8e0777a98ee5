use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("modulus {0} is too large: its square overflows 64 bits")]
    ModulusTooLarge(u128),
    #[error("{a} is not invertible modulo {n}")]
    NotInvertible { a: i64, n: u64 },
    #[error("multiplier {v} is not a unit modulo {n}")]
    NotAUnit { v: i64, n: u64 },
    #[error("modulus mismatch: expected {expected}, found {found}")]
    ModulusMismatch { expected: u64, found: u64 },
    #[error("{v} is not an involution modulo {n}")]
    NotAnInvolution { v: u64, n: u64 },
    #[error("{0} is not a quasipolarity")]
    NotAQuasipolarity(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is odd")]
    OddModulus(u64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// An internal consistency check failed. Always a bug, never a data condition.
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
    #[error("{0} is not a marked strong dichotomy")]
    NotMarkedStrong(String),
    #[error("{dichotomy} has polarity {polarity}, not {given}")]
    PolarityMismatch {
        dichotomy: String,
        polarity: String,
        given: String,
    },
    #[error("modulus {n} exceeds the search cap {cap}")]
    ModulusCapExceeded { n: u64, cap: u64 },
    #[error("modulus {n} exceeds the oracle cap {cap}")]
    OracleCapExceeded { n: u64, cap: u64 },
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

impl Error {
    pub(crate) fn parse(input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}
