use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroExtensionDegree,
    #[error("field of order {p}^{ell} is too large")]
    FieldTooLarge { p: u64, ell: u32 },
    #[error("element code {code} is out of range for a field of order {q}")]
    InvalidElement { code: u64, q: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operands live over different fields or dimensions")]
    FieldMismatch,
    #[error("point set is empty")]
    EmptySet,
    #[error("point {0:?} appears more than once")]
    DuplicatePoint(Vec<u32>),
    #[error("{ell} does not divide {n}")]
    NotDivisible { ell: usize, n: usize },
    #[error("parts do not sum to the target tuple")]
    BadDecomposition,
    #[error("guard `{guard}` exceeded: need {required}, limit {limit}")]
    GuardExceeded {
        guard: &'static str,
        required: u64,
        limit: u64,
    },
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
