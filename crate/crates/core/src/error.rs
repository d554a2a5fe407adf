use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("extension degree must be at least 1")]
    ZeroExtensionDegree,

    #[error("field size {p}^{e} exceeds the configured limit q <= {limit}")]
    FieldTooLarge { p: u32, e: u32, limit: u32 },

    #[error("invalid field modulus: {0}")]
    InvalidModulus(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,

    #[error("coefficient z^{requested} requested from a series known only up to z^{order}")]
    BeyondTruncation { requested: usize, order: usize },

    #[error("series has zero constant term and cannot be inverted")]
    NonUnitSeries,

    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertibleMod { value: String, modulus: String },

    #[error("{0} is not an irreducible monic polynomial")]
    NotIrreducible(String),

    #[error("hypothesis fails: {prime} divides {factor}")]
    Hypothesis { prime: String, factor: String },

    #[error("denominator of H_{n} does not clear: {detail}")]
    DenominatorDoesNotClear { n: usize, detail: String },

    #[error("coefficient bound violated: {0}")]
    BoundViolation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("limit exceeded: {0}")]
    LimitExceeded(String),
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not-prime",
            Error::ZeroExtensionDegree => "zero-extension-degree",
            Error::FieldTooLarge { .. } => "field-too-large",
            Error::InvalidModulus(_) => "invalid-modulus",
            Error::DivisionByZero => "division-by-zero",
            Error::ZeroInverse => "zero-inverse",
            Error::GcdOfZeros => "gcd-of-zeros",
            Error::BeyondTruncation { .. } => "beyond-truncation",
            Error::NonUnitSeries => "non-unit-series",
            Error::InvalidIndex(_) => "invalid-index",
            Error::Precondition(_) => "precondition",
            Error::NotInvertibleMod { .. } => "not-invertible",
            Error::NotIrreducible(_) => "not-irreducible",
            Error::Hypothesis { .. } => "hypothesis",
            Error::DenominatorDoesNotClear { .. } => "denominator-does-not-clear",
            Error::BoundViolation(_) => "bound-violation",
            Error::Parse(_) => "parse",
            Error::LimitExceeded(_) => "limit-exceeded",
        }
    }
}
