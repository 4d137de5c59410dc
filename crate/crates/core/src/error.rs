use thiserror::Error;

/// Errors raised by the exact and numerical layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero in K")]
    DivisionByZero,
    #[error("invalid field discriminant {0}: must be a positive square-free integer")]
    InvalidDelta(i64),
    #[error("operands live in different fields (delta {left} vs {right})")]
    MixedDelta { left: u64, right: u64 },
    #[error("shape mismatch: {0}")]
    BadShape(String),
    #[error("matrix is not hermitian (deviation {0})")]
    NotHermitian(String),
    #[error("gram matrix cannot be normalized: {0}")]
    NotNormalizable(String),
    #[error("wrong signature: expected ({expected_plus}, {expected_minus}, 0), found ({plus}, {minus}, {null})")]
    WrongSignature {
        expected_plus: usize,
        expected_minus: usize,
        plus: usize,
        minus: usize,
        null: usize,
    },
    #[error("point is not in the Siegel domain (min pivot {0})")]
    NotInDomain(f64),
    #[error("omega does not arise from a hermitian form: {0}")]
    InconsistentOmega(String),
    #[error("alpha is not in normalized form [E_n | z]: {0}")]
    NotNormalized(String),
    #[error("left n x n block of alpha is singular")]
    SingularLeadingBlock,
    #[error("Riemann form check failed: {0}")]
    RiemannCheckFailed(String),
    #[error("gamma is not a similitude of the form iT: {0}")]
    NotSimilitude(String),
    #[error("similitude multiplier {0} is not positive")]
    NonPositiveMultiplier(String),
    #[error("Cz + D is numerically singular (condition {0:e})")]
    SingularDenominator(f64),
    #[error("image left the Siegel domain (min pivot {0})")]
    LeftDomain(f64),
    #[error("exterior powers need signature (1, r-1) or (r-1, 1) with normalized gram, got n = {n}, r = {r}")]
    WrongSignatureN { n: usize, r: usize },
    #[error("exterior degree k = {k} out of range 1..={max}")]
    BadK { k: usize, max: usize },
    #[error("cannot parse input: {0}")]
    Parse(String),
    #[error("kernel gram disagrees with z^t conj(z) - E by {0:e}")]
    KernelGramMismatch(f64),
}

impl Error {
    /// Stable variant name, used in machine-readable CLI output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::InvalidDelta(_) => "InvalidDelta",
            Error::MixedDelta { .. } => "MixedDelta",
            Error::BadShape(_) => "BadShape",
            Error::NotHermitian(_) => "NotHermitian",
            Error::NotNormalizable(_) => "NotNormalizable",
            Error::WrongSignature { .. } => "WrongSignature",
            Error::NotInDomain(_) => "NotInDomain",
            Error::InconsistentOmega(_) => "InconsistentOmega",
            Error::NotNormalized(_) => "NotNormalized",
            Error::SingularLeadingBlock => "SingularLeadingBlock",
            Error::RiemannCheckFailed(_) => "RiemannCheckFailed",
            Error::NotSimilitude(_) => "NotSimilitude",
            Error::NonPositiveMultiplier(_) => "NonPositiveMultiplier",
            Error::SingularDenominator(_) => "SingularDenominator",
            Error::LeftDomain(_) => "LeftDomain",
            Error::WrongSignatureN { .. } => "WrongSignatureN",
            Error::BadK { .. } => "BadK",
            Error::KernelGramMismatch(_) => "KernelGramMismatch",
            Error::Parse(_) => "Parse",
        }
    }

    /// Malformed or ill-shaped input, as opposed to a mathematical failure.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_) | Error::BadShape(_) | Error::InvalidDelta(_) | Error::MixedDelta { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
