use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("matrix is not Hermitian (asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("not positive semi-definite (min eigenvalue {0:.3e})")]
    NotPositive(f64),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("non-finite entry in input")]
    NonFinite,

    #[error("invalid rank {rank} for dimension {dim}")]
    BadRank { rank: usize, dim: usize },

    #[error("spectrum is not commensurate with period: gap deviates by {deviation:.3e}")]
    NotCommensurate { deviation: f64 },

    #[error("invalid energy levels: {0}")]
    InvalidLevels(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("convolution support of {0} points exceeds cap {1}")]
    SupportOverflow(u64, u64),

    #[error("period mismatch: {0}")]
    PeriodMismatch(String),

    #[error("state is stationary (zero energy variance)")]
    Stationary,

    #[error("state is not periodic with the base period (period divisor {0})")]
    NotPeriodic(u64),

    #[error("ensemble violates period hypotheses: {0}")]
    EnsemblePeriodViolation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Variant name, used when surfacing errors from the command line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(..) => "DimensionMismatch",
            Error::NotSquare(..) => "NotSquare",
            Error::NotHermitian(_) => "NotHermitian",
            Error::NoConvergence(_) => "NoConvergence",
            Error::InvalidTrace(_) => "InvalidTrace",
            Error::NotPositive(_) => "NotPositive",
            Error::NotNormalized(_) => "NotNormalized",
            Error::NonFinite => "NonFinite",
            Error::BadRank { .. } => "BadRank",
            Error::NotCommensurate { .. } => "NotCommensurate",
            Error::InvalidLevels(_) => "InvalidLevels",
            Error::InvalidDistribution(_) => "InvalidDistribution",
            Error::SupportOverflow(..) => "SupportOverflow",
            Error::PeriodMismatch(_) => "PeriodMismatch",
            Error::Stationary => "Stationary",
            Error::NotPeriodic(_) => "NotPeriodic",
            Error::EnsemblePeriodViolation(_) => "EnsemblePeriodViolation",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
