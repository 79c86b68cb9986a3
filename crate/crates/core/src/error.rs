use thiserror::Error;

/// Errors produced by state construction, truncation, protocol evaluation and
/// report generation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Fock index: {0}")]
    InvalidIndex(String),

    #[error("mode count mismatch: expected {expected}, found {found}")]
    ModeMismatch { expected: usize, found: usize },

    #[error("state is not normalized (norm² = {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("support cap exceeded: {size} terms > {cap}")]
    SupportCapExceeded { size: usize, cap: usize },

    #[error("dense dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("operator is not a valid density operator: {0}")]
    InvalidOperator(String),

    #[error("delta must lie in (0, 1), got {0}")]
    DeltaOutOfRange(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("truncation retained zero probability mass (cutoff {cutoff})")]
    VacuousTruncation { cutoff: u64 },

    #[error("premise violated: {0}")]
    PremiseViolated(String),

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("input length n = {n} exceeds the limit {limit} for {what}")]
    TooLarge { what: &'static str, n: usize, limit: usize },

    #[error("referee rule cannot evaluate these messages: {0}")]
    IncompatibleReferee(String),

    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
