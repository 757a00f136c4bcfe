use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid cone: {0}")]
    InvalidCone(String),

    #[error("k0 is not an interior point of the cone (dual generator {index} gives {value:e})")]
    NotInteriorPoint { index: usize, value: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("no functional in the dual cone bounds the objective from below")]
    NoBoundingFunctional,

    #[error("certificate failure: {clause}")]
    CertificateFailure { clause: String },

    #[error("search cap reached: {0}")]
    SearchCapReached(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown registry label `{0}`")]
    UnknownLabel(String),
}

impl Error {
    /// Short machine-readable tag, used in report records and exit reasons.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::InvalidInput(_) => "invalid_input",
            Error::InvalidCone(_) => "invalid_cone",
            Error::NotInteriorPoint { .. } => "not_interior_point",
            Error::NumericalFailure(_) => "numerical_failure",
            Error::HypothesisNotMet(_) => "hypothesis_not_met",
            Error::Precondition(_) => "precondition",
            Error::NoBoundingFunctional => "no_bounding_functional",
            Error::CertificateFailure { .. } => "certificate_failure",
            Error::SearchCapReached(_) => "search_cap_reached",
            Error::Parse(_) => "parse",
            Error::UnknownLabel(_) => "unknown_label",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
