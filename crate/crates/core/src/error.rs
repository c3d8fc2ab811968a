use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the toolkit. Every variant maps to a stable machine-readable
/// kind via [`Error::kind`], which the CLI prints as the first token of its
/// error line.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("s = {s} is within {radius:e} of the pole {nearest}")]
    PoleProximity {
        s: Complex64,
        nearest: Complex64,
        radius: f64,
    },

    #[error("outside domain: {0}")]
    Domain(String),

    #[error("regularity undefined: {0}")]
    UndefinedRegularity(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("degenerate: {0}")]
    Degenerate(String),

    #[error("resolution: {0}")]
    Resolution(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("numerical check failed: {0}")]
    Numerical(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::Invariant(_) => "invariant",
            Error::Parse(_) => "parse",
            Error::PoleProximity { .. } => "pole_proximity",
            Error::Domain(_) => "domain",
            Error::UndefinedRegularity(_) => "undefined_regularity",
            Error::Hypothesis(_) => "hypothesis",
            Error::Degenerate(_) => "degenerate",
            Error::Resolution(_) => "resolution",
            Error::Unsupported(_) => "unsupported",
            Error::Numerical(_) => "numerical",
        }
    }

    /// The message without its kind prefix.
    pub fn detail(&self) -> String {
        match self {
            Error::InvalidParameter(m)
            | Error::Invariant(m)
            | Error::Parse(m)
            | Error::Domain(m)
            | Error::UndefinedRegularity(m)
            | Error::Hypothesis(m)
            | Error::Degenerate(m)
            | Error::Resolution(m)
            | Error::Unsupported(m)
            | Error::Numerical(m) => m.clone(),
            Error::PoleProximity { .. } => self.to_string(),
        }
    }
}
