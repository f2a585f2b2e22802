use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("algebra level r={0} outside the supported range 1..=8")]
    InvalidLevel(u32),

    #[error("incompatible algebras: level {left} vs level {right}")]
    LevelMismatch { left: u8, right: u8 },

    #[error("element is singular (|z| = {norm:e})")]
    Singular { norm: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("pole at evaluation point: |z - c| = {distance:e}")]
    Pole { distance: f64 },

    #[error("branch cut proximity: {0}")]
    CutProximity(String),

    #[error("word `{word}` is not of the form a*(z-c)^n*b")]
    UnsupportedShape { word: String },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("step control failed: {0}")]
    StepControl(String),

    #[error("accuracy: {0}")]
    Accuracy(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Short machine-readable tag used in the CLI error report.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidLevel(_) => "invalid_level",
            Error::LevelMismatch { .. } => "level_mismatch",
            Error::Singular { .. } => "singular",
            Error::Unsupported(_) => "unsupported",
            Error::Syntax { .. } => "syntax",
            Error::Pole { .. } => "pole",
            Error::CutProximity(_) => "cut_proximity",
            Error::UnsupportedShape { .. } => "unsupported_shape",
            Error::NoConvergence { .. } => "no_convergence",
            Error::StepControl(_) => "step_control",
            Error::Accuracy(_) => "accuracy",
            Error::Domain(_) => "domain",
            Error::Invalid(_) => "invalid",
        }
    }

    /// Errors caused by malformed input rather than by the mathematics.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidLevel(_)
                | Error::LevelMismatch { .. }
                | Error::Syntax { .. }
                | Error::Invalid(_)
        )
    }
}
