use thiserror::Error;

/// Failures reported by the numerical routines.
///
/// Input problems (`InvalidArgument`, `OutOfRange`) are kept apart from
/// numerical failures so callers can tell a bad request from a computation
/// that did not reach its accuracy target.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} = {value} is outside the supported range [{min}, {max}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("accuracy not achieved: {0}")]
    AccuracyNotAchieved(String),

    #[error("root search failed: {0}")]
    RootNotFound(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
}

impl Error {
    /// True for failures of the computation itself, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::AccuracyNotAchieved(_) | Error::RootNotFound(_) | Error::DegenerateFit(_)
        )
    }

    /// Short stable identifier, used in machine-readable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid_argument",
            Error::OutOfRange { .. } => "out_of_range",
            Error::AccuracyNotAchieved(_) => "accuracy_not_achieved",
            Error::RootNotFound(_) => "root_not_found",
            Error::DegenerateFit(_) => "degenerate_fit",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(what: &'static str, value: f64, min: f64, max: f64) -> Result<()> {
    if value.is_finite() && value >= min && value <= max {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what,
            value,
            min,
            max,
        })
    }
}
