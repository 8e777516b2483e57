use thiserror::Error;

/// Errors shared by every module in the crate.
///
/// Precondition violations that a theorem treats as *data* (for instance the
/// admissibility checks of [`crate::instance::validate_instance`]) are
/// reported through [`crate::instance::ValidationReport`], not through this
/// type; `Error` is reserved for calls that cannot produce a meaningful
/// result at all.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The function/modulus pair failed grid certification, so a refinement
    /// that assumes the pair refuses to run.
    #[error("uncertified function/modulus pair ({pair}): worst slack {worst_slack:e} at (x={x}, y={y}, t={t})")]
    Uncertified {
        pair: String,
        worst_slack: f64,
        x: f64,
        y: f64,
        t: f64,
    },
}

pub type Result<T> = core::result::Result<T, Error>;
