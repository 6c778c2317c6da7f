use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure categories shared by every module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A quadrature or series failed its convergence criterion.
    #[error("numerical non-convergence: {0}")]
    NonConvergence(String),

    /// No physical photon energy satisfies the resonance condition.
    #[error("kinematics error: {0}")]
    Kinematics(String),

    /// Inconsistent or degenerate configuration.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// Winding extraction could not settle on an integer.
    #[error("ambiguous winding number: {0}")]
    AmbiguousWinding(String),

    /// Zero or several channels fall within the resonance window.
    #[error("selection ambiguity: {0}")]
    SelectionAmbiguity(String),

    /// Sublevels are not energetically resolved.
    #[error("unresolvable sublevels: {0}")]
    Unresolvable(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
