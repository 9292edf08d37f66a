use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain where the requested quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A propagator denominator vanishes (forward/backward singularity or rest frame).
    #[error("degenerate kinematics: {0}")]
    DegenerateKinematics(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
