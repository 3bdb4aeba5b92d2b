use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The composite quadrature did not reach its tolerance.
    #[error("quadrature did not converge after {refinements} refinements (last difference {last_difference:e}, tolerance {tolerance:e})")]
    QuadratureNonConvergence {
        refinements: u32,
        last_difference: f64,
        tolerance: f64,
    },

    /// A numerical guard tripped (vanishing pivot, failed decomposition).
    #[error("numerical error: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
