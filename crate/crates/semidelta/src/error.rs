use thiserror::Error;

/// Errors raised by the numerical pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("singular argument: {0}")]
    Singular(String),

    #[error("quadrature did not converge after {refinements} refinements (estimate {estimate:e}, achieved error {achieved:e})")]
    Tolerance {
        estimate: f64,
        achieved: f64,
        refinements: u32,
    },

    #[error("grids do not match: {0}")]
    GridMismatch(String),

    #[error("simulation box too small: mass {boundary:e} in the boundary layers")]
    BoxTooSmall { boundary: f64 },

    #[error("fit needs at least {needed} usable samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("regime violated: {0}")]
    Regime(String),
}

pub type Result<T> = std::result::Result<T, Error>;
