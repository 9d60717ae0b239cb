use thiserror::Error;

/// Errors produced by the analysis and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A numeric argument is outside its mathematical domain.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    /// Input data is missing, malformed, or insufficient.
    #[error("invalid data: {0}")]
    InvalidData(String),
    /// A configuration value is inconsistent or out of range.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    /// A binning layout cannot support the requested test.
    #[error("binning error: {0}")]
    Binning(String),
    /// A numerical routine failed to produce a usable result.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// The optimizer hit its iteration cap; the best point found is attached.
    #[error(
        "optimizer did not converge after {iterations} iterations; \
         best point: location={location:.6}, scale={scale:.6}, shape={shape:.6}, nll={nll:.6}"
    )]
    NonConvergence {
        location: f64,
        scale: f64,
        shape: f64,
        nll: f64,
        iterations: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
