use thiserror::Error;

use crate::coupling1d::Spectrum;
use crate::coupling2d::CouplingTensor;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mode index {index} exceeds the hard cap {cap}")]
    IndexOverflow { index: usize, cap: usize },

    #[error("non-finite value in the scaled Hermite table at (n, m) = ({n}, {m})")]
    NumericOverflow { n: usize, m: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("quadrature order {0} is outside 1..=2048")]
    OrderOutOfRange(usize),

    #[error("Newton iteration for Gauss-Hermite node {index} of order {order} did not converge")]
    NoConvergence { order: usize, index: usize },

    #[error(
        "mode cap {cap} reached with captured mass {:.12} (target {:.12})",
        .spectrum.captured_mass, 1.0 - .spectrum.epsilon
    )]
    PartialSpectrum { cap: usize, spectrum: Box<Spectrum> },

    #[error(
        "mode cap {cap} reached with captured mass {:.12} (target {:.12})",
        .tensor.captured_mass, 1.0 - .tensor.epsilon
    )]
    PartialTensor { cap: usize, tensor: Box<CouplingTensor> },

    #[error("quadratic form is not positive definite: gamma² = {gamma_sq} >= 4 ωx² ωy² = {bound}")]
    NotPositiveDefinite { gamma_sq: f64, bound: f64 },

    #[error("amplitude tensor is empty or carries no mass")]
    EmptyTensor,
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
