use thiserror::Error;

use crate::series::EvalResult;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Inputs outside the region where the requested formula is defined
    /// (or where this implementation evaluates it).
    #[error("domain error: {0}")]
    Domain(String),

    /// The term, shell or node budget ran out before the tolerance was met.
    /// The partial result is carried along with `converged == false`.
    #[error(
        "no convergence after {} terms (partial value {:e}, tail estimate {:e})",
        partial.terms_used, partial.value, partial.tail_estimate
    )]
    NonConvergence { partial: EvalResult },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn non_convergence(value: f64, terms_used: usize, tail_estimate: f64) -> Self {
        Error::NonConvergence {
            partial: EvalResult {
                value,
                terms_used,
                tail_estimate,
                converged: false,
            },
        }
    }

    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_))
    }

    pub fn is_non_convergence(&self) -> bool {
        matches!(self, Error::NonConvergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
