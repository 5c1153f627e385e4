//! Reproducing kernels of H-harmonic function spaces on the unit ball.
//!
//! [`hypergeom`] provides the special functions, [`kernels`] the Poisson,
//! Szegő and weighted Bergman kernels in each series representation, and
//! [`oracle`] independent quadrature evaluators used to validate them.

pub mod error;
pub mod hypergeom;
pub mod kernels;
pub mod oracle;
pub mod point;
pub mod series;
pub mod validation;

pub use error::{Error, Result};
pub use kernels::{ExtonArgs, ImTable, Representation};
pub use oracle::QuadratureSpec;
pub use point::{BallPoint, KernelParams};
pub use series::{compensated_sum, EvalResult, NeumaierSum, SeriesConfig};
