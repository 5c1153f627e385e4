//! Scalar special functions.

mod appell;
mod exton;
mod gauss;
mod gegenbauer;
mod pfq;
mod pochhammer;
mod radial;

pub use appell::appell_f1;
pub use exton::{exton_x9, x9_y_bound};
pub use gauss::gauss_2f1;
pub use gegenbauer::{gegenbauer, gegenbauer_sequence, zonal, zonal_from_invariants, zonal_sequence};
pub use pfq::{pfq, HypergeomParams};
pub use pochhammer::{
    gamma_ratio, ln_gamma_signed, ln_pochhammer, non_positive_integer, pochhammer, pochhammer_ratio,
    SignedLog,
};
pub use radial::s_m;
