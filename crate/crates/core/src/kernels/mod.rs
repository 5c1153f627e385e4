//! The hyperbolic Poisson, Szegő and weighted Bergman kernels.

mod bergman;
mod im_table;
mod pair;
mod poisson;
mod szego;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::point::BallPoint;

pub use bergman::{
    bergman_coeff, bergman_triple_series, bergman_zonal_cached, bergman_zonal_series, TRIPLE_SERIES_RADIUS,
};
pub use im_table::{compute_im_table, ImTable, ImTableCache, DEFAULT_IM_DEPTH};
pub use pair::pair_integral_x9;
pub use poisson::poisson_h;
pub use szego::{szego, szego_diagonal, szego_finite_sum, szego_radial_f1, szego_x9};

/// Arguments of the `X₉` representation for a pair of points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtonArgs {
    /// `(|x|/(1+|x|²))²`
    pub x: f64,
    /// `2⟨x,y⟩/((1+|x|²)(1+|y|²))`
    pub y: f64,
    /// `(|y|/(1+|y|²))²`
    pub z: f64,
    /// `((1−|x|²)(1−|y|²)/((1+|x|²)(1+|y|²)))^{n−1}`
    pub prefactor: f64,
}

impl ExtonArgs {
    pub fn new(x: &BallPoint, y: &BallPoint, n: usize) -> Self {
        let (a, b) = (x.norm_sq(), y.norm_sq());
        let ln_pre = (n as f64 - 1.0) * ((-a).ln_1p() + (-b).ln_1p() - a.ln_1p() - b.ln_1p());
        Self {
            x: a / ((1.0 + a) * (1.0 + a)),
            y: 2.0 * x.dot(y) / ((1.0 + a) * (1.0 + b)),
            z: b / ((1.0 + b) * (1.0 + b)),
            prefactor: ln_pre.exp(),
        }
    }
}

/// Which series representation of the Szegő kernel to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Representation {
    X9,
    FiniteSum,
    RadialF1,
    Diagonal,
    Auto,
}

impl Representation {
    pub const ALL: [Representation; 5] = [
        Representation::X9,
        Representation::FiniteSum,
        Representation::RadialF1,
        Representation::Diagonal,
        Representation::Auto,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Representation::X9 => "x9",
            Representation::FiniteSum => "finite-sum",
            Representation::RadialF1 => "radial-f1",
            Representation::Diagonal => "diagonal",
            Representation::Auto => "auto",
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Representation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Representation::ALL
            .into_iter()
            .find(|r| r.label() == s)
            .ok_or_else(|| Error::domain(format!("unknown representation `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exton_args_stay_in_region() {
        let x = BallPoint::new(vec![0.99, 0.0, 0.0]).unwrap();
        let a = ExtonArgs::new(&x, &x, 3);
        assert!(a.x < 0.25 && a.z < 0.25 && a.y.abs() < 0.5);
        let o = BallPoint::origin(3);
        let a = ExtonArgs::new(&o, &o, 7);
        assert_eq!((a.x, a.y, a.z, a.prefactor), (0.0, 0.0, 0.0, 1.0));
    }

    #[test]
    fn representation_labels_round_trip() {
        for r in Representation::ALL {
            assert_eq!(r.label().parse::<Representation>().unwrap(), r);
        }
        assert!("quadrature".parse::<Representation>().is_err());
    }
}
