//! Points of the open unit ball and the kernel parameters.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the open unit ball `Bⁿ` with its squared norm cached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallPoint {
    coords: Vec<f64>,
    norm_sq: f64,
}

impl BallPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::domain("a point needs at least one coordinate"));
        }
        if !coords.iter().all(|c| c.is_finite()) {
            return Err(Error::domain("non-finite coordinate"));
        }
        let norm_sq = coords.iter().map(|c| c * c).sum::<f64>();
        if norm_sq >= 1.0 {
            return Err(Error::domain(format!(
                "point lies outside the open unit ball (|x|² = {norm_sq})"
            )));
        }
        Ok(Self { coords, norm_sq })
    }

    pub fn origin(n: usize) -> Self {
        Self {
            coords: vec![0.0; n],
            norm_sq: 0.0,
        }
    }

    /// `(r, 0, …, 0)`.
    pub fn on_axis(n: usize, r: f64) -> Result<Self> {
        let mut c = vec![0.0; n];
        c[0] = r;
        Self::new(c)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.norm_sq
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq.sqrt()
    }

    pub fn is_origin(&self) -> bool {
        self.norm_sq == 0.0
    }

    pub fn dot(&self, other: &BallPoint) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum()
    }

    /// `|x − y|²`.
    pub fn dist_sq(&self, other: &BallPoint) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    /// `λx` for `|λ| ≤ 1`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::new(self.coords.iter().map(|c| lambda * c).collect())
    }
}

/// Dimension `n ≥ 3` and Bergman weight `s > −1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    pub n: usize,
    pub s: f64,
}

impl KernelParams {
    pub fn new(n: usize, s: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain(format!("dimension must be at least 3, got {n}")));
        }
        if !(s > -1.0) || !s.is_finite() {
            return Err(Error::domain(format!("weight s must exceed −1, got {s}")));
        }
        Ok(Self { n, s })
    }

    /// Parameters for the Hardy-space (Szegő) kernel, where `s` is unused.
    pub fn hardy(n: usize) -> Result<Self> {
        Self::new(n, 0.0)
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }

    /// Checks that `x` has `n` coordinates.
    pub fn check_point(&self, x: &BallPoint) -> Result<()> {
        if x.dim() != self.n {
            return Err(Error::domain(format!(
                "point has {} coordinates but n = {}",
                x.dim(),
                self.n
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_is_cached() {
        let p = BallPoint::new(vec![0.3, -0.4, 0.0]).unwrap();
        assert!((p.norm_sq() - 0.25).abs() < 1e-16);
        assert_eq!(p.norm(), 0.5);
        assert_eq!(p.dim(), 3);
    }

    #[test]
    fn rejects_outside_points() {
        assert!(BallPoint::new(vec![1.0, 0.0]).unwrap_err().is_domain());
        assert!(BallPoint::new(vec![]).is_err());
        assert!(BallPoint::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(KernelParams::new(2, 0.0).is_err());
        assert!(KernelParams::new(3, -1.0).is_err());
        assert!(KernelParams::new(3, -0.5).is_ok());
        let p = KernelParams::hardy(4).unwrap();
        assert!(p.check_point(&BallPoint::origin(3)).is_err());
    }
}
