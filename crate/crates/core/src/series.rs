//! Truncation policy and bookkeeping shared by every infinite summation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation and tolerance policy for a series evaluation.
///
/// For multi-index series `max_terms` caps the total degree (the number of
/// shells), for single series it caps the number of terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_terms: usize,
}

impl SeriesConfig {
    pub fn new(rel_tol: f64, abs_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0) || !rel_tol.is_finite() {
            return Err(Error::domain(format!("rel_tol must be positive, got {rel_tol}")));
        }
        if !(abs_tol >= 0.0) || !abs_tol.is_finite() {
            return Err(Error::domain(format!("abs_tol must be non-negative, got {abs_tol}")));
        }
        if max_terms == 0 {
            return Err(Error::domain("max_terms must be at least 1"));
        }
        Ok(Self {
            rel_tol,
            abs_tol,
            max_terms,
        })
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }

    /// `max(rel_tol·|value|, abs_tol)`.
    #[inline]
    pub fn threshold(&self, value: f64) -> f64 {
        (self.rel_tol * value.abs()).max(self.abs_tol)
    }
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-14,
            abs_tol: 0.0,
            max_terms: 4000,
        }
    }
}

/// Value of a series together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: f64,
    pub terms_used: usize,
    pub tail_estimate: f64,
    pub converged: bool,
}

impl EvalResult {
    /// A value known exactly (closed form, terminating sum).
    pub fn exact(value: f64, terms_used: usize) -> Self {
        Self {
            value,
            terms_used,
            tail_estimate: 0.0,
            converged: true,
        }
    }

    /// Multiplies value and tail by a constant prefactor.
    pub fn scaled(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            tail_estimate: self.tail_estimate * factor.abs(),
            ..self
        }
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl std::iter::FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Sums an iterator with compensated accumulation.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<NeumaierSum>().value()
}

/// Stopping rule: the last three blocks (terms or total-degree shells) must
/// each be below tolerance, and the geometric extrapolation of their decay
/// must put the remaining tail below tolerance as well.
#[derive(Debug, Clone, Default)]
pub(crate) struct TailTracker {
    recent: [f64; 3],
    seen: usize,
}

impl TailTracker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records the magnitude of the latest block. Returns the tail estimate
    /// when the series may be declared converged at `total`.
    pub fn push(&mut self, block_magnitude: f64, total: f64, cfg: &SeriesConfig) -> Option<f64> {
        self.recent = [self.recent[1], self.recent[2], block_magnitude.abs()];
        self.seen += 1;
        if self.seen < 3 {
            return None;
        }
        let thr = cfg.threshold(total);
        if self.recent.iter().any(|&s| s > thr) {
            return None;
        }
        let tail = self.tail();
        (tail <= thr).then_some(tail)
    }

    /// Geometric extrapolation of the tail from the last three blocks.
    pub fn tail(&self) -> f64 {
        let [a, b, c] = self.recent;
        if c == 0.0 && b == 0.0 {
            return 0.0;
        }
        let mut rho: f64 = 0.0;
        for (prev, next) in [(a, b), (b, c)] {
            if prev > 0.0 {
                rho = rho.max(next / prev);
            } else if next > 0.0 {
                return f64::INFINITY;
            }
        }
        if rho < 1.0 {
            c * rho / (1.0 - rho)
        } else {
            f64::INFINITY
        }
    }

    /// Best available tail estimate for a truncated (non-converged) sum.
    pub fn last_tail(&self) -> f64 {
        let t = self.tail();
        if t.is_finite() {
            t
        } else {
            self.recent[2]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_cancelled_bits() {
        let mut acc = NeumaierSum::new();
        for x in [1.0, 1e100, 1.0, -1e100] {
            acc.add(x);
        }
        assert_eq!(acc.value(), 2.0);
    }

    #[test]
    fn config_validation() {
        assert!(SeriesConfig::new(0.0, 0.0, 10).is_err());
        assert!(SeriesConfig::new(1e-10, -1.0, 10).is_err());
        assert!(SeriesConfig::new(1e-10, 0.0, 0).is_err());
        assert!(SeriesConfig::new(1e-10, 0.0, 1).is_ok());
    }

    #[test]
    fn tracker_needs_three_small_blocks() {
        let cfg = SeriesConfig::default();
        let mut t = TailTracker::new();
        assert!(t.push(1.0, 1.0, &cfg).is_none());
        assert!(t.push(1e-20, 1.0, &cfg).is_none());
        // a single small block followed by a large one must not stop the sum
        assert!(t.push(1e-3, 1.0, &cfg).is_none());
        assert!(t.push(1e-20, 1.0, &cfg).is_none());
        assert!(t.push(1e-21, 1.0, &cfg).is_none());
        let tail = t.push(1e-22, 1.0, &cfg).unwrap();
        assert!(tail < 1e-22);
    }

    #[test]
    fn tracker_handles_terminated_series() {
        let cfg = SeriesConfig::default();
        let mut t = TailTracker::new();
        t.push(0.5, 1.0, &cfg);
        t.push(0.0, 1.0, &cfg);
        t.push(0.0, 1.0, &cfg);
        assert_eq!(t.push(0.0, 1.0, &cfg), Some(0.0));
    }
}
