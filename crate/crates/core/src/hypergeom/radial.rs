//! The radial factor `S_m(t)` of the zonal expansions.

use super::gauss::gauss_2f1;
use super::pochhammer::pochhammer_ratio;
use crate::error::{Error, Result};
use crate::series::{EvalResult, SeriesConfig};

/// `S_m(t) = (n−1)_m/(n/2)_m · ₂F₁(m, 1−n/2; m+n/2; t)` for `0 ≤ t ≤ 1`.
///
/// For even `n` the ₂F₁ is a polynomial of degree `n/2 − 1`.
pub fn s_m(m: usize, n: usize, t: f64, cfg: &SeriesConfig) -> Result<EvalResult> {
    if n < 3 {
        return Err(Error::domain(format!("dimension must be at least 3, got {n}")));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::domain(format!("S_m needs 0 ≤ t ≤ 1, got {t}")));
    }
    let nf = n as f64;
    let mf = m as f64;
    let lead = pochhammer_ratio(nf - 1.0, nf / 2.0, m);
    Ok(gauss_2f1(mf, 1.0 - nf / 2.0, mf + nf / 2.0, t, cfg)?.scaled(lead))
}
