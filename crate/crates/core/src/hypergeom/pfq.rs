//! Generalized hypergeometric series `pFq`.

use super::pochhammer::non_positive_integer;
use crate::error::{Error, Result};
use crate::series::{EvalResult, NeumaierSum, SeriesConfig};

/// Upper and lower parameters plus the argument of a `pFq`.
#[derive(Debug, Clone, PartialEq)]
pub struct HypergeomParams {
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
    pub argument: f64,
}

impl HypergeomParams {
    pub fn new(upper: Vec<f64>, lower: Vec<f64>, argument: f64) -> Result<Self> {
        if let Some(b) = lower.iter().find(|b| non_positive_integer(**b).is_some()) {
            return Err(Error::domain(format!(
                "lower parameter {b} is zero or a negative integer"
            )));
        }
        if upper.iter().chain(&lower).any(|v| !v.is_finite()) || !argument.is_finite() {
            return Err(Error::domain("non-finite hypergeometric parameter"));
        }
        Ok(Self {
            upper,
            lower,
            argument,
        })
    }

    /// Degree of the polynomial when some upper parameter is a
    /// non-positive integer.
    pub fn terminating_degree(&self) -> Option<u64> {
        self.upper.iter().filter_map(|a| non_positive_integer(*a)).min()
    }
}

/// `pFq(a_1..a_p; b_1..b_q; z)` by direct summation.
///
/// Terminating series are summed exactly whatever `z` is. Otherwise `p ≤ q`
/// converges everywhere and `p = q + 1` needs `|z| < 1`.
pub fn pfq(params: &HypergeomParams, cfg: &SeriesConfig) -> Result<EvalResult> {
    sum_series(&params.upper, &params.lower, params.argument, cfg)
}

/// Direct summation engine shared by `pfq` and `gauss_2f1`.
///
/// Lower parameters may be non-positive integers only if the series
/// terminates before the zero denominator is reached.
pub(crate) fn sum_series(
    upper: &[f64],
    lower: &[f64],
    z: f64,
    cfg: &SeriesConfig,
) -> Result<EvalResult> {
    let degree = upper.iter().filter_map(|a| non_positive_integer(*a)).min();
    for &b in lower {
        if let Some(k) = non_positive_integer(b) {
            if degree.map_or(true, |d| d > k) {
                return Err(Error::domain(format!(
                    "lower parameter {b} hits a zero denominator before the series terminates"
                )));
            }
        }
    }
    if z == 0.0 {
        return Ok(EvalResult::exact(1.0, 1));
    }
    if let Some(d) = degree {
        return Ok(terminating(upper, lower, z, d as usize));
    }
    let p = upper.len();
    let q = lower.len();
    if p > q + 1 {
        return Err(Error::domain(format!(
            "{p}F{q} diverges for every nonzero argument unless it terminates"
        )));
    }
    if p == q + 1 && z.abs() >= 1.0 {
        return Err(Error::domain(format!(
            "{p}F{q} series needs |z| < 1, got z = {z}"
        )));
    }

    let pairing = Pairing::new(upper, lower);
    let mut term = 1.0;
    let mut acc = NeumaierSum::new();
    acc.add(term);
    let mut last_bound = f64::INFINITY;
    for m in 0..cfg.max_terms {
        let k = m as f64;
        let mut ratio = z / (k + 1.0);
        for a in upper {
            ratio *= a + k;
        }
        for b in lower {
            ratio /= b + k;
        }
        term *= ratio;
        acc.add(term);
        let total = acc.value();
        if let Some(bound) = pairing.ratio_bound(z, k + 1.0) {
            if bound < 1.0 {
                last_bound = term.abs() * bound / (1.0 - bound);
                if last_bound <= cfg.threshold(total) {
                    return Ok(EvalResult {
                        value: total,
                        terms_used: m + 2,
                        tail_estimate: last_bound,
                        converged: true,
                    });
                }
            }
        }
        if term == 0.0 {
            return Ok(EvalResult::exact(total, m + 2));
        }
    }
    let tail = if last_bound.is_finite() {
        last_bound
    } else {
        term.abs()
    };
    Err(Error::non_convergence(acc.value(), cfg.max_terms + 1, tail))
}

fn terminating(upper: &[f64], lower: &[f64], z: f64, degree: usize) -> EvalResult {
    let mut term = 1.0;
    let mut acc = NeumaierSum::new();
    acc.add(term);
    for m in 0..degree {
        let k = m as f64;
        let mut ratio = z / (k + 1.0);
        for a in upper {
            ratio *= a + k;
        }
        for b in lower {
            ratio /= b + k;
        }
        term *= ratio;
        acc.add(term);
    }
    EvalResult::exact(acc.value(), degree + 1)
}

/// Upper bound on `|t_{k+1}/t_k|` that is non-increasing in `k`, obtained by
/// pairing the largest upper parameters with the largest lower ones.
struct Pairing {
    pairs: Vec<(f64, f64)>,
    unpaired_lower: Vec<f64>,
    unpaired_upper: Vec<f64>,
}

impl Pairing {
    fn new(upper: &[f64], lower: &[f64]) -> Self {
        let mut up: Vec<f64> = upper.to_vec();
        // k + 1 acts as an extra lower parameter equal to 1
        let mut low: Vec<f64> = lower.iter().copied().chain(std::iter::once(1.0)).collect();
        up.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
        low.sort_by(|a, b| b.total_cmp(a));
        let n = up.len().min(low.len());
        Self {
            pairs: up.iter().copied().zip(low.iter().copied()).take(n).collect(),
            unpaired_lower: low[n..].to_vec(),
            unpaired_upper: up[n..].to_vec(),
        }
    }

    fn ratio_bound(&self, z: f64, k: f64) -> Option<f64> {
        if !self.unpaired_upper.is_empty() {
            return None;
        }
        let denom = |b: f64| if b >= 0.0 { b + k } else { k - b.abs() };
        let mut bound = z.abs();
        for &(a, b) in &self.pairs {
            let d = denom(b);
            if d <= 0.0 {
                return None;
            }
            bound *= ((a.abs() + k) / d).max(1.0);
        }
        for &b in &self.unpaired_lower {
            let d = denom(b);
            if d <= 0.0 {
                return None;
            }
            bound /= d;
        }
        Some(bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergeom::pochhammer::gamma_ratio;
    use approx::assert_relative_eq;

    fn cfg() -> SeriesConfig {
        SeriesConfig::default()
    }

    #[test]
    fn zero_argument() {
        let p = HypergeomParams::new(vec![], vec![1.5], 0.0).unwrap();
        assert_eq!(pfq(&p, &cfg()).unwrap().value, 1.0);
    }

    #[test]
    fn zero_f1_brute_force() {
        // Σ z^k/((1.5)_k k!) at z = 0.25, thirty terms by hand
        let mut t = 1.0f64;
        let mut s = 1.0f64;
        for k in 0..30 {
            t *= 0.25 / ((1.5 + k as f64) * (k as f64 + 1.0));
            s += t;
        }
        let p = HypergeomParams::new(vec![], vec![1.5], 0.25).unwrap();
        let r = pfq(&p, &cfg()).unwrap();
        assert_relative_eq!(r.value, s, max_relative = 1e-13);
        // ₀F₁(3/2; z²/4) = sinh(z)/z
        assert_relative_eq!(r.value, 1f64.sinh(), max_relative = 1e-13);
        assert!(r.converged && r.tail_estimate <= 1e-14 * r.value);
    }

    #[test]
    fn four_f_three_at_minus_one() {
        let (a, b, c) = (2.5, -1.0, -1.0);
        let p = HypergeomParams::new(
            vec![a, 1.0 + a / 2.0, b, c],
            vec![a / 2.0, 1.0 + a - b, 1.0 + a - c],
            -1.0,
        )
        .unwrap();
        let r = pfq(&p, &cfg()).unwrap();
        let rhs = gamma_ratio(&[1.0 + a - b, 1.0 + a - c], &[1.0 + a, 1.0 + a - b - c]).unwrap();
        assert_relative_eq!(r.value, rhs, max_relative = 1e-14);
        assert_relative_eq!(r.value, 3.5 / 4.5, max_relative = 1e-14);
    }

    #[test]
    fn rejects_bad_lower_and_divergence() {
        assert!(HypergeomParams::new(vec![1.0], vec![-2.0], 0.5).is_err());
        let p = HypergeomParams::new(vec![1.0, 1.0, 1.0], vec![2.0], 0.5).unwrap();
        assert!(pfq(&p, &cfg()).unwrap_err().is_domain());
        let p = HypergeomParams::new(vec![1.0, 1.0], vec![2.0], 1.5).unwrap();
        assert!(pfq(&p, &cfg()).unwrap_err().is_domain());
        // terminating polynomials are fine anywhere
        let p = HypergeomParams::new(vec![-2.0, 1.0, 1.0], vec![2.0], 7.0).unwrap();
        assert!(pfq(&p, &cfg()).is_ok());
    }

    #[test]
    fn cap_reports_non_convergence() {
        let p = HypergeomParams::new(vec![1.0, 1.0], vec![2.0], 0.999).unwrap();
        let err = pfq(&p, &cfg().with_max_terms(20)).unwrap_err();
        match err {
            Error::NonConvergence { partial } => {
                assert!(!partial.converged);
                assert!(partial.terms_used <= 21);
            }
            e => panic!("unexpected {e:?}"),
        }
    }
}
