//! Gauss hypergeometric function `₂F₁(a, b; c; z)` on `z ≤ 1`.

use super::pfq::sum_series;
use super::pochhammer::{gamma_ratio, non_positive_integer};
use crate::error::{Error, Result};
use crate::series::{EvalResult, NeumaierSum, SeriesConfig};
use statrs::function::gamma::digamma;

/// Above this argument the `z ↦ 1 − z` connection formulas replace direct
/// summation.
const NEAR_ONE: f64 = 0.9;

/// Tolerance for treating `c − a − b` as an integer.
const INTEGER_GAP_TOL: f64 = 1e-12;

/// `₂F₁(a, b; c; z)`.
///
/// * terminating (`a` or `b` in {0, −1, …}): exact polynomial, any `z`;
/// * `z < 0`: Pfaff transformation into `[0, 1)`;
/// * `0 ≤ z ≤ 0.9`: direct summation;
/// * `0.9 < z < 1`: connection formulas around `z = 1`, unless large
///   parameters make them cancel and direct summation is affordable;
/// * `z = 1`: Gauss's summation theorem when `c − a − b > 0`;
/// * `z > 1` is rejected.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64, cfg: &SeriesConfig) -> Result<EvalResult> {
    if ![a, b, c, z].iter().all(|v| v.is_finite()) {
        return Err(Error::domain("non-finite ₂F₁ argument"));
    }
    if z == 0.0 || is_terminating(a, b) {
        return sum_series(&[a, b], &[c], z, cfg);
    }
    if non_positive_integer(c).is_some() {
        return Err(Error::domain(format!(
            "₂F₁ lower parameter c = {c} is a non-positive integer"
        )));
    }
    if z < 0.0 {
        return pfaff(a, b, c, z, cfg);
    }
    if z < 1.0 {
        if z > NEAR_ONE && !prefer_direct(a, b, z, cfg) {
            if let Some(r) = near_one(a, b, c, z, cfg)? {
                return Ok(r);
            }
        }
        return sum_series(&[a, b], &[c], z, cfg);
    }
    if z == 1.0 && c - a - b > 0.0 {
        let v = gamma_ratio(&[c, c - a - b], &[c - a, c - b])
            .ok_or_else(|| Error::domain("Gauss sum hit a gamma pole"))?;
        return Ok(EvalResult::exact(v, 1));
    }
    Err(Error::domain(format!(
        "₂F₁({a}, {b}; {c}; {z}) requires analytic continuation beyond z = 1"
    )))
}

/// The connection series in `1 − z` cancel like `exp((|a|+|b|)(1−z))`; when
/// that is noticeable and direct summation fits in half the budget, sum
/// directly instead.
fn prefer_direct(a: f64, b: f64, z: f64, cfg: &SeriesConfig) -> bool {
    let w = 1.0 - z;
    let direct_terms = cfg.rel_tol.max(1e-17).ln() / z.ln();
    (a.abs() + b.abs()) * w > 1.0 && direct_terms <= 0.5 * cfg.max_terms as f64
}

fn is_terminating(a: f64, b: f64) -> bool {
    non_positive_integer(a).is_some() || non_positive_integer(b).is_some()
}

/// `₂F₁(a,b;c;z) = (1−z)^{−a} ₂F₁(a, c−b; c; z/(z−1))`, or the mirror image
/// with `a` and `b` swapped when that one terminates.
fn pfaff(a: f64, b: f64, c: f64, z: f64, cfg: &SeriesConfig) -> Result<EvalResult> {
    let w = z / (z - 1.0);
    let (keep, other, scale) = if non_positive_integer(c - a).is_some()
        && non_positive_integer(c - b).is_none()
    {
        (b, c - a, (1.0 - z).powf(-b))
    } else {
        (a, c - b, (1.0 - z).powf(-a))
    };
    let inner = gauss_2f1(keep, other, c, w, cfg)?;
    Ok(inner.scaled(scale))
}

/// Connection formulas for `0.9 < z < 1`. Returns `Ok(None)` when the gap
/// `c − a − b` is so close to an integer that the non-integer formula is
/// ill-conditioned but not exactly integral; the caller then sums directly.
fn near_one(a: f64, b: f64, c: f64, z: f64, cfg: &SeriesConfig) -> Result<Option<EvalResult>> {
    let gap = c - a - b;
    let rounded = gap.round();
    if (gap - rounded).abs() <= INTEGER_GAP_TOL * gap.abs().max(1.0) {
        let k = rounded as i64;
        if k < 0 {
            // Euler: F(a,b;c;z) = (1−z)^{c−a−b} F(c−a, c−b; c; z), gap −k
            return Ok(integer_gap(c - a, c - b, (-k) as u32, z, cfg)?
                .map(|r| r.scaled((1.0 - z).powf(gap))));
        }
        return integer_gap(a, b, k as u32, z, cfg);
    }
    if (gap - rounded).abs() < 1e-6 {
        return Ok(None);
    }
    let w = 1.0 - z;
    let coef1 = gamma_ratio(&[c, gap], &[c - a, c - b]);
    let coef2 = gamma_ratio(&[c, -gap], &[a, b]);
    let (Some(coef1), Some(coef2)) = (coef1, coef2) else {
        return Ok(None);
    };
    let f1 = if coef1 != 0.0 {
        sum_series(&[a, b], &[1.0 - gap], w, cfg)?
    } else {
        EvalResult::exact(0.0, 0)
    };
    let f2 = if coef2 != 0.0 {
        sum_series(&[c - a, c - b], &[gap + 1.0], w, cfg)?
    } else {
        EvalResult::exact(0.0, 0)
    };
    let wg = w.powf(gap);
    let mut acc = NeumaierSum::new();
    acc.add(coef1 * f1.value);
    acc.add(coef2 * wg * f2.value);
    Ok(Some(EvalResult {
        value: acc.value(),
        terms_used: f1.terms_used + f2.terms_used,
        tail_estimate: coef1.abs() * f1.tail_estimate + (coef2 * wg).abs() * f2.tail_estimate,
        converged: true,
    }))
}

/// `c = a + b + k` with `k ∈ {0, 1, 2, …}`: the logarithmic case
///
/// F = Γ(k)Γ(c)/(Γ(a+k)Γ(b+k)) Σ_{j<k} (a)_j(b)_j/(j!(1−k)_j) (1−z)^j
///   − (z−1)^k Γ(c)/(Γ(a)Γ(b)) Σ_{j≥0} (a+k)_j(b+k)_j/(j!(j+k)!) (1−z)^j
///       × [ln(1−z) − ψ(j+1) − ψ(j+k+1) + ψ(a+k+j) + ψ(b+k+j)].
fn integer_gap(a: f64, b: f64, k: u32, z: f64, cfg: &SeriesConfig) -> Result<Option<EvalResult>> {
    if is_terminating(a, b) {
        return Ok(None);
    }
    let w = 1.0 - z;
    let kf = f64::from(k);
    let c = a + b + kf;

    let mut finite = NeumaierSum::new();
    if k > 0 {
        let Some(coef) = gamma_ratio(&[kf, c], &[a + kf, b + kf]) else {
            return Ok(None);
        };
        let mut t = 1.0;
        for j in 0..k {
            finite.add(coef * t);
            let jf = f64::from(j);
            t *= (a + jf) * (b + jf) * w / ((jf + 1.0) * (1.0 - kf + jf));
        }
    }

    let Some(log_coef) = gamma_ratio(&[c], &[a, b]) else {
        return Ok(None);
    };
    // (z − 1)^k = (−w)^k
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let prefactor = -sign * w.powi(k as i32) * log_coef;

    let ln_w = w.ln();
    // ψ values advanced by ψ(x + 1) = ψ(x) + 1/x
    let mut psi_j1 = digamma(1.0);
    let mut psi_jk1 = digamma(kf + 1.0);
    let mut psi_ak = digamma(a + kf);
    let mut psi_bk = digamma(b + kf);
    let mut coef = 1.0 / factorial(k);
    let mut series = NeumaierSum::new();
    let mut converged = false;
    let mut terms = 0usize;
    let mut tail = f64::INFINITY;
    let mut small_run = 0;
    for j in 0..cfg.max_terms {
        let jf = j as f64;
        let term = coef * (ln_w - psi_j1 - psi_jk1 + psi_ak + psi_bk);
        series.add(term);
        terms = j + 1;
        let scaled_term = (prefactor * term).abs();
        let total = finite.value() + prefactor * series.value();
        if scaled_term <= cfg.threshold(total) {
            small_run += 1;
            // |w| < 0.1 so the terms decay at least geometrically by ~w
            tail = scaled_term * w / (1.0 - w);
            if small_run >= 3 && tail <= cfg.threshold(total) {
                converged = true;
                break;
            }
        } else {
            small_run = 0;
        }
        coef *= (a + kf + jf) * (b + kf + jf) * w / ((jf + 1.0) * (jf + kf + 1.0));
        psi_j1 += 1.0 / (jf + 1.0);
        psi_jk1 += 1.0 / (jf + kf + 1.0);
        psi_ak += 1.0 / (a + kf + jf);
        psi_bk += 1.0 / (b + kf + jf);
    }
    let mut acc = finite;
    acc.add(prefactor * series.value());
    if !converged {
        return Err(Error::non_convergence(acc.value(), terms, tail));
    }
    Ok(Some(EvalResult {
        value: acc.value(),
        terms_used: terms + k as usize,
        tail_estimate: tail,
        converged: true,
    }))
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg() -> SeriesConfig {
        SeriesConfig::default()
    }

    fn f(a: f64, b: f64, c: f64, z: f64) -> f64 {
        gauss_2f1(a, b, c, z, &cfg()).unwrap().value
    }

    #[test]
    fn trivial_argument() {
        assert_eq!(f(1.3, -0.7, 2.9, 0.0), 1.0);
    }

    #[test]
    fn log_closed_form() {
        // −ln(1−z)/z
        assert_relative_eq!(f(1.0, 1.0, 2.0, 0.5), 1.386_294_361_119_890_6, max_relative = 1e-13);
        for &z in &[0.2, 0.7, 0.93, 0.99, 0.9999, -0.5, -4.0, -30.0] {
            let exact = -(1.0f64 - z).ln() / z;
            assert_relative_eq!(f(1.0, 1.0, 2.0, z), exact, max_relative = 1e-13);
        }
    }

    #[test]
    fn terminating_sum_exact() {
        // 1 + 0.3 + 0.0081
        assert_relative_eq!(f(-2.5, -2.0, 1.5, 0.09), 1.3081, max_relative = 1e-13);
        // terminating with large negative argument: (1 − z)^2 expanded
        assert_relative_eq!(f(-2.0, 1.0, 1.0, -7.0), 64.0, max_relative = 1e-13);
    }

    #[test]
    fn binomial_closed_form_everywhere() {
        // ₂F₁(a, b; b; z) = (1 − z)^{−a}
        for &z in &[0.3, 0.95, 0.999, -0.4, -12.0] {
            assert_relative_eq!(f(0.7, 1.9, 1.9, z), (1.0f64 - z).powf(-0.7), max_relative = 1e-12);
        }
    }

    #[test]
    fn gauss_sum_at_one() {
        // ₂F₁(1, −1/2; 5/2; 1) = Γ(5/2)Γ(2)/(Γ(3/2)Γ(3)) = 3/4
        assert_relative_eq!(f(1.0, -0.5, 2.5, 1.0), 0.75, max_relative = 1e-13);
        // approaching 1 through the connection formula agrees with the limit
        assert_relative_eq!(f(1.0, -0.5, 2.5, 1.0 - 1e-12), 0.75, max_relative = 1e-9);
    }

    #[test]
    fn non_integer_gap_connection() {
        // arcsin: ₂F₁(1/2, 1/2; 3/2; x²) = asin(x)/x, gap = 1/2
        for &x in &[0.96f64, 0.99, 0.999] {
            assert_relative_eq!(f(0.5, 0.5, 1.5, x * x), x.asin() / x, max_relative = 1e-13);
        }
    }

    #[test]
    fn negative_integer_gap_goes_through_euler() {
        // ₂F₁(2, 1; 1; z) = (1−z)^{−2}, gap −2
        assert_relative_eq!(f(2.0, 1.5, 1.5, 0.97), (0.03f64).powi(-2), max_relative = 1e-11);
    }

    #[test]
    fn domain_errors() {
        assert!(gauss_2f1(1.0, 1.0, 2.0, 1.5, &cfg()).unwrap_err().is_domain());
        assert!(gauss_2f1(1.0, 1.0, 2.0, 1.0, &cfg()).unwrap_err().is_domain());
        assert!(gauss_2f1(1.0, 1.0, -3.0, 0.5, &cfg()).unwrap_err().is_domain());
        // c a negative integer is fine when the series stops first
        assert!(gauss_2f1(-2.0, 1.0, -3.0, 0.5, &cfg()).is_ok());
        assert!(gauss_2f1(-4.0, 1.0, -3.0, 0.5, &cfg()).unwrap_err().is_domain());
    }
}
