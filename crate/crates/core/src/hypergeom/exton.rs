//! Exton's triple hypergeometric function `X₉`.

use rayon::prelude::*;

use super::gauss::gauss_2f1;
use super::pochhammer::{non_positive_integer, SignedLog};
use crate::error::{Error, Result};
use crate::series::{EvalResult, NeumaierSum, SeriesConfig, TailTracker};

/// Shells with at least this many lines are summed in parallel.
const PARALLEL_SHELL: usize = 96;

/// Largest admissible `|y|` for given `|x|, |z| < 1/4`.
///
/// The series converges absolutely iff `|y| < (1 + sqrt((1−4|x|)(1−4|z|)))/2`.
pub fn x9_y_bound(x: f64, z: f64) -> f64 {
    0.5 * (1.0 + ((1.0 - 4.0 * x.abs()) * (1.0 - 4.0 * z.abs())).sqrt())
}

/// `X₉(α, β; γ; x, y, z) = Σ (α)_{2p+q}(β)_{2l+q} / ((γ)_{p+q+l} p! q! l!) x^p y^q z^l`.
///
/// Summed shell by shell in `N = p+q+l`. The first term of each line of
/// fixed `q` is carried across shells in log-magnitude form; the line itself
/// is then walked by term ratios with periodic rescaling. `terms_used`
/// counts shells.
pub fn exton_x9(
    alpha: f64,
    beta: f64,
    gamma: f64,
    x: f64,
    y: f64,
    z: f64,
    cfg: &SeriesConfig,
) -> Result<EvalResult> {
    if ![alpha, beta, gamma, x, y, z].iter().all(|v| v.is_finite()) {
        return Err(Error::domain("non-finite X₉ argument"));
    }
    if non_positive_integer(gamma).is_some() {
        return Err(Error::domain(format!("X₉ lower parameter γ = {gamma} is a non-positive integer")));
    }
    for (name, v) in [("α", alpha), ("β", beta)] {
        if v != 0.0 && non_positive_integer(v).is_some() {
            return Err(Error::domain(format!("X₉ parameter {name} = {v} is a negative integer")));
        }
    }
    if x.abs() >= 0.25 || z.abs() >= 0.25 {
        return Err(Error::domain(format!("X₉ needs |x|, |z| < 1/4, got x = {x}, z = {z}")));
    }
    let bound = x9_y_bound(x, z);
    if y.abs() >= bound {
        return Err(Error::domain(format!("X₉ needs |y| < {bound}, got y = {y}")));
    }

    // the series is symmetric under (α, x) ↔ (β, z)
    if alpha == 0.0 {
        return gauss_2f1(beta / 2.0, (beta + 1.0) / 2.0, gamma, 4.0 * z, cfg);
    }
    if beta == 0.0 {
        return gauss_2f1(alpha / 2.0, (alpha + 1.0) / 2.0, gamma, 4.0 * x, cfg);
    }
    if x == 0.0 && z == 0.0 {
        return gauss_2f1(alpha, beta, gamma, y, cfg);
    }
    if z == 0.0 {
        return shells(beta, alpha, gamma, z, y, x, cfg);
    }
    shells(alpha, beta, gamma, x, y, z, cfg)
}

/// Shell summation with `z ≠ 0`.
fn shells(
    alpha: f64,
    beta: f64,
    gamma: f64,
    x: f64,
    y: f64,
    z: f64,
    cfg: &SeriesConfig,
) -> Result<EvalResult> {
    // heads[q] = t(0, q, N−q) for the current shell N
    let mut heads: Vec<SignedLog> = vec![SignedLog::ONE];
    let mut acc = NeumaierSum::new();
    let mut tracker = TailTracker::new();
    for n in 0..cfg.max_terms {
        if n > 0 {
            let nf = (n - 1) as f64;
            let last = heads[n - 1];
            for (q, head) in heads.iter_mut().enumerate() {
                let l = (n - 1 - q) as f64;
                let b = beta + 2.0 * l + q as f64;
                *head = head.mul_f64(b * (b + 1.0) * z / ((l + 1.0) * (gamma + nf)));
            }
            heads.push(last.mul_f64((alpha + nf) * (beta + nf) * y / (nf + 1.0) / (gamma + nf)));
        }
        let line = |q: usize| line_sum(alpha, beta, x, z, q, n - q, heads[q]);
        let parts: Vec<(f64, f64)> = if n >= PARALLEL_SHELL {
            (0..=n).into_par_iter().map(line).collect()
        } else {
            (0..=n).map(line).collect()
        };
        let mut shell = NeumaierSum::new();
        let mut shell_abs = 0.0;
        for (s, a) in parts {
            shell.add(s);
            shell_abs += a;
        }
        acc.add(shell.value());
        let total = acc.value();
        if !total.is_finite() {
            return Err(Error::non_convergence(total, n + 1, f64::INFINITY));
        }
        if let Some(tail) = tracker.push(shell_abs, total, cfg) {
            return Ok(EvalResult {
                value: total,
                terms_used: n + 1,
                tail_estimate: tail,
                converged: true,
            });
        }
    }
    Err(Error::non_convergence(acc.value(), cfg.max_terms, tracker.last_tail()))
}

/// Sum and absolute sum of `t(p, q, m−p)` for `p = 0..=m`, starting from `head = t(0, q, m)`.
fn line_sum(alpha: f64, beta: f64, x: f64, z: f64, q: usize, m: usize, head: SignedLog) -> (f64, f64) {
    if head.sign == 0 {
        return (0.0, 0.0);
    }
    const BIG: f64 = 1e150;
    let qf = q as f64;
    let xz = x / z;
    let mut offset = head.ln_abs;
    let mut scale = offset.exp();
    let mut cur = f64::from(head.sign);
    let mut sum = NeumaierSum::new();
    let mut abs = 0.0;
    for p in 0..=m {
        let t = cur * scale;
        sum.add(t);
        abs += t.abs();
        if p == m || x == 0.0 {
            break;
        }
        let pf = p as f64;
        let l = (m - p) as f64;
        let a = alpha + 2.0 * pf + qf;
        let b = beta + 2.0 * l + qf;
        cur *= a * (a + 1.0) * l * xz / ((pf + 1.0) * (b - 2.0) * (b - 1.0));
        let mag = cur.abs();
        if !(1.0 / BIG..=BIG).contains(&mag) {
            if mag == 0.0 {
                break;
            }
            offset += mag.ln();
            scale = offset.exp();
            cur = cur.signum();
        }
    }
    (sum.value(), abs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg() -> SeriesConfig {
        SeriesConfig::default()
    }

    /// Naive triple loop with each term built from log-Pochhammers.
    fn naive(a: f64, b: f64, g: f64, x: f64, y: f64, z: f64, deg: usize) -> f64 {
        use crate::hypergeom::ln_pochhammer;
        let mut s = NeumaierSum::new();
        for p in 0..=deg {
            for q in 0..=deg - p {
                for l in 0..=deg - p - q {
                    let t = ln_pochhammer(a, 2 * p + q)
                        .mul(ln_pochhammer(b, 2 * l + q))
                        .div(ln_pochhammer(g, p + q + l))
                        .div(ln_pochhammer(1.0, p))
                        .div(ln_pochhammer(1.0, q))
                        .div(ln_pochhammer(1.0, l));
                    s.add(t.to_f64() * x.powi(p as i32) * y.powi(q as i32) * z.powi(l as i32));
                }
            }
        }
        s.value()
    }

    #[test]
    fn origin_is_one() {
        assert_eq!(exton_x9(2.0, 3.0, 1.5, 0.0, 0.0, 0.0, &cfg()).unwrap().value, 1.0);
    }

    #[test]
    fn y_axis_is_gauss() {
        let v = exton_x9(1.7, 2.3, 1.5, 0.0, 0.4, 0.0, &cfg()).unwrap().value;
        let g = gauss_2f1(1.7, 2.3, 1.5, 0.4, &cfg()).unwrap().value;
        assert_relative_eq!(v, g, max_relative = 1e-14);
    }

    #[test]
    fn matches_naive_triple_loop() {
        let v = exton_x9(2.0, 2.0, 1.5, 0.01, 0.05, 0.02, &cfg()).unwrap().value;
        assert_relative_eq!(v, naive(2.0, 2.0, 1.5, 0.01, 0.05, 0.02, 40), max_relative = 1e-14);
        let v = exton_x9(0.7, 3.1, 2.2, -0.1, 0.3, 0.15, &cfg()).unwrap().value;
        assert_relative_eq!(v, naive(0.7, 3.1, 2.2, -0.1, 0.3, 0.15, 90), max_relative = 1e-12);
    }

    #[test]
    fn symmetric_in_outer_pairs() {
        let a = exton_x9(1.3, 2.9, 1.9, 0.12, -0.2, 0.07, &cfg()).unwrap().value;
        let b = exton_x9(2.9, 1.3, 1.9, 0.07, -0.2, 0.12, &cfg()).unwrap().value;
        assert_relative_eq!(a, b, max_relative = 1e-13);
        let a = exton_x9(1.3, 2.9, 1.9, 0.12, -0.2, 0.0, &cfg()).unwrap().value;
        assert_relative_eq!(a, naive(1.3, 2.9, 1.9, 0.12, -0.2, 0.0, 120), max_relative = 1e-12);
    }

    #[test]
    fn zero_parameter_reduces() {
        let v = exton_x9(0.0, 2.5, 1.5, 0.1, 0.3, 0.1, &cfg()).unwrap().value;
        assert_relative_eq!(v, naive(0.0, 2.5, 1.5, 0.1, 0.3, 0.1, 80), max_relative = 1e-12);
    }

    #[test]
    fn region_is_enforced() {
        let c = cfg();
        assert!(exton_x9(1.0, 1.0, 1.0, 0.25, 0.0, 0.0, &c).unwrap_err().is_domain());
        assert!(exton_x9(1.0, 1.0, 1.0, 0.0, 0.0, -0.3, &c).unwrap_err().is_domain());
        assert!(exton_x9(1.0, 1.0, 1.0, 0.0, 1.0, 0.0, &c).unwrap_err().is_domain());
        let b = x9_y_bound(0.1, 0.2);
        assert!(exton_x9(1.0, 1.0, 1.0, 0.1, b, 0.2, &c).unwrap_err().is_domain());
        assert!(exton_x9(1.0, -2.0, 1.0, 0.1, 0.1, 0.2, &c).unwrap_err().is_domain());
        assert!(exton_x9(1.0, 1.0, -1.0, 0.1, 0.1, 0.2, &c).unwrap_err().is_domain());
    }

    #[test]
    fn starved_budget() {
        let e = exton_x9(2.0, 2.0, 1.5, 0.2, 0.45, 0.2, &cfg().with_max_terms(50)).unwrap_err();
        match e {
            Error::NonConvergence { partial } => {
                assert!(!partial.converged);
                assert_eq!(partial.terms_used, 50);
            }
            _ => panic!("expected non-convergence"),
        }
    }
}
