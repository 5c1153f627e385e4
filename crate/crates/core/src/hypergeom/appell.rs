//! First Appell function `F₁(a; b₁, b₂; c; x, y)`.

use super::pochhammer::non_positive_integer;
use crate::error::{Error, Result};
use crate::series::{EvalResult, NeumaierSum, SeriesConfig, TailTracker};

/// `F₁(a; b₁, b₂; c; x, y) = Σ (a)_{m+l}(b₁)_m(b₂)_l / ((c)_{m+l} m! l!) x^m y^l`,
/// summed shell by shell in the total degree `N = m + l`.
///
/// Each shell is `(a)_N/(c)_N · Σ_{m+l=N} g_m h_l` with
/// `g_m = (b₁)_m x^m/m!` and `h_l = (b₂)_l y^l/l!` extended incrementally.
pub fn appell_f1(
    a: f64,
    b1: f64,
    b2: f64,
    c: f64,
    x: f64,
    y: f64,
    cfg: &SeriesConfig,
) -> Result<EvalResult> {
    if ![a, b1, b2, c, x, y].iter().all(|v| v.is_finite()) {
        return Err(Error::domain("non-finite F₁ argument"));
    }
    let deg_a = non_positive_integer(a);
    let deg_x = non_positive_integer(b1).map(|d| d as usize).or((x == 0.0).then_some(0));
    let deg_y = non_positive_integer(b2).map(|d| d as usize).or((y == 0.0).then_some(0));
    // total degree beyond which every shell vanishes
    let last_shell = match (deg_a, deg_x, deg_y) {
        (Some(d), _, _) => Some(d as usize),
        (None, Some(dx), Some(dy)) => Some(dx + dy),
        _ => None,
    };
    if let Some(k) = non_positive_integer(c) {
        if last_shell.map_or(true, |d| d > k as usize) {
            return Err(Error::domain(format!("F₁ lower parameter c = {c} is a non-positive integer")));
        }
    }
    if deg_a.is_none() && ((deg_x.is_none() && x.abs() >= 1.0) || (deg_y.is_none() && y.abs() >= 1.0)) {
        return Err(Error::domain(format!(
            "F₁ needs max(|x|, |y|) < 1, got x = {x}, y = {y}"
        )));
    }

    let mut g = vec![1.0];
    let mut h = vec![1.0];
    let mut ratio = 1.0; // (a)_N / (c)_N
    let mut acc = NeumaierSum::new();
    let mut tracker = TailTracker::new();
    for n in 0..cfg.max_terms {
        if n > 0 {
            let k = (n - 1) as f64;
            g.push(g[n - 1] * (b1 + k) * x / (k + 1.0));
            h.push(h[n - 1] * (b2 + k) * y / (k + 1.0));
            ratio *= (a + k) / (c + k);
        }
        if last_shell.is_some_and(|d| n > d) {
            return Ok(EvalResult::exact(acc.value(), n));
        }
        let mut shell = NeumaierSum::new();
        let mut shell_abs = 0.0;
        for m in 0..=n {
            let t = g[m] * h[n - m];
            shell.add(t);
            shell_abs += t.abs();
        }
        acc.add(ratio * shell.value());
        if let Some(tail) = tracker.push(ratio.abs() * shell_abs, acc.value(), cfg) {
            return Ok(EvalResult {
                value: acc.value(),
                terms_used: n + 1,
                tail_estimate: tail,
                converged: true,
            });
        }
    }
    if last_shell.is_some_and(|d| d < cfg.max_terms) {
        return Ok(EvalResult::exact(acc.value(), cfg.max_terms));
    }
    Err(Error::non_convergence(acc.value(), cfg.max_terms, tracker.last_tail()))
}
