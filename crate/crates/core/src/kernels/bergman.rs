use super::{ExtonArgs, ImTable, ImTableCache, DEFAULT_IM_DEPTH};
use crate::error::{Error, Result};
use crate::hypergeom::{s_m, zonal_sequence};
use crate::point::{BallPoint, KernelParams};
use crate::series::{EvalResult, NeumaierSum, SeriesConfig, TailTracker};

/// The triple series is only evaluated for `|x|, |y|` up to this radius;
/// its shells have been observed to decay there but no region is known.
pub const TRIPLE_SERIES_RADIUS: f64 = 0.6;

/// Weighted Bergman kernel as `Σ_m S_m(|x|²) S_m(|y|²) Z_m(x,y) / I_m(s)`.
///
/// Truncation is controlled by the bound
/// `|Z_m(x,y)| ≤ ((n−2+2m)/(n−2)) C_m^λ(1) (|x||y|)^m`. Running out of table
/// entries before the tolerance is met gives `NonConvergence`.
pub fn bergman_zonal_series(
    x: &BallPoint,
    y: &BallPoint,
    params: &KernelParams,
    im: &ImTable,
    cfg: &SeriesConfig,
) -> Result<EvalResult> {
    params.check_point(x)?;
    params.check_point(y)?;
    im.check_dimension(params)?;
    let n = params.n;
    let nf = params.nf();
    let lambda = (nf - 2.0) / 2.0;
    let (rx, ry) = (x.norm(), y.norm());
    let rr = rx * ry;
    let depth = im.max_degree().min(cfg.max_terms.saturating_sub(1));
    let zonals = zonal_sequence(depth, n, rx, ry, x.dot(y));

    let mut acc = NeumaierSum::new();
    let mut tracker = TailTracker::new();
    // C_m^λ(1) (|x||y|)^m
    let mut peak = 1.0;
    for (m, zm) in zonals.iter().enumerate() {
        let sx = s_m(m, n, x.norm_sq(), cfg)?.value;
        let sy = s_m(m, n, y.norm_sq(), cfg)?.value;
        let inv_i = 1.0 / im.values()[m];
        acc.add(sx * sy * zm * inv_i);
        let mf = m as f64;
        let bound = (sx * sy).abs() * inv_i * (nf - 2.0 + 2.0 * mf) / (nf - 2.0) * peak;
        peak *= (2.0 * lambda + mf) / (mf + 1.0) * rr;
        if let Some(tail) = tracker.push(bound, acc.value(), cfg) {
            return Ok(EvalResult {
                value: acc.value(),
                terms_used: m + 1,
                tail_estimate: tail,
                converged: true,
            });
        }
    }
    Err(Error::non_convergence(acc.value(), depth + 1, tracker.last_tail()))
}

/// [`bergman_zonal_series`] with the table taken from `cache`, doubling its
/// depth while the series runs out of entries (up to `cfg.max_terms`).
pub fn bergman_zonal_cached(
    x: &BallPoint,
    y: &BallPoint,
    params: &KernelParams,
    cache: &ImTableCache,
    cfg: &SeriesConfig,
) -> Result<EvalResult> {
    let mut depth = DEFAULT_IM_DEPTH.min(cfg.max_terms.saturating_sub(1));
    loop {
        let table = cache.get(params, depth)?;
        match bergman_zonal_series(x, y, params, &table, cfg) {
            Err(Error::NonConvergence { .. }) if depth + 1 < cfg.max_terms => {
                depth = (2 * depth).min(cfg.max_terms - 1);
            }
            other => return other,
        }
    }
}

/// Log-magnitude tables of the factorial-like quantities in `A_{α,β,γ}`.
struct CoeffTables {
    /// `ln (n−1)_k`
    rise_n1: Vec<f64>,
    /// `ln (n/2)_k`
    rise_half: Vec<f64>,
    /// `ln ((n−2)/2)_k`
    rise_lambda: Vec<f64>,
    /// `ln k!`
    fact: Vec<f64>,
    nf: f64,
}

impl CoeffTables {
    fn new(nf: f64) -> Self {
        Self {
            rise_n1: vec![0.0],
            rise_half: vec![0.0],
            rise_lambda: vec![0.0],
            fact: vec![0.0],
            nf,
        }
    }

    /// Makes every table valid up to index `k`.
    fn reserve(&mut self, k: usize) {
        let nf = self.nf;
        let grow = |v: &mut Vec<f64>, a: f64| {
            while v.len() <= k {
                let j = (v.len() - 1) as f64;
                let last = *v.last().unwrap();
                v.push(last + (a + j).ln());
            }
        };
        grow(&mut self.rise_n1, nf - 1.0);
        grow(&mut self.rise_half, nf / 2.0);
        grow(&mut self.rise_lambda, (nf - 2.0) / 2.0);
        grow(&mut self.fact, 1.0);
    }

    /// `A_{α,β,γ}`; the caller guarantees table depth `2·max(α,β)+γ` and
    /// `I` entries up to `γ + 2 min(α,β)`.
    fn coeff(&self, a: usize, b: usize, g: usize, inv_i: &[f64]) -> f64 {
        let nf = self.nf;
        let common = self.rise_n1[2 * a + g] + self.rise_n1[2 * b + g] - self.fact[g];
        let mut acc = NeumaierSum::new();
        for j in 0..=a.min(b) {
            let ln = common + self.rise_lambda[g + j]
                - self.fact[j]
                - self.fact[a - j]
                - self.fact[b - j]
                - self.rise_half[a + g + j]
                - self.rise_half[b + g + j];
            let k = g + 2 * j;
            let weight = (nf - 2.0 + 2.0 * k as f64) / (nf - 2.0) * inv_i[k];
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            acc.add(sign * weight * ln.exp());
        }
        acc.value()
    }
}

/// Coefficient `A_{α,β,γ}` of the triple Bergman series.
pub fn bergman_coeff(alpha: usize, beta: usize, gamma: usize, params: &KernelParams, im: &ImTable) -> Result<f64> {
    im.check_dimension(params)?;
    let need = gamma + 2 * alpha.min(beta);
    if im.max_degree() < need {
        return Err(Error::domain(format!(
            "A_{{{alpha},{beta},{gamma}}} needs I_m up to m = {need}, table stops at {}",
            im.max_degree()
        )));
    }
    let mut t = CoeffTables::new(params.nf());
    t.reserve(2 * alpha.max(beta) + gamma + 1);
    let inv_i: Vec<f64> = im.values().iter().map(|v| 1.0 / v).collect();
    Ok(t.coeff(alpha, beta, gamma, &inv_i))
}

/// Weighted Bergman kernel as the triple series `Σ A_{α,β,γ} X^α Y^γ Z^β`
/// times the `X₉` prefactor, summed in shells of `α+β+γ`.
///
/// Guarded to `|x|, |y| ≤ TRIPLE_SERIES_RADIUS`.
pub fn bergman_triple_series(
    x: &BallPoint,
    y: &BallPoint,
    params: &KernelParams,
    im: &ImTable,
    cfg: &SeriesConfig,
) -> Result<EvalResult> {
    params.check_point(x)?;
    params.check_point(y)?;
    im.check_dimension(params)?;
    let r2 = TRIPLE_SERIES_RADIUS * TRIPLE_SERIES_RADIUS;
    if x.norm_sq() > r2 || y.norm_sq() > r2 {
        return Err(Error::domain(format!(
            "the triple Bergman series is only evaluated for |x|, |y| ≤ {TRIPLE_SERIES_RADIUS}"
        )));
    }
    let args = ExtonArgs::new(x, y, params.n);
    let (lx, ly, lz) = (args.x.abs().ln(), args.y.abs().ln(), args.z.abs().ln());
    let y_neg = args.y < 0.0;
    let inv_i: Vec<f64> = im.values().iter().map(|v| 1.0 / v).collect();
    let mut tables = CoeffTables::new(params.nf());

    let mut acc = NeumaierSum::new();
    let mut tracker = TailTracker::new();
    for shell in 0..cfg.max_terms {
        tables.reserve(2 * shell + 1);
        let mut sum = NeumaierSum::new();
        let mut abs = 0.0;
        for g in 0..=shell {
            if g > 0 && args.y == 0.0 {
                break;
            }
            for a in 0..=shell - g {
                let b = shell - g - a;
                if (a > 0 && args.x == 0.0) || (b > 0 && args.z == 0.0) {
                    continue;
                }
                if g + 2 * a.min(b) > im.max_degree() {
                    return Err(Error::non_convergence(
                        acc.value() * args.prefactor,
                        shell,
                        tracker.last_tail() * args.prefactor,
                    ));
                }
                let mut ln_mono = 0.0;
                if a > 0 {
                    ln_mono += a as f64 * lx;
                }
                if b > 0 {
                    ln_mono += b as f64 * lz;
                }
                if g > 0 {
                    ln_mono += g as f64 * ly;
                }
                let sign = if y_neg && g % 2 == 1 { -1.0 } else { 1.0 };
                let t = tables.coeff(a, b, g, &inv_i) * sign * ln_mono.exp();
                sum.add(t);
                abs += t.abs();
            }
        }
        acc.add(sum.value());
        if let Some(tail) = tracker.push(abs, acc.value(), cfg) {
            return Ok(EvalResult {
                value: acc.value() * args.prefactor,
                terms_used: shell + 1,
                tail_estimate: tail * args.prefactor,
                converged: true,
            });
        }
    }
    Err(Error::non_convergence(
        acc.value() * args.prefactor,
        cfg.max_terms,
        tracker.last_tail() * args.prefactor,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergeom::{ln_pochhammer, pochhammer};
    use crate::kernels::{compute_im_table, szego_x9};
    use crate::oracle::QuadratureSpec;
    use approx::assert_relative_eq;

    /// Closed form of `A_{α,β,γ}` when every `I_m = 1`.
    fn hardy_coeff(a: usize, b: usize, g: usize, nf: f64) -> f64 {
        let ln = ln_pochhammer(nf - 1.0, 2 * a + g)
            .mul(ln_pochhammer(nf - 1.0, 2 * b + g))
            .div(ln_pochhammer(nf / 2.0, a + b + g))
            .div(ln_pochhammer(1.0, a))
            .div(ln_pochhammer(1.0, b))
            .div(ln_pochhammer(1.0, g));
        ln.to_f64()
    }

    fn cfg() -> SeriesConfig {
        SeriesConfig::default()
    }

    fn pt(c: &[f64]) -> BallPoint {
        BallPoint::new(c.to_vec()).unwrap()
    }

    #[test]
    fn first_coefficients() {
        let p = KernelParams::new(3, 0.0).unwrap();
        let im = compute_im_table(&p, 4, &QuadratureSpec::default()).unwrap();
        assert_relative_eq!(bergman_coeff(0, 0, 0, &p, &im).unwrap(), 1.0, max_relative = 1e-12);
        // A_{1,0,0}: only j = 0, i.e. (n−1)_2/((n/2)_1) · 1/I_0
        let direct = pochhammer(2.0, 2) / 1.5;
        assert_relative_eq!(bergman_coeff(1, 0, 0, &p, &im).unwrap(), direct, max_relative = 1e-13);
        assert!(bergman_coeff(3, 3, 0, &p, &im).unwrap_err().is_domain());
    }

    #[test]
    fn hardy_coefficients_close_up() {
        for n in [3usize, 4, 5] {
            let p = KernelParams::new(n, 0.0).unwrap();
            let ones = ImTable::constant(&p, 1.0, 20).unwrap();
            for a in 0..=6 {
                for b in 0..=6 {
                    for g in 0..=6 {
                        let v = bergman_coeff(a, b, g, &p, &ones).unwrap();
                        assert_relative_eq!(v, hardy_coeff(a, b, g, n as f64), max_relative = 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn hardy_limit_and_dual_representation() {
        let p = KernelParams::new(3, 1.0).unwrap();
        let x = pt(&[0.2, 0.1, 0.0]);
        let y = pt(&[-0.1, 0.3, 0.05]);
        let ones = ImTable::constant(&p, 1.0, 200).unwrap();
        let k = szego_x9(&x, &y, &p, &cfg()).unwrap().value;
        assert_relative_eq!(bergman_zonal_series(&x, &y, &p, &ones, &cfg()).unwrap().value, k, max_relative = 1e-12);
        assert_relative_eq!(bergman_triple_series(&x, &y, &p, &ones, &cfg()).unwrap().value, k, max_relative = 1e-12);

        // reference from 25-digit evaluation
        let im = compute_im_table(&p, 80, &QuadratureSpec::default()).unwrap();
        let z = bergman_zonal_series(&x, &y, &p, &im, &cfg()).unwrap().value;
        let t = bergman_triple_series(&x, &y, &p, &im, &cfg()).unwrap().value;
        assert_relative_eq!(z, 1.006_213_919_212_5, max_relative = 1e-11);
        assert_relative_eq!(t, z, max_relative = 1e-11);
    }

    #[test]
    fn origin_reproduces_constants() {
        let p = KernelParams::new(4, 0.5).unwrap();
        let im = compute_im_table(&p, 10, &QuadratureSpec::default()).unwrap();
        let o = BallPoint::origin(4);
        let y = pt(&[0.1, -0.3, 0.2, 0.1]);
        assert_relative_eq!(bergman_zonal_series(&o, &y, &p, &im, &cfg()).unwrap().value, 1.0, max_relative = 1e-13);
        assert_relative_eq!(bergman_triple_series(&o, &y, &p, &im, &cfg()).unwrap().value, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn shallow_table_and_guard() {
        let p = KernelParams::new(3, 0.0).unwrap();
        let im = ImTable::constant(&p, 1.0, 3).unwrap();
        let x = pt(&[0.3, 0.2, 0.0]);
        assert!(bergman_zonal_series(&x, &x, &p, &im, &cfg()).unwrap_err().is_non_convergence());
        assert!(bergman_triple_series(&x, &x, &p, &im, &cfg()).unwrap_err().is_non_convergence());
        let far = pt(&[0.65, 0.0, 0.0]);
        assert!(bergman_triple_series(&far, &x, &p, &im, &cfg()).unwrap_err().is_domain());
    }

    #[test]
    fn cached_route_extends_depth() {
        let p = KernelParams::new(3, 2.0).unwrap();
        let cache = ImTableCache::new(QuadratureSpec::default());
        let x = pt(&[0.8, 0.0, 0.0]);
        let y = pt(&[0.0, 0.8, 0.0]);
        let r = bergman_zonal_cached(&x, &y, &p, &cache, &cfg()).unwrap();
        assert!(r.converged && r.terms_used > DEFAULT_IM_DEPTH);
    }
}
