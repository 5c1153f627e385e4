use super::{ExtonArgs, Representation};
use crate::error::{Error, Result};
use crate::hypergeom::{appell_f1, exton_x9, gauss_2f1, ln_pochhammer, SignedLog};
use crate::point::{BallPoint, KernelParams};
use crate::series::{EvalResult, NeumaierSum, SeriesConfig};

/// Relative tolerance for treating two points as collinear in the dispatcher.
const COLLINEAR_TOL: f64 = 1e-12;

/// Szegő kernel via the Exton `X₉` series.
pub fn szego_x9(x: &BallPoint, y: &BallPoint, params: &KernelParams, cfg: &SeriesConfig) -> Result<EvalResult> {
    params.check_point(x)?;
    params.check_point(y)?;
    let nf = params.nf();
    let args = ExtonArgs::new(x, y, params.n);
    Ok(exton_x9(nf - 1.0, nf - 1.0, nf / 2.0, args.x, args.y, args.z, cfg)?.scaled(args.prefactor))
}

/// Szegő kernel as a finite double sum of Gauss functions of
/// `−|x−y|²/((1−|x|²)(1−|y|²))`.
pub fn szego_finite_sum(
    x: &BallPoint,
    y: &BallPoint,
    params: &KernelParams,
    cfg: &SeriesConfig,
) -> Result<EvalResult> {
    params.check_point(x)?;
    params.check_point(y)?;
    let n = params.n;
    let nf = params.nf();
    let (a2, b2) = (x.norm_sq(), y.norm_sq());
    let w = x.dist_sq(y) / ((1.0 - a2) * (1.0 - b2));
    let u = a2 / (a2 - 1.0);
    let v = b2 / (b2 - 1.0);

    let mut acc = NeumaierSum::new();
    let mut tail = 0.0;
    let mut terms = 0;
    let mut converged = true;
    // (1−n)_{p+l} vanishes once p + l ≥ n
    for p in 0..n {
        if p > 0 && u == 0.0 {
            break;
        }
        for l in 0..n - p {
            if l > 0 && v == 0.0 {
                break;
            }
            let coef = ln_pochhammer(1.0 - nf, p + l)
                .mul(ln_pochhammer(nf - 1.0, p))
                .mul(ln_pochhammer(nf - 1.0, l))
                .div(ln_pochhammer(nf / 2.0, p + l))
                .div(ln_pochhammer(1.0, p))
                .div(ln_pochhammer(1.0, l))
                .mul(SignedLog::from_f64(u.powi(p as i32)))
                .mul(SignedLog::from_f64(v.powi(l as i32)))
                .to_f64();
            let (pf, lf) = (p as f64, l as f64);
            let f = gauss_2f1(1.0 + pf - nf / 2.0, 1.0 + lf - nf / 2.0, nf / 2.0 + pf + lf, -w, cfg)?;
            acc.add(coef * f.value);
            tail += coef.abs() * f.tail_estimate;
            terms += f.terms_used;
            converged &= f.converged;
        }
    }
    let prefactor = ((2.0 - 1.5 * nf) * w.ln_1p()).exp();
    Ok(EvalResult {
        value: acc.value() * prefactor,
        terms_used: terms,
        tail_estimate: tail * prefactor,
        converged,
    })
}

/// Szegő kernel at `(x, λx)`, `0 ≤ λ ≤ 1`, via the Appell `F₁` representation.
pub fn szego_radial_f1(
    x: &BallPoint,
    lambda: f64,
    params: &KernelParams,
    cfg: &SeriesConfig,
) -> Result<EvalResult> {
    params.check_point(x)?;
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::domain(format!("λ must lie in [0, 1], got {lambda}")));
    }
    let nf = params.nf();
    let rx = x.norm();
    let ry = lambda * rx;
    let ln_pre = (nf - 1.0)
        * ((-rx * rx).ln_1p() + (-ry * ry).ln_1p() - 2.0 * rx.ln_1p() - 2.0 * ry.ln_1p());
    let s = 4.0 * rx / ((1.0 + rx) * (1.0 + rx));
    let t = 4.0 * ry / ((1.0 + ry) * (1.0 + ry));
    Ok(appell_f1((nf - 1.0) / 2.0, nf - 1.0, nf - 1.0, nf - 1.0, s, t, cfg)?.scaled(ln_pre.exp()))
}

/// `K_h(x, x) = (1−|x|²)^{−(n−1)} ₂F₁(2−3n/2, −(n−1); n/2; |x|²)`, a polynomial
/// of degree `n−1` in `|x|²`.
pub fn szego_diagonal(x: &BallPoint, params: &KernelParams) -> f64 {
    let nf = params.nf();
    let a2 = x.norm_sq();
    let poly = gauss_2f1(2.0 - 1.5 * nf, 1.0 - nf, nf / 2.0, a2, &SeriesConfig::default())
        .expect("terminating ₂F₁ always evaluates")
        .value;
    poly * (-(nf - 1.0) * (-a2).ln_1p()).exp()
}

/// Evaluates the Szegő kernel through the requested representation.
///
/// `Auto` picks, in order, the constant value 1 when either point is the
/// origin, the diagonal formula (`x = y`), the radial `F₁` form (collinear
/// points on the same ray), the finite sum, and `X₉`.
pub fn szego(
    x: &BallPoint,
    y: &BallPoint,
    params: &KernelParams,
    cfg: &SeriesConfig,
    rep: Representation,
) -> Result<EvalResult> {
    params.check_point(x)?;
    params.check_point(y)?;
    match rep {
        Representation::X9 => szego_x9(x, y, params, cfg),
        Representation::FiniteSum => szego_finite_sum(x, y, params, cfg),
        Representation::Diagonal => {
            if x != y {
                return Err(Error::domain("the diagonal representation needs x = y"));
            }
            Ok(EvalResult::exact(szego_diagonal(x, params), params.n))
        }
        Representation::RadialF1 => {
            let (long, lambda) = same_ray(x, y)
                .ok_or_else(|| Error::domain("the radial representation needs y = λx or x = λy with 0 ≤ λ ≤ 1"))?;
            szego_radial_f1(long, lambda, params, cfg)
        }
        Representation::Auto => {
            if x.is_origin() || y.is_origin() {
                Ok(EvalResult::exact(1.0, 1))
            } else if x == y {
                szego(x, y, params, cfg, Representation::Diagonal)
            } else if same_ray(x, y).is_some() {
                szego(x, y, params, cfg, Representation::RadialF1)
            } else {
                szego_finite_sum(x, y, params, cfg)
            }
        }
    }
}

/// For points on one ray from the origin, the longer point and the ratio of
/// norms.
fn same_ray<'a>(x: &'a BallPoint, y: &'a BallPoint) -> Option<(&'a BallPoint, f64)> {
    let (long, short) = if y.norm_sq() <= x.norm_sq() { (x, y) } else { (y, x) };
    if short.is_origin() {
        return Some((long, 0.0));
    }
    let dot = x.dot(y);
    let nn = x.norm_sq() * y.norm_sq();
    if dot <= 0.0 || dot * dot < nn * (1.0 - COLLINEAR_TOL) {
        return None;
    }
    Some((long, (short.norm() / long.norm()).min(1.0)))
}
