use super::ExtonArgs;
use crate::error::{Error, Result};
use crate::hypergeom::exton_x9;
use crate::point::{BallPoint, KernelParams};
use crate::series::{EvalResult, SeriesConfig};

/// `∫ |x−η|^{−2(α−1)} |y−η|^{−2(β−1)} dσ(η)` for `α, β > 1`, evaluated as
/// `(1+|x|²)^{1−α}(1+|y|²)^{1−β} X₉(α−1, β−1; n/2; X, Y, Z)`.
pub fn pair_integral_x9(
    x: &BallPoint,
    y: &BallPoint,
    alpha: f64,
    beta: f64,
    params: &KernelParams,
    cfg: &SeriesConfig,
) -> Result<EvalResult> {
    params.check_point(x)?;
    params.check_point(y)?;
    if !(alpha > 1.0 && beta > 1.0) {
        return Err(Error::domain(format!("exponents must exceed 1, got α = {alpha}, β = {beta}")));
    }
    let args = ExtonArgs::new(x, y, params.n);
    let scale = ((1.0 - alpha) * x.norm_sq().ln_1p() + (1.0 - beta) * y.norm_sq().ln_1p()).exp();
    Ok(exton_x9(alpha - 1.0, beta - 1.0, params.nf() / 2.0, args.x, args.y, args.z, cfg)?.scaled(scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergeom::gauss_2f1;
    use approx::assert_relative_eq;

    #[test]
    fn origin_pair_is_one() {
        let p = KernelParams::hardy(3).unwrap();
        let o = BallPoint::origin(3);
        let v = pair_integral_x9(&o, &o, 2.5, 3.5, &p, &SeriesConfig::default()).unwrap();
        assert_eq!(v.value, 1.0);
    }

    #[test]
    fn one_point_at_origin() {
        // x = 0 leaves (1+|y|²)^{1−β} ₂F₁((β−1)/2, β/2; n/2; 4Z)
        let cfg = SeriesConfig::default();
        for n in [3usize, 4, 6] {
            let p = KernelParams::hardy(n).unwrap();
            let o = BallPoint::origin(n);
            let y = BallPoint::on_axis(n, 0.45).unwrap();
            let beta = 2.7;
            let v = pair_integral_x9(&o, &y, 3.0, beta, &p, &cfg).unwrap().value;
            let b2 = y.norm_sq();
            let z4 = 4.0 * b2 / ((1.0 + b2) * (1.0 + b2));
            let f = gauss_2f1((beta - 1.0) / 2.0, beta / 2.0, n as f64 / 2.0, z4, &cfg).unwrap().value;
            assert_relative_eq!(v, (1.0 + b2).powf(1.0 - beta) * f, max_relative = 1e-13);
        }
    }

    #[test]
    fn rejects_small_exponents() {
        let p = KernelParams::hardy(3).unwrap();
        let o = BallPoint::origin(3);
        assert!(pair_integral_x9(&o, &o, 1.0, 2.0, &p, &SeriesConfig::default()).unwrap_err().is_domain());
    }
}
