//! Quadrature evaluation of the defining integrals.

use super::gauss_jacobi::gauss_jacobi_unit;
use super::sphere::{sphere_quadrature, QuadratureEstimate, QuadratureSpec, SphereFunction};
use crate::error::{Error, Result};
use crate::hypergeom::{gamma_ratio, s_m};
use crate::point::{BallPoint, KernelParams};
use crate::series::SeriesConfig;

/// Relative agreement required between successive node doublings.
const IM_TOL: f64 = 1e-12;
/// Largest rule tried by [`i_m_quadrature`].
const IM_MAX_NODES: usize = 4096;
const IM_MIN_NODES: usize = 32;

/// `∫ |x−η|^{−2(α−1)} |y−η|^{−2(β−1)} dσ(η)` by quadrature.
///
/// The pair is first rotated to `x = (a, 0, …)`, `y = (b, c, 0, …)` so that
/// the integrand depends on `η₁, η₂` only.
pub fn pair_integral_quadrature(
    x: &BallPoint,
    y: &BallPoint,
    alpha: f64,
    beta: f64,
    n: usize,
    spec: &QuadratureSpec,
) -> Result<f64> {
    Ok(pair_integral_estimate(x, y, alpha, beta, n, spec)?.value)
}

/// [`pair_integral_quadrature`] with its Monte Carlo standard error.
pub fn pair_integral_estimate(
    x: &BallPoint,
    y: &BallPoint,
    alpha: f64,
    beta: f64,
    n: usize,
    spec: &QuadratureSpec,
) -> Result<QuadratureEstimate> {
    if x.dim() != n || y.dim() != n {
        return Err(Error::domain(format!("points must have {n} coordinates")));
    }
    if !(alpha > 1.0 && beta > 1.0) {
        return Err(Error::domain(format!("exponents must exceed 1, got α = {alpha}, β = {beta}")));
    }
    let a = x.norm();
    let b = if a > 0.0 { x.dot(y) / a } else { 0.0 };
    let c = (y.norm_sq() - b * b).max(0.0).sqrt();
    let (ax, ay) = (x.norm_sq(), y.norm_sq());
    let f = SphereFunction::two_coordinate(move |e1, e2| {
        (1.0 - 2.0 * a * e1 + ax).powf(1.0 - alpha) * (1.0 - 2.0 * b * e1 - 2.0 * c * e2 + ay).powf(1.0 - beta)
    });
    sphere_quadrature(&f, n, spec)
}

/// `K_h(x, y) = ∫ P_h(η, x) P_h(η, y) dσ(η)` by quadrature.
pub fn szego_quadrature(x: &BallPoint, y: &BallPoint, n: usize, spec: &QuadratureSpec) -> Result<f64> {
    let nf = n as f64;
    let scale = ((nf - 1.0) * ((-x.norm_sq()).ln_1p() + (-y.norm_sq()).ln_1p())).exp();
    Ok(scale * pair_integral_quadrature(x, y, nf, nf, n, spec)?)
}

/// `I_m(s) = Γ(n/2+s+1)/(Γ(n/2)Γ(s+1)) ∫_0^1 t^{m+n/2−1} (1−t)^s S_m(t)² dt`.
///
/// Gauss–Jacobi with weight `(1−t)^s t^{n/2−1}`, starting from
/// `spec.nodes_radial` nodes (at least 32) and doubling until two successive
/// values agree to `1e−12` relative. The scheme field is ignored.
pub fn i_m_quadrature(m: usize, params: &KernelParams, spec: &QuadratureSpec) -> Result<f64> {
    let nf = params.nf();
    let s = params.s;
    let norm = gamma_ratio(&[nf / 2.0 + s + 1.0], &[nf / 2.0, s + 1.0])
        .ok_or_else(|| Error::domain("gamma pole in the I_m normalization"))?;
    let cfg = SeriesConfig::default();
    let eval = |nodes: usize| -> Result<f64> {
        let rule = gauss_jacobi_unit(nodes, s, nf / 2.0 - 1.0)?;
        let mut vals = Vec::with_capacity(nodes);
        for &t in &rule.nodes {
            let sm = s_m(m, params.n, t, &cfg)?.value;
            vals.push(t.powi(m as i32) * sm * sm);
        }
        Ok(norm * vals.iter().zip(&rule.weights).map(|(v, w)| v * w).collect::<crate::NeumaierSum>().value())
    };
    let mut nodes = spec.nodes_radial.clamp(IM_MIN_NODES, IM_MAX_NODES / 2);
    let mut prev = eval(nodes)?;
    let mut diff = f64::INFINITY;
    while nodes < IM_MAX_NODES {
        nodes *= 2;
        let next = eval(nodes)?;
        diff = (next - prev).abs();
        if diff <= IM_TOL * next.abs() {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::non_convergence(prev, nodes, diff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{pair_integral_x9, szego_diagonal, szego_x9};
    use approx::assert_relative_eq;

    fn pt(c: &[f64]) -> BallPoint {
        BallPoint::new(c.to_vec()).unwrap()
    }

    #[test]
    fn origin_pair() {
        let o = BallPoint::origin(3);
        let v = pair_integral_quadrature(&o, &o, 2.0, 3.0, 3, &QuadratureSpec::tensor(8, 8)).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn agrees_with_the_series() {
        let spec = QuadratureSpec::default();
        let cfg = SeriesConfig::default();
        let p = KernelParams::hardy(3).unwrap();
        let x = pt(&[0.2, 0.0, 0.0]);
        let y = pt(&[0.1, 0.1, 0.0]);
        let q = pair_integral_quadrature(&x, &y, 2.0, 2.0, 3, &spec).unwrap();
        let s = pair_integral_x9(&x, &y, 2.0, 2.0, &p, &cfg).unwrap().value;
        assert_relative_eq!(q, s, max_relative = 1e-12);
        assert_relative_eq!(szego_quadrature(&x, &y, 3, &spec).unwrap(), szego_x9(&x, &y, &p, &cfg).unwrap().value, max_relative = 1e-12);
        let d = pt(&[0.0, 0.3, 0.0]);
        assert_relative_eq!(szego_quadrature(&d, &d, 3, &spec).unwrap(), szego_diagonal(&d, &p), max_relative = 1e-12);
    }

    #[test]
    fn i_m_examples() {
        let spec = QuadratureSpec::default();
        for n in 3..=5 {
            for s in [0.0, 0.5, 2.0, -0.5] {
                let p = KernelParams::new(n, s).unwrap();
                assert_relative_eq!(i_m_quadrature(0, &p, &spec).unwrap(), 1.0, max_relative = 1e-13);
            }
        }
        let p = KernelParams::new(4, 0.0).unwrap();
        assert_relative_eq!(i_m_quadrature(1, &p, &spec).unwrap(), 0.85, max_relative = 1e-13);
        let p = KernelParams::new(3, 1.0).unwrap();
        for m in 0..=20 {
            assert!(i_m_quadrature(m, &p, &spec).unwrap() > 0.0);
        }
    }
}
