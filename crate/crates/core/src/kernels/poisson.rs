use crate::point::BallPoint;

/// Hyperbolic Poisson kernel `P_h(η, x) = (1−|x|²)^{n−1} / |x−η|^{2(n−1)}`
/// for a unit vector `η`.
pub fn poisson_h(eta: &[f64], x: &BallPoint, n: usize) -> f64 {
    let d2: f64 = eta.iter().zip(x.coords()).map(|(e, c)| (c - e) * (c - e)).sum();
    ((1.0 - x.norm_sq()) / d2).powi(n as i32 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let o = BallPoint::origin(4);
        assert_eq!(poisson_h(&[0.0, 1.0, 0.0, 0.0], &o, 4), 1.0);
        let x = BallPoint::new(vec![0.5, 0.0, 0.0]).unwrap();
        assert!((poisson_h(&[1.0, 0.0, 0.0], &x, 3) - 9.0).abs() < 1e-14);
        assert!(poisson_h(&[-1.0, 0.0, 0.0], &x, 3) > 0.0);
    }
}
