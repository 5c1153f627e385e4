//! Fixtures shared by the criterion benchmarks.

use hharmonic::{BallPoint, KernelParams};

/// A generic pair of points in `B^n` at moderate radius: `|x| = r`,
/// `|y| = 0.8 r`, at an angle of one radian.
pub fn pair(n: usize, r: f64) -> (BallPoint, BallPoint) {
    let mut x = vec![0.0; n];
    let mut y = vec![0.0; n];
    x[0] = r;
    y[0] = 0.8 * r * 1f64.cos();
    y[1] = 0.8 * r * 1f64.sin();
    (BallPoint::new(x).unwrap(), BallPoint::new(y).unwrap())
}

pub fn params(n: usize, s: f64) -> KernelParams {
    KernelParams::new(n, s).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_points_are_inside_the_ball() {
        let (x, y) = pair(5, 0.9);
        assert!((x.norm() - 0.9).abs() < 1e-15);
        assert!((y.norm() - 0.72).abs() < 1e-15);
        assert_eq!(params(5, 0.5).n, 5);
    }
}
