//! Gegenbauer polynomials and zonal harmonics.

use super::pochhammer::pochhammer;
use crate::point::BallPoint;
use crate::series::NeumaierSum;

/// Up to this degree the explicit sum is tried first.
const EXPLICIT_MAX: usize = 30;

/// The explicit sum is accepted only while `Σ|terms| ≤ CANCELLATION·|sum|`.
const CANCELLATION: f64 = 1e4;

/// `C_m^λ(t) = Σ_k (−1)^k (λ)_{m−k} / (k! (m−2k)!) (2t)^{m−2k}`, `λ > 0`.
///
/// The alternating sum is used for `m ≤ 30` unless it cancels badly, in which
/// case (and for larger `m`) the three-term recurrence is used.
pub fn gegenbauer(m: usize, lambda: f64, t: f64) -> f64 {
    if m <= EXPLICIT_MAX {
        let (v, abs) = explicit(m, lambda, t);
        if abs <= CANCELLATION * v.abs() {
            return v;
        }
    }
    *gegenbauer_sequence(m, lambda, t).last().unwrap()
}

/// The explicit sum and the sum of its absolute terms.
fn explicit(m: usize, lambda: f64, t: f64) -> (f64, f64) {
    let mut acc = NeumaierSum::new();
    let mut abs = 0.0;
    let two_t = 2.0 * t;
    for k in 0..=m / 2 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * pochhammer(lambda, m - k) / (factorial(k) * factorial(m - 2 * k))
            * two_t.powi((m - 2 * k) as i32);
        acc.add(term);
        abs += term.abs();
    }
    (acc.value(), abs)
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

/// `[C_0^λ(t), …, C_M^λ(t)]` by the recurrence
/// `m C_m = 2t(m+λ−1) C_{m−1} − (m+2λ−2) C_{m−2}`.
pub fn gegenbauer_sequence(max_m: usize, lambda: f64, t: f64) -> Vec<f64> {
    let mut c = Vec::with_capacity(max_m + 1);
    c.push(1.0);
    if max_m >= 1 {
        c.push(2.0 * lambda * t);
    }
    for m in 2..=max_m {
        let mf = m as f64;
        let v = (2.0 * t * (mf + lambda - 1.0) * c[m - 1] - (mf + 2.0 * lambda - 2.0) * c[m - 2]) / mf;
        c.push(v);
    }
    c
}

/// Zonal harmonic of degree `m` in `ℝⁿ`, extended to the ball by homogeneity:
/// `((n−2+2m)/(n−2)) |x|^m |y|^m C_m^{(n−2)/2}(⟨x,y⟩/(|x||y|))`.
pub fn zonal(m: usize, x: &BallPoint, y: &BallPoint, n: usize) -> f64 {
    zonal_from_invariants(m, n, x.norm(), y.norm(), x.dot(y))
}

/// [`zonal`] from `|x|`, `|y|` and `⟨x,y⟩`; the points may lie on the sphere.
pub fn zonal_from_invariants(m: usize, n: usize, rx: f64, ry: f64, dot: f64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let rr = rx * ry;
    if rr == 0.0 {
        return 0.0;
    }
    let nf = n as f64;
    let t = (dot / rr).clamp(-1.0, 1.0);
    (nf - 2.0 + 2.0 * m as f64) / (nf - 2.0) * rr.powi(m as i32) * gegenbauer(m, (nf - 2.0) / 2.0, t)
}

/// `[Z_0, …, Z_M]` for fixed `(x, y)` in one pass.
pub fn zonal_sequence(max_m: usize, n: usize, rx: f64, ry: f64, dot: f64) -> Vec<f64> {
    let rr = rx * ry;
    if rr == 0.0 {
        let mut z = vec![0.0; max_m + 1];
        z[0] = 1.0;
        return z;
    }
    let nf = n as f64;
    let t = (dot / rr).clamp(-1.0, 1.0);
    let mut pow = 1.0;
    gegenbauer_sequence(max_m, (nf - 2.0) / 2.0, t)
        .into_iter()
        .enumerate()
        .map(|(m, c)| {
            let v = (nf - 2.0 + 2.0 * m as f64) / (nf - 2.0) * pow * c;
            pow *= rr;
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn low_degrees() {
        assert_eq!(gegenbauer(0, 1.7, 0.3), 1.0);
        assert_relative_eq!(gegenbauer(1, 1.7, 0.3), 2.0 * 1.7 * 0.3, max_relative = 1e-15);
        assert_relative_eq!(gegenbauer(2, 0.5, 0.4), -0.26, max_relative = 1e-14);
    }

    #[test]
    fn legendre_and_chebyshev_special_cases() {
        // λ = 1 gives Chebyshev U_m(cos θ) = sin((m+1)θ)/sin θ
        let th: f64 = 0.7;
        for m in [3usize, 10, 30, 31, 60] {
            let u = ((m as f64 + 1.0) * th).sin() / th.sin();
            assert_relative_eq!(gegenbauer(m, 1.0, th.cos()), u, max_relative = 1e-11, epsilon = 1e-12);
        }
    }

    #[test]
    fn recurrence_matches_explicit_sum() {
        for &(lambda, t) in &[(0.5, 0.1), (1.5, -0.35), (2.0, 0.9), (0.5, 1.0)] {
            let seq = gegenbauer_sequence(12, lambda, t);
            for (m, v) in seq.iter().enumerate() {
                let (e, abs) = explicit(m, lambda, t);
                assert!((v - e).abs() <= 1e-14 * abs.max(1.0), "m={m} λ={lambda} t={t}");
            }
        }
    }

    #[test]
    fn endpoint_values() {
        // C_m^λ(1) = (2λ)_m / m!
        for m in [5usize, 30, 50] {
            let exact = pochhammer(3.0, m) / pochhammer(1.0, m);
            assert_relative_eq!(gegenbauer(m, 1.5, 1.0), exact, max_relative = 1e-12);
        }
    }

    #[test]
    fn zonal_examples() {
        let x = BallPoint::new(vec![0.2, 0.0, 0.0]).unwrap();
        let y = BallPoint::new(vec![0.1, 0.1, 0.0]).unwrap();
        let o = BallPoint::origin(3);
        assert_eq!(zonal(0, &x, &y, 3), 1.0);
        assert_eq!(zonal(2, &o, &y, 3), 0.0);
        assert_relative_eq!(zonal(1, &x, &y, 3), 0.06, max_relative = 1e-14);
        let seq = zonal_sequence(8, 3, x.norm(), y.norm(), x.dot(&y));
        for (m, v) in seq.iter().enumerate() {
            assert_relative_eq!(*v, zonal(m, &x, &y, 3), max_relative = 1e-13);
        }
    }
}
