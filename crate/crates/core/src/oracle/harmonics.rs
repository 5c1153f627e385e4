//! Spherical harmonics in three dimensions and the zonal reproducing check.

use super::sphere::{sphere_quadrature, QuadratureSpec, SphereFunction};
use crate::error::{Error, Result};
use crate::hypergeom::zonal_from_invariants;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Re,
    Im,
}

/// `Re` or `Im` of the solid harmonic
/// `(x+iy)^k Σ_j (−1)^j (2m−2j)! / (2^m j! (m−j)! (m−2j−k)!) z^{m−2j−k} r^{2j}`,
/// homogeneous of degree `m` and harmonic in `ℝ³`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolidHarmonic3 {
    pub m: usize,
    pub k: usize,
    pub part: Part,
}

impl SolidHarmonic3 {
    pub fn eval(&self, p: &[f64]) -> f64 {
        let (x, y, z) = (p[0], p[1], p[2]);
        let r2 = x * x + y * y + z * z;
        let (m, k) = (self.m, self.k);
        let fact = |n: usize| (1..=n).map(|v| v as f64).product::<f64>();
        let mut poly = 0.0;
        let mut j = 0;
        while 2 * j + k <= m {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            poly += sign * fact(2 * m - 2 * j) / (2f64.powi(m as i32) * fact(j) * fact(m - j) * fact(m - 2 * j - k))
                * z.powi((m - 2 * j - k) as i32)
                * r2.powi(j as i32);
            j += 1;
        }
        // (x + iy)^k
        let (mut re, mut im) = (1.0, 0.0);
        for _ in 0..k {
            (re, im) = (re * x - im * y, re * y + im * x);
        }
        poly * match self.part {
            Part::Re => re,
            Part::Im => im,
        }
    }
}

/// A basis (`2m+1` elements) of the degree-`m` spherical harmonics on `S²`.
pub fn harmonic_basis_3d(m: usize) -> Vec<SolidHarmonic3> {
    let mut basis = vec![SolidHarmonic3 { m, k: 0, part: Part::Re }];
    for k in 1..=m {
        basis.push(SolidHarmonic3 { m, k, part: Part::Re });
        basis.push(SolidHarmonic3 { m, k, part: Part::Im });
    }
    basis
}

/// `|∫ Z_m(x, η) p(η) dσ(η) − p(x)|` for a unit vector `x` and a degree-`m`
/// spherical harmonic `p`.
pub fn zonal_reproducing_check(
    m: usize,
    p: &(dyn Fn(&[f64]) -> f64 + Sync),
    x: &[f64],
    n: usize,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if x.len() != n {
        return Err(Error::domain(format!("x must have {n} coordinates")));
    }
    let norm = x.iter().map(|c| c * c).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::domain(format!("x must be a unit vector, |x| = {norm}")));
    }
    let f = SphereFunction::full(|eta: &[f64]| {
        let dot: f64 = x.iter().zip(eta).map(|(a, b)| a * b).sum();
        zonal_from_invariants(m, n, 1.0, 1.0, dot) * p(eta)
    });
    Ok((sphere_quadrature(&f, n, spec)?.value - p(x)).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian(f: &SolidHarmonic3, p: [f64; 3]) -> f64 {
        // the second difference of a quartic is off by exactly h²f⁗/12, which
        // Richardson extrapolation cancels
        (4.0 * second_difference(f, p, 5e-3) - second_difference(f, p, 1e-2)) / 3.0
    }

    fn second_difference(f: &SolidHarmonic3, p: [f64; 3], h: f64) -> f64 {
        let mut acc = 0.0;
        for i in 0..3 {
            let mut a = p;
            let mut b = p;
            a[i] += h;
            b[i] -= h;
            acc += f.eval(&a) - 2.0 * f.eval(&p) + f.eval(&b);
        }
        acc / (h * h)
    }

    #[test]
    fn basis_is_harmonic_and_homogeneous() {
        for m in 0..=4 {
            let basis = harmonic_basis_3d(m);
            assert_eq!(basis.len(), 2 * m + 1);
            for h in &basis {
                let p = [0.3, -0.2, 0.5];
                assert!(laplacian(h, p).abs() < 1e-8, "{h:?}");
                let scaled = [0.6, -0.4, 1.0];
                let expect = 2f64.powi(m as i32) * h.eval(&p);
                assert!((h.eval(&scaled) - expect).abs() < 1e-12 * expect.abs().max(1.0));
            }
        }
    }

    #[test]
    fn low_degree_examples() {
        let spec = QuadratureSpec::tensor(12, 12);
        let e1 = [1.0, 0.0, 0.0];
        assert!(zonal_reproducing_check(0, &|_| 1.0, &e1, 3, &spec).unwrap() < 1e-14);
        assert!(zonal_reproducing_check(1, &|e: &[f64]| e[0], &e1, 3, &spec).unwrap() < 1e-14);
        assert!(zonal_reproducing_check(2, &|e: &[f64]| e[0] * e[1], &e1, 3, &spec).unwrap() < 1e-14);
    }
}
