//! Rising factorials and the gamma-function helpers built on them.

use statrs::function::gamma::ln_gamma;

/// A real number stored as `sign · exp(ln_abs)`. `sign == 0` encodes zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    pub ln_abs: f64,
    pub sign: i8,
}

impl SignedLog {
    pub const ONE: SignedLog = SignedLog {
        ln_abs: 0.0,
        sign: 1,
    };
    pub const ZERO: SignedLog = SignedLog {
        ln_abs: f64::NEG_INFINITY,
        sign: 0,
    };

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            SignedLog {
                ln_abs: x.abs().ln(),
                sign: if x > 0.0 { 1 } else { -1 },
            }
        }
    }

    #[inline]
    pub fn mul(self, other: SignedLog) -> Self {
        if self.sign == 0 || other.sign == 0 {
            return Self::ZERO;
        }
        SignedLog {
            ln_abs: self.ln_abs + other.ln_abs,
            sign: self.sign * other.sign,
        }
    }

    /// Panics on division by zero.
    #[inline]
    pub fn div(self, other: SignedLog) -> Self {
        assert!(other.sign != 0, "division by a zero SignedLog");
        if self.sign == 0 {
            return Self::ZERO;
        }
        SignedLog {
            ln_abs: self.ln_abs - other.ln_abs,
            sign: self.sign * other.sign,
        }
    }

    #[inline]
    pub fn mul_f64(self, x: f64) -> Self {
        self.mul(SignedLog::from_f64(x))
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.ln_abs.exp()
        }
    }
}

/// `(a)_m = a(a+1)…(a+m−1)` by direct product.
pub fn pochhammer(a: f64, m: usize) -> f64 {
    let mut p = 1.0;
    for k in 0..m {
        p *= a + k as f64;
        if p == 0.0 {
            break;
        }
    }
    p
}

/// `(a)_m` in log-magnitude + sign form; safe where the plain product
/// overflows.
pub fn ln_pochhammer(a: f64, m: usize) -> SignedLog {
    if m == 0 {
        return SignedLog::ONE;
    }
    if let Some(k) = non_positive_integer(a) {
        if (k as usize) < m {
            return SignedLog::ZERO;
        }
    }
    // Γ(a+m)/Γ(a) once both arguments are comfortably positive; the direct
    // product is exact enough (and cheaper) for short runs.
    if a > 0.0 && m > 64 {
        return SignedLog {
            ln_abs: ln_gamma(a + m as f64) - ln_gamma(a),
            sign: 1,
        };
    }
    let mut acc = SignedLog::ONE;
    for k in 0..m {
        acc = acc.mul_f64(a + k as f64);
    }
    acc
}

/// `(a)_m / (b)_m` as a product of ratios, which stays finite long after the
/// numerator and denominator individually overflow.
pub fn pochhammer_ratio(a: f64, b: f64, m: usize) -> f64 {
    let mut r = 1.0;
    for k in 0..m {
        let k = k as f64;
        r *= (a + k) / (b + k);
    }
    r
}

/// If `x` is one of 0, −1, −2, … returns its magnitude.
pub fn non_positive_integer(x: f64) -> Option<u64> {
    if x <= 0.0 && x == x.round() && x > -1e15 {
        Some((-x) as u64)
    } else {
        None
    }
}

/// `ln|Γ(x)|` and the sign of `Γ(x)`; `None` at the poles.
pub fn ln_gamma_signed(x: f64) -> Option<SignedLog> {
    if non_positive_integer(x).is_some() {
        return None;
    }
    if x > 0.0 {
        return Some(SignedLog {
            ln_abs: ln_gamma(x),
            sign: 1,
        });
    }
    // reflection: Γ(x)Γ(1−x) = π / sin(πx)
    let s = (std::f64::consts::PI * x).sin();
    let ln_abs = std::f64::consts::PI.ln() - s.abs().ln() - ln_gamma(1.0 - x);
    let sign = if (x.floor() as i64).rem_euclid(2) == 1 {
        -1
    } else {
        1
    };
    Some(SignedLog { ln_abs, sign })
}

/// `Π Γ(num_i) / Π Γ(den_j)`. Poles in the denominator give zero; a pole in
/// the numerator gives `None`.
pub fn gamma_ratio(num: &[f64], den: &[f64]) -> Option<f64> {
    if den.iter().any(|&x| non_positive_integer(x).is_some()) {
        return Some(0.0);
    }
    if num.iter().any(|&x| non_positive_integer(x).is_some()) {
        return None;
    }
    // Large arguments are paired (sorted order) and shifted down together by
    // an exact product, so ln Γ is only ever taken of moderate arguments.
    let mut num = num.to_vec();
    let mut den = den.to_vec();
    num.sort_by(|a, b| b.total_cmp(a));
    den.sort_by(|a, b| b.total_cmp(a));
    let mut acc = SignedLog::ONE;
    for (p, q) in num.iter_mut().zip(den.iter_mut()) {
        acc = acc.mul(shift_pair(p, q));
    }
    for &x in &den {
        acc = acc.div(ln_gamma_signed(x).expect("poles excluded above"));
    }
    for &x in &num {
        acc = acc.mul(ln_gamma_signed(x).expect("poles excluded above"));
    }
    Some(acc.to_f64())
}

const SHIFT_FLOOR: f64 = 8.0;
const SHIFT_MAX: f64 = 1e5;

/// Rewrites `Γ(p)/Γ(q)` as `r · Γ(p−k)/Γ(q−k)` and returns `r`.
fn shift_pair(p: &mut f64, q: &mut f64) -> SignedLog {
    let lo = p.min(*q);
    if lo <= 2.0 * SHIFT_FLOOR || lo > SHIFT_MAX {
        return SignedLog::ONE;
    }
    let k = (lo - SHIFT_FLOOR).floor() as usize;
    let mut acc = SignedLog::ONE;
    let mut block = 1.0;
    for j in 1..=k {
        let j = j as f64;
        block *= (*p - j) / (*q - j);
        if !(1e-150..=1e150).contains(&block) {
            acc = acc.mul_f64(block);
            block = 1.0;
        }
    }
    *p -= k as f64;
    *q -= k as f64;
    acc.mul_f64(block)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(7.25, 0), 1.0);
        assert_eq!(pochhammer(3.0, 4), 360.0);
        assert_eq!(pochhammer(-2.0, 3), 0.0);
        assert_eq!(pochhammer(-2.0, 2), 2.0);
    }

    #[test]
    fn log_form_matches_product() {
        for &(a, m) in &[(0.5, 10usize), (-3.5, 7), (2.0, 100), (1.5, 150), (-0.25, 90)] {
            let direct = pochhammer(a, m);
            let lg = ln_pochhammer(a, m);
            assert_relative_eq!(lg.to_f64(), direct, max_relative = 1e-12);
        }
        assert_eq!(ln_pochhammer(-4.0, 5).sign, 0);
        assert_relative_eq!(ln_pochhammer(-4.0, 4).to_f64(), 24.0, max_relative = 1e-15);
        // overflowing product still has a finite logarithm
        let big = ln_pochhammer(2.0, 400);
        assert!(big.ln_abs.is_finite() && big.ln_abs > 700.0);
    }

    #[test]
    fn ratio_survives_overflow() {
        // (n−1)_m/(n/2)_m for n = 3 behaves like m^{1/2} Γ(3/2)/Γ(2)
        let r = pochhammer_ratio(2.0, 1.5, 500);
        let via_gamma = gamma_ratio(&[2.0 + 500.0, 1.5], &[2.0, 1.5 + 500.0]).unwrap();
        assert_relative_eq!(r, via_gamma, max_relative = 1e-11);
    }

    #[test]
    fn large_arguments_are_paired() {
        let v = gamma_ratio(&[31.5, 120.25], &[32.0, 118.75]).unwrap();
        assert_relative_eq!(v, 232.21276391128686, max_relative = 5e-14);
    }

    #[test]
    fn gamma_signs_and_poles() {
        assert_relative_eq!(gamma_ratio(&[-0.5], &[]).unwrap(), -2.0 * std::f64::consts::PI.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(gamma_ratio(&[-1.5], &[]).unwrap(), 4.0 / 3.0 * std::f64::consts::PI.sqrt(), max_relative = 1e-13);
        assert_eq!(gamma_ratio(&[1.0], &[-2.0]), Some(0.0));
        assert_eq!(gamma_ratio(&[-2.0], &[1.0]), None);
        assert_relative_eq!(gamma_ratio(&[6.0], &[3.0]).unwrap(), 60.0, max_relative = 1e-13);
    }
}
