#![allow(dead_code)]

use hharmonic::BallPoint;
use statrs::function::gamma::ln_gamma;

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

pub fn point(c: &[f64]) -> BallPoint {
    BallPoint::new(c.to_vec()).unwrap()
}

/// Scales a raw direction vector to radius `r`; the zero vector maps to the origin.
pub fn scaled_point(dir: &[f64], r: f64) -> BallPoint {
    let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm < 1e-9 {
        return BallPoint::origin(dir.len());
    }
    point(&dir.iter().map(|v| v * r / norm).collect::<Vec<_>>())
}

/// `Σ (a)_k (b)_k / ((c)_k k!) z^k` by the term ratio, for `|z| < 1`.
pub fn naive_2f1(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let mut term = 1.0f64;
    let mut sum = 0.0f64;
    let mut comp = 0.0;
    for k in 0..200_000 {
        let t = sum + term;
        comp += if sum.abs() >= term.abs() { (sum - t) + term } else { (term - t) + sum };
        sum = t;
        let k = k as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        if term == 0.0 || term.abs() < 1e-19 * (sum + comp).abs() {
            break;
        }
    }
    sum + comp
}

/// Term-by-term `X₉` from log-gamma values, by total degree, for positive
/// parameters.
pub fn naive_x9(alpha: f64, beta: f64, gamma: f64, x: f64, y: f64, z: f64) -> f64 {
    let (la, lb, lc) = (ln_gamma(alpha), ln_gamma(beta), ln_gamma(gamma));
    let mut terms = Vec::new();
    let mut quiet = 0;
    let mut total = 0.0;
    for shell in 0..3000usize {
        let mut mag = 0.0;
        let mut s = 0.0;
        for p in 0..=shell {
            for q in 0..=shell - p {
                let l = shell - p - q;
                let (pf, qf, lf) = (p as f64, q as f64, l as f64);
                let mut ln = ln_gamma(alpha + 2.0 * pf + qf) - la + ln_gamma(beta + 2.0 * lf + qf) - lb
                    - ln_gamma(gamma + pf + qf + lf)
                    + lc
                    - ln_gamma(pf + 1.0)
                    - ln_gamma(qf + 1.0)
                    - ln_gamma(lf + 1.0);
                let mut sign = 1.0;
                let mut zero = false;
                for (k, v) in [(p, x), (q, y), (l, z)] {
                    if k == 0 {
                        continue;
                    }
                    if v == 0.0 {
                        zero = true;
                    } else {
                        ln += k as f64 * v.abs().ln();
                        if v < 0.0 && k % 2 == 1 {
                            sign = -sign;
                        }
                    }
                }
                if !zero {
                    let t = sign * ln.exp();
                    s += t;
                    mag += t.abs();
                    terms.push(t);
                }
            }
        }
        total += s;
        if mag <= 1e-18 * total.abs() {
            quiet += 1;
            if quiet == 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    // sum the small terms first
    terms.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    terms.iter().sum()
}
