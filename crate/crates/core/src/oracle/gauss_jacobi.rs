//! Gauss–Jacobi quadrature rules.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::hypergeom::gamma_ratio;
use crate::series::NeumaierSum;

/// Nodes and weights of an interpolatory rule.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ wᵢ f(xᵢ)` with compensated accumulation.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).collect::<NeumaierSum>().value()
    }
}

type RuleKey = (usize, u64, u64);

fn cache() -> &'static Mutex<HashMap<RuleKey, Arc<GaussRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<GaussRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `N`-point rule for `∫_{−1}^{1} (1−x)^a (1+x)^b f(x) dx`, `a, b > −1`.
///
/// Nodes are the eigenvalues of the Jacobi matrix, refined by Newton steps
/// on `P_N^{(a,b)}`; weights use the closed form in `P_N'`. Rules are cached.
pub fn gauss_jacobi(count: usize, a: f64, b: f64) -> Result<Arc<GaussRule>> {
    if count == 0 {
        return Err(Error::domain("a quadrature rule needs at least one node"));
    }
    if !(a > -1.0 && b > -1.0) {
        return Err(Error::domain(format!("Jacobi exponents must exceed −1, got a = {a}, b = {b}")));
    }
    let key = (count, a.to_bits(), b.to_bits());
    if let Some(r) = cache().lock().unwrap().get(&key) {
        return Ok(Arc::clone(r));
    }
    let rule = Arc::new(build(count, a, b)?);
    cache().lock().unwrap().insert(key, Arc::clone(&rule));
    Ok(rule)
}

/// `N`-point rule for `∫_0^1 (1−t)^a t^b f(t) dt`.
pub fn gauss_jacobi_unit(count: usize, a: f64, b: f64) -> Result<GaussRule> {
    let r = gauss_jacobi(count, a, b)?;
    let scale = 2f64.powf(-(a + b + 1.0));
    Ok(GaussRule {
        nodes: r.nodes.iter().map(|x| 0.5 * (x + 1.0)).collect(),
        weights: r.weights.iter().map(|w| w * scale).collect(),
    })
}

fn build(count: usize, a: f64, b: f64) -> Result<GaussRule> {
    let ab = a + b;
    let mut diag = Vec::with_capacity(count);
    let mut off = vec![0.0; count];
    for k in 0..count {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        diag.push(if k == 0 { (b - a) / (ab + 2.0) } else { (b * b - a * a) / (s * (s + 2.0)) });
        if k + 1 < count {
            let j = kf + 1.0;
            let sj = 2.0 * j + ab;
            let beta2 = if k == 0 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab))
            } else {
                4.0 * j * (j + a) * (j + b) * (j + ab) / (sj * sj * (sj + 1.0) * (sj - 1.0))
            };
            off[k] = beta2.sqrt();
        }
    }
    tridiagonal_eigenvalues(&mut diag, &mut off)?;
    diag.sort_by(|x, y| x.partial_cmp(y).unwrap());

    // Weights are ∝ 1/((1−x²) P_N'(x)²); the common factor is fixed by the
    // total mass, which avoids ln Γ of large arguments.
    let mut nodes = Vec::with_capacity(count);
    let mut weights = Vec::with_capacity(count);
    for &x0 in &diag {
        let mut x = x0;
        for _ in 0..3 {
            let (p, dp) = jacobi_with_derivative(count, a, b, x);
            let dx = p / dp;
            if !dx.is_finite() {
                break;
            }
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1e-3) {
                break;
            }
        }
        let (_, dp) = jacobi_with_derivative(count, a, b, x);
        nodes.push(x);
        weights.push(1.0 / ((1.0 - x) * (1.0 + x) * dp * dp));
    }
    let mass = 2f64.powf(ab + 1.0)
        * gamma_ratio(&[a + 1.0, b + 1.0], &[ab + 2.0]).expect("a, b > −1 keeps the gammas finite");
    let total = weights.iter().copied().collect::<NeumaierSum>().value();
    weights.iter_mut().for_each(|w| *w *= mass / total);
    Ok(GaussRule { nodes, weights })
}

/// `P_N^{(a,b)}(x)` and its derivative by the three-term recurrence.
fn jacobi_with_derivative(count: usize, a: f64, b: f64, x: f64) -> (f64, f64) {
    let ab = a + b;
    let mut p0 = 1.0;
    let mut p1 = (a + 1.0) + (ab + 2.0) * (x - 1.0) / 2.0;
    if count == 1 {
        return (p1, (ab + 2.0) / 2.0);
    }
    for k in 2..=count {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        let c0 = 2.0 * kf * (kf + ab) * (s - 2.0);
        let c1 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c2 = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * s;
        let p2 = (c1 * p1 - c2 * p0) / c0;
        p0 = p1;
        p1 = p2;
    }
    let nf = count as f64;
    let s = 2.0 * nf + ab;
    let dp = (nf * ((a - b) - s * x) * p1 + 2.0 * (nf + a) * (nf + b) * p0) / (s * (1.0 - x * x));
    (p1, dp)
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e[0..n−1]`, by implicit QL; `d` is overwritten.
fn tridiagonal_eigenvalues(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::non_convergence(d[l], iter, e[l].abs()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let bb = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * bb;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - bb;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
