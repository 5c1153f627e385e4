//! Integration over the unit sphere with normalized surface measure.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gauss_jacobi::{gauss_jacobi, gauss_jacobi_unit};
use crate::error::{Error, Result};
use crate::series::NeumaierSum;

/// Samples per Monte Carlo batch; each batch draws from its own stream.
const MC_BATCH: usize = 1 << 16;

/// Largest node count accepted by the tensor rule for full integrands.
const MAX_TENSOR_NODES: usize = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    TensorGaussJacobi,
    MonteCarlo,
}

/// Node counts, sample counts and seed for every oracle integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    pub nodes_radial: usize,
    pub nodes_angular: usize,
    pub mc_samples: usize,
    pub seed: u64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            scheme: Scheme::TensorGaussJacobi,
            nodes_radial: 128,
            nodes_angular: 128,
            mc_samples: 1_000_000,
            seed: 0,
        }
    }
}

impl QuadratureSpec {
    pub fn tensor(nodes_radial: usize, nodes_angular: usize) -> Self {
        Self {
            nodes_radial,
            nodes_angular,
            ..Self::default()
        }
    }

    pub fn monte_carlo(mc_samples: usize, seed: u64) -> Self {
        Self {
            scheme: Scheme::MonteCarlo,
            mc_samples,
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes_radial == 0 || self.nodes_angular == 0 || self.mc_samples < 2 {
            return Err(Error::domain(
                "quadrature needs at least one node per direction and two Monte Carlo samples",
            ));
        }
        Ok(())
    }
}

/// Which coordinates of `η` an integrand reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dependency {
    /// Only `η₁, η₂`.
    TwoCoordinate,
    Full,
}

/// A real function on the unit sphere.
pub struct SphereFunction<'a> {
    f: Box<dyn Fn(&[f64]) -> f64 + Sync + 'a>,
    dependency: Dependency,
}

impl<'a> SphereFunction<'a> {
    /// An integrand that depends on `η₁, η₂` only.
    pub fn two_coordinate(f: impl Fn(f64, f64) -> f64 + Sync + 'a) -> Self {
        Self {
            f: Box::new(move |eta: &[f64]| f(eta[0], eta[1])),
            dependency: Dependency::TwoCoordinate,
        }
    }

    pub fn full(f: impl Fn(&[f64]) -> f64 + Sync + 'a) -> Self {
        Self {
            f: Box::new(f),
            dependency: Dependency::Full,
        }
    }

    pub fn dependency(&self) -> Dependency {
        self.dependency
    }

    pub fn eval(&self, eta: &[f64]) -> f64 {
        (self.f)(eta)
    }

    /// Largest change in value when `η₃, …, η_n` are redrawn with `η₁, η₂`
    /// held fixed, over `probes` random points.
    pub fn probe_two_coordinate(&self, n: usize, probes: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..probes {
            let eta = random_unit(&mut rng, n);
            let head = eta[0] * eta[0] + eta[1] * eta[1];
            let mut other = random_unit(&mut rng, n - 2);
            let scale = (1.0 - head).max(0.0).sqrt();
            other.iter_mut().for_each(|c| *c *= scale);
            let mut eta2 = vec![eta[0], eta[1]];
            eta2.extend(other);
            worst = worst.max((self.eval(&eta) - self.eval(&eta2)).abs());
        }
        worst
    }
}

/// A quadrature value; `std_error` is zero for deterministic rules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureEstimate {
    pub value: f64,
    pub std_error: f64,
    pub evaluations: usize,
}

/// `∫_{S^{n−1}} f dσ` with `σ` of total mass one.
///
/// Under the tensor scheme a two-coordinate integrand is reduced to the unit
/// disk, `dσ ∝ (1−ρ²)^{(n−4)/2} ρ dρ dφ`, with a Gauss–Jacobi rule in `ρ`
/// (weight `ρ(1−ρ)^{(n−4)/2}`) and the trapezoid rule in `φ`; a full
/// integrand uses the nested product rule over `η₁, η₂, …`. The Monte Carlo
/// scheme samples normalized Gaussian vectors.
pub fn sphere_quadrature(f: &SphereFunction, n: usize, spec: &QuadratureSpec) -> Result<QuadratureEstimate> {
    if n < 3 {
        return Err(Error::domain(format!("sphere quadrature needs n ≥ 3, got {n}")));
    }
    spec.validate()?;
    match (spec.scheme, f.dependency) {
        (Scheme::MonteCarlo, _) => Ok(monte_carlo(f, n, spec)),
        (Scheme::TensorGaussJacobi, Dependency::TwoCoordinate) => disk_rule(f, n, spec),
        (Scheme::TensorGaussJacobi, Dependency::Full) => product_rule(f, n, spec),
    }
}

fn disk_rule(f: &SphereFunction, n: usize, spec: &QuadratureSpec) -> Result<QuadratureEstimate> {
    let e = (n as f64 - 4.0) / 2.0;
    let rho = gauss_jacobi_unit(spec.nodes_radial, e, 1.0)?;
    let k = spec.nodes_angular;
    let rows: Vec<(f64, f64)> = rho
        .nodes
        .par_iter()
        .zip(&rho.weights)
        .map(|(&r, &w)| {
            let w = w * (1.0 + r).powf(e);
            let mut eta = vec![0.0; n];
            eta[2] = (1.0 - r * r).max(0.0).sqrt();
            let mut row = NeumaierSum::new();
            for j in 0..k {
                let phi = 2.0 * PI * j as f64 / k as f64;
                eta[0] = r * phi.cos();
                eta[1] = r * phi.sin();
                row.add(f.eval(&eta));
            }
            (w * row.value(), w)
        })
        .collect();
    let mut num = NeumaierSum::new();
    let mut den = NeumaierSum::new();
    for (v, w) in rows {
        num.add(v);
        den.add(w);
    }
    Ok(QuadratureEstimate {
        value: num.value() / (den.value() * k as f64),
        std_error: 0.0,
        evaluations: rho.len() * k,
    })
}

/// Nested rule: `η₁ = t` with weight `(1−t²)^{(d−3)/2}` on each `S^{d−1}`,
/// down to the circle.
fn product_rule(f: &SphereFunction, n: usize, spec: &QuadratureSpec) -> Result<QuadratureEstimate> {
    let levels = n - 2;
    let total = spec
        .nodes_radial
        .checked_pow(levels as u32)
        .and_then(|v| v.checked_mul(spec.nodes_angular))
        .filter(|&v| v <= MAX_TENSOR_NODES)
        .ok_or_else(|| {
            Error::domain(format!(
                "product rule in n = {n} with {} × {} nodes is too large; use Monte Carlo",
                spec.nodes_radial, spec.nodes_angular
            ))
        })?;
    // normalized rules for d = n, n−1, …, 3
    let mut rules = Vec::with_capacity(levels);
    for d in (3..=n).rev() {
        let e = (d as f64 - 3.0) / 2.0;
        let r = gauss_jacobi(spec.nodes_radial, e, e)?;
        let s: f64 = r.weights.iter().sum();
        rules.push((r.nodes.clone(), r.weights.iter().map(|w| w / s).collect::<Vec<_>>()));
    }
    let k = spec.nodes_angular;
    let outer = &rules[0];
    let parts: Vec<f64> = outer
        .0
        .par_iter()
        .zip(&outer.1)
        .map(|(&t, &w)| {
            let mut eta = vec![0.0; n];
            eta[0] = t;
            w * nested(f, &rules, 1, (1.0 - t * t).max(0.0).sqrt(), &mut eta, k)
        })
        .collect();
    Ok(QuadratureEstimate {
        value: parts.into_iter().collect::<NeumaierSum>().value(),
        std_error: 0.0,
        evaluations: total,
    })
}

fn nested(f: &SphereFunction, rules: &[(Vec<f64>, Vec<f64>)], level: usize, radius: f64, eta: &mut [f64], k: usize) -> f64 {
    let mut acc = NeumaierSum::new();
    if level == rules.len() {
        let i = eta.len() - 2;
        for j in 0..k {
            let phi = 2.0 * PI * j as f64 / k as f64;
            eta[i] = radius * phi.cos();
            eta[i + 1] = radius * phi.sin();
            acc.add(f.eval(eta));
        }
        return acc.value() / k as f64;
    }
    let (nodes, weights) = &rules[level];
    for (&t, &w) in nodes.iter().zip(weights) {
        eta[level] = radius * t;
        acc.add(w * nested(f, rules, level + 1, radius * (1.0 - t * t).max(0.0).sqrt(), eta, k));
    }
    acc.value()
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 0.0 {
            return v.into_iter().map(|c| c / norm).collect();
        }
    }
}

/// Batches are independent streams of one seeded generator and are reduced
/// in batch order, so the result does not depend on the thread count.
fn monte_carlo(f: &SphereFunction, n: usize, spec: &QuadratureSpec) -> QuadratureEstimate {
    let total = spec.mc_samples;
    let batches = total.div_ceil(MC_BATCH);
    let parts: Vec<(f64, f64)> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(b as u64);
            let count = MC_BATCH.min(total - b * MC_BATCH);
            let mut s = NeumaierSum::new();
            let mut s2 = NeumaierSum::new();
            for _ in 0..count {
                let v = f.eval(&random_unit(&mut rng, n));
                s.add(v);
                s2.add(v * v);
            }
            (s.value(), s2.value())
        })
        .collect();
    let mut s = NeumaierSum::new();
    let mut s2 = NeumaierSum::new();
    for (a, b) in parts {
        s.add(a);
        s2.add(b);
    }
    let nf = total as f64;
    let mean = s.value() / nf;
    let var = ((s2.value() - nf * mean * mean) / (nf - 1.0)).max(0.0);
    QuadratureEstimate {
        value: mean,
        std_error: (var / nf).sqrt(),
        evaluations: total,
    }
}
