//! Invariant suite behind `selftest`: every family draws its own seeded
//! random cases, compares two independent evaluations and counts passes.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::Result;
use crate::hypergeom::{appell_f1, exton_x9, gauss_2f1, pfq, HypergeomParams};
use crate::kernels::{
    bergman_coeff, bergman_triple_series, bergman_zonal_series, compute_im_table, szego_diagonal, szego_finite_sum,
    szego_radial_f1, szego_x9, ImTable,
};
use crate::oracle::{
    harmonic_basis_3d, hharmonicity_residual, pair_integral_estimate, pair_integral_quadrature,
    residual_decay_order, sphere_quadrature, szego_quadrature, validated_coefficient, zonal_reproducing_check,
    LaplacianCoefficient, QuadratureSpec, SphereFunction, DECAY_STEPS,
};
use crate::kernels::pair_integral_x9;
use crate::point::{BallPoint, KernelParams};
use crate::series::{NeumaierSum, SeriesConfig};

/// Outcome of one invariant family.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyReport {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    /// Largest residual relative to its tolerance.
    pub worst_ratio: f64,
    pub first_failure: Option<String>,
}

impl FamilyReport {
    pub fn ok(&self) -> bool {
        self.passed == self.total && self.total > 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub families: Vec<FamilyReport>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.families.iter().all(FamilyReport::ok)
    }
}

struct Tally {
    report: FamilyReport,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self {
            report: FamilyReport {
                name,
                passed: 0,
                total: 0,
                worst_ratio: 0.0,
                first_failure: None,
            },
        }
    }

    fn fail(&mut self, msg: String) {
        self.report.total += 1;
        self.report.worst_ratio = f64::INFINITY;
        self.report.first_failure.get_or_insert(msg);
    }

    /// Records `residual ≤ tol`; a NaN residual fails.
    fn check(&mut self, residual: f64, tol: f64, what: impl FnOnce() -> String) {
        self.report.total += 1;
        let ratio = residual / tol;
        if ratio <= 1.0 {
            self.report.passed += 1;
            self.report.worst_ratio = self.report.worst_ratio.max(ratio);
        } else {
            self.report.worst_ratio = if ratio.is_nan() { f64::INFINITY } else { self.report.worst_ratio.max(ratio) };
            self.report.first_failure.get_or_insert_with(|| format!("{} (residual {residual:.3e}, tol {tol:.1e})", what()));
        }
    }

    /// Runs a fallible case; errors count as failures.
    fn case(&mut self, tol: f64, label: impl Fn() -> String, f: impl FnOnce() -> Result<f64>) {
        match f() {
            Ok(r) => self.check(r, tol, &label),
            Err(e) => self.fail(format!("{}: {e}", label())),
        }
    }

    fn finish(self) -> FamilyReport {
        self.report
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn rng_for(seed: u64, family: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(family);
    r
}

fn unit_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|c| c / norm).collect();
        }
    }
}

fn ball_point(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> BallPoint {
    let r = radius * rng.random::<f64>();
    BallPoint::new(unit_vector(rng, n).into_iter().map(|c| c * r).collect()).expect("radius below one")
}

fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    g.qr().q()
}

fn rotate(u: &DMatrix<f64>, x: &BallPoint) -> BallPoint {
    let v = u * nalgebra::DVector::from_column_slice(x.coords());
    BallPoint::new(v.iter().copied().collect()).expect("rotation preserves the norm")
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// Keeps a parameter away from the non-positive integers.
fn avoid_poles(v: f64) -> f64 {
    if v <= 0.0 && (v - v.round()).abs() < 0.05 {
        v + 0.1
    } else {
        v
    }
}

/// Runs every invariant family at self-test scale.
pub fn selftest(seed: u64) -> SelftestReport {
    let cfg = SeriesConfig::default();
    let families = vec![
        pfaff_family(seed, &cfg),
        quadratic_family(seed, &cfg),
        euler_family(seed, &cfg),
        f1_euler_family(seed, &cfg),
        f1_diagonal_family(seed, &cfg),
        x9_naive_family(seed, &cfg),
        proposition_family(seed, &cfg),
        saalschutz_family(seed, &cfg),
        zonal_family(seed),
        symmetry_family(seed, &cfg),
        rotation_family(seed, &cfg),
        constants_family(seed, &cfg),
        cauchy_schwarz_family(seed, &cfg),
        gram_family(seed, &cfg),
        diagonal_chain_family(&cfg),
        agreement_family(seed, &cfg),
        pair_integral_family(seed, &cfg),
        bergman_family(seed, &cfg),
        hardy_limit_family(seed, &cfg),
        im_family(),
        harmonicity_family(seed, &cfg),
        monte_carlo_family(seed),
    ];
    SelftestReport { seed, families }
}

fn pfaff_family(seed: u64, cfg: &SeriesConfig) -> FamilyReport {
    let mut t = Tally::new("2F1 Pfaff vs direct series");
    let mut rng = rng_for(seed, 1);
    for _ in 0..20 {
        let a = uniform(&mut rng, 0.1, 3.0);
        let b = avoid_poles(uniform(&mut rng, -2.0, 2.0));
        let c = uniform(&mut rng, 0.5, 4.0);
        let z = uniform(&mut rng, -5.0, 0.0);
        t.case(1e-13, || format!("a={a} b={b} c={c} z={z}"), || {
            let got = gauss_2f1(a, b, c, z, cfg)?.value;
            let w = z / (z - 1.0);
            let mut term = 1.0;
            let mut acc = NeumaierSum::new();
            for k in 0..20_000 {
                acc.add(term);
                let k = k as f64;
                term *= (a + k) * (c - b + k) / ((c + k) * (k + 1.0)) * w;
                if term.abs() < 1e-18 * acc.value().abs() {
                    break;
                }
            }
            Ok(rel(got, (1.0 - z).powf(-a) * acc.value()))
        });
    }
    t.finish()
}

fn quadratic_family(seed: u64, cfg: &SeriesConfig) -> FamilyReport {
    let mut t = Tally::new("2F1 Gauss quadratic transformation");
    let mut rng = rng_for(seed, 2);
    for _ in 0..20 {
        let a = uniform(&mut rng, 0.0, 4.0);
        let b = uniform(&mut rng, -2.0, 2.0);
        let s = uniform(&mut rng, 0.0, 0.9);
        t.case(1e-10, || format!("a={a} b={b} t={s}"), || {
            let lhs = gauss_2f1(a / 2.0, a / 2.0 + 0.5, a - b + 1.0, 4.0 * s / ((1.0 + s) * (1.0 + s)), cfg)?.value;
            let rhs = (1.0 + s).powf(a) * gauss_2f1(a, b, a - b + 1.0, s, cfg)?.value;
            Ok(rel(lhs, rhs))
        });
    }
    t.finish()
}

fn euler_family(seed: u64, cfg: &SeriesConfig) -> FamilyReport {
    let mut t = Tally::new("2F1 Euler transformation");
    let mut rng = rng_for(seed, 3);
    for _ in 0..20 {
        let a = avoid_poles(uniform(&mut rng, -2.0, 3.0));
        let b = avoid_poles(uniform(&mut rng, -2.0, 3.0));
        let c = uniform(&mut rng, 0.5, 4.0);
        let z = uniform(&mut rng, 0.0, 0.9);
        t.case(1e-10, || format!("a={a} b={b} c={c} z={z}"), || {
            let lhs = gauss_2f1(a, b, c, z, cfg)?.value;
            let rhs = (1.0 - z).powf(c - a - b) * gauss_2f1(c - a, c - b, c, z, cfg)?.value;
            Ok(rel(lhs, rhs))
        });
    }
    t.finish()
}

fn f1_euler_family(seed: u64, cfg: &SeriesConfig) -> FamilyReport {
    let mut t = Tally::new("F1 Euler-type transformation");
    let mut rng = rng_for(seed, 4);
    for _ in 0..20 {
        let a = uniform(&mut rng, 0.1, 3.0);
        let b1 = uniform(&mut rng, -1.5, 3.0);
        let b2 = uniform(&mut rng, -1.5, 3.0);
        let c = uniform(&mut rng, 0.5, 4.0);
        let x = uniform(&mut rng, 0.0, 0.45);
        let y = uniform(&mut rng, 0.0, 0.45);
        t.case(1e-9, || format!("a={a} b1={b1} b2={b2} c={c} x={x} y={y}"), || {
            let lhs = appell_f1(a, b1, b2, c, x, y, cfg)?.value;
            let scale = (1.0 - x).powf(-b1) * (1.0 - y).powf(-b2);
            let rhs = scale * appell_f1(c - a, b1, b2, c, x / (x - 1.0), y / (y - 1.0), cfg)?.value;
            Ok(rel(lhs, rhs))
        });
    }
    t.finish()
}

fn f1_diagonal_family(seed: u64, cfg: &SeriesConfig) -> FamilyReport {
    let mut t = Tally::new("F1 on the diagonal vs 2F1");
    let mut rng = rng_for(seed, 5);
    for _ in 0..20 {
        let a = uniform(&mut rng, 0.1, 3.0);
        let b1 = uniform(&mut rng, 0.1, 3.0);
        let b2 = uniform(&mut rng, 0.1, 3.0);
        let c = uniform(&mut rng, 0.5, 4.0);
        let z = uniform(&mut rng, 0.0, 0.7);
        t.case(1e-10, || format!("a={a} b1={b1} b2={b2} c={c} z={z}"), || {
            let lhs = appell_f1(a, b1, b2, c, z, z, cfg)?.value;
            Ok(rel(lhs, gauss_2f1(a, b1 + b2, c, z, cfg)?.value))
        });
    }
    t.finish()
}

/// Term-by-term `X₉` from log-gamma values, summed by total degree until
/// three consecutive shells are negligible.
fn x9_naive(alpha: f64, beta: f64, gamma: f64, x: f64, y: f64, z: f64) -> f64 {
    let lg = |v: f64| ln_gamma(v);
    let (la, lb, lc) = (lg(alpha), lg(beta), lg(gamma));
    let mut total = NeumaierSum::new();
    let mut quiet = 0;
    for shell in 0..2000usize {
        let mut s = NeumaierSum::new();
        let mut mag = 0.0;
        for p in 0..=shell {
            for q in 0..=shell - p {
                let l = shell - p - q;
                let (pf, qf, lf) = (p as f64, q as f64, l as f64);
                let mut ln = lg(alpha + 2.0 * pf + qf) - la + lg(beta + 2.0 * lf + qf) - lb
                    - (lg(gamma + pf + qf + lf) - lc)
                    - lg(pf + 1.0)
                    - lg(qf + 1.0)
                    - lg(lf + 1.0);
                let mut sign = 1.0;
                for (k, v) in [(p, x), (q, y), (l, z)] {
                    if k > 0 {
                        if v == 0.0 {
                            ln = f64::NEG_INFINITY;
                        } else {
                            ln += k as f64 * v.abs().ln();
                            if v < 0.0 && k % 2 == 1 {
                                sign = -sign;
                            }
                        }
                    }
                }
                let term = sign * ln.exp();
                s.add(term);
                mag += term.abs();
            }
        }
        total.add(s.value());
        if mag <= 1e-17 * total.value().abs() {
            quiet += 1;
            if quiet == 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    total.value()
}

fn x9_naive_family(seed: u64, cfg: &SeriesConfig) -> FamilyReport {
    let mut t = Tally::new("X9 shell sum vs naive triple loop");
    let mut rng = rng_for(seed, 6);
    for _ in 0..6 {
        let alpha = uniform(&mut rng, 0.1, 5.0);
        let beta = uniform(&mut rng, 0.1, 5.0);
        let gamma = uniform(&mut rng, 0.1, 5.0);
        let x = uniform(&mut rng, -0.2, 0.2);
        let y = uniform(&mut rng, -0.4, 0.4);
        let z = uniform(&mut rng, -0.2, 0.2);
        t.case(1e-10, || format!("α={alpha} β={beta} γ={gamma} x={x} y={y} z={z}"), || {
            let got = exton_x9(alpha, beta, gamma, x, y, z, cfg)?.value;
            Ok(rel(got, x9_naive(alpha, beta, gamma, x, y, z)))
        });
    }
    t.finish()
}

fn proposition_family(seed: u64, cfg: &SeriesConfig) -> FamilyReport {
    let mut t = Tally::new("F1 to X9 reduction identity");
    let mut rng = rng_for(seed, 7);
    for _ in 0..20 {
        let a = uniform(&mut rng, 0.5, 4.0);
        let b = uniform(&mut rng, 0.5, 4.0);
        let c = uniform(&mut rng, 0.5, 4.0);
        let x = uniform(&mut rng, 0.0, 0.2);
        let z = uniform(&mut rng, 0.0, 0.2);
        t.case(1e-9, || format!("a={a} b={b} c={c} x={x} z={z}"), || {
            let lhs = (1.0 + 2.0 * x).powf(-a)
                * (1.0 + 2.0 * z).powf(-b)
                * appell_f1(c, a, b, 2.0 * c, 4.0 * x / (1.0 + 2.0 * x), 4.0 * z / (1.0 + 2.0 * z), cfg)?.value;
            let rhs = exton_x9(a, b, c + 0.5, x * x, 2.0 * x * z, z * z, cfg)?.value;
            Ok(rel(lhs, rhs))
        });
    }
    t.finish()
}

fn saalschutz_family(seed: u64, cfg: &SeriesConfig) -> FamilyReport {
    let mut t = Tally::new("4F3(-1) summation");
    let mut rng = rng_for(seed, 8);
    for _ in 0..10 {
        let a = uniform(&mut rng, 0.5, 4.0);
        let b = -(rng.random_range(0..5) as f64);
        let c = -(rng.random_range(0..5) as f64);
        t.case(1e-12, || format!("a={a} b={b} c={c}"), || {
            let p = HypergeomParams::new(
                vec![a, 1.0 + a / 2.0, b, c],
                vec![a / 2.0, 1.0 + a - b, 1.0 + a - c],
                -1.0,
            )?;
            let lhs = pfq(&p, cfg)?.value;
            let rhs = (ln_gamma(1.0 + a - b) + ln_gamma(1.0 + a - c) - ln_gamma(1.0 + a) - ln_gamma(1.0 + a - b - c)).exp();
            Ok(rel(lhs, rhs))
        });
    }
    t.finish()
}

fn zonal_family(seed: u64) -> FamilyReport {
    let mut t = Tally::new("zonal reproducing property (n=3)");
    let mut rng = rng_for(seed, 9);
    let spec = QuadratureSpec::tensor(16, 16);
    for m in 0..=4 {
        let x = unit_vector(&mut rng, 3);
        for h in harmonic_basis_3d(m) {
            let p = move |e: &[f64]| h.eval(e);
            t.case(1e-6, || format!("m={m} {h:?}"), || zonal_reproducing_check(m, &p, &x, 3, &spec));
        }
    }
    t.finish()
}

fn bergman_table(n: usize, s: f64) -> Result<ImTable> {
    compute_im_table(&KernelParams::new(n, s)?, 128, &QuadratureSpec::default())
}

/// Every series route for one dimension, as closures of `(x, y)`.
type Route<'a> = (&'static str, Box<dyn Fn(&BallPoint, &BallPoint) -> Result<f64> + 'a>);

fn routes<'a>(params: &'a KernelParams, im: &'a ImTable, cfg: &'a SeriesConfig) -> Vec<Route<'a>> {
    vec![
        ("x9", Box::new(move |x, y| Ok(szego_x9(x, y, params, cfg)?.value))),
        ("finite-sum", Box::new(move |x, y| Ok(szego_finite_sum(x, y, params, cfg)?.value))),
        ("bergman-zonal", Box::new(move |x, y| Ok(bergman_zonal_series(x, y, params, im, cfg)?.value))),
        ("bergman-triple", Box::new(move |x, y| Ok(bergman_triple_series(x, y, params, im, cfg)?.value))),
    ]
}

fn symmetry_family(seed: u64, cfg: &SeriesConfig) -> FamilyReport {
    let mut t = Tally::new("kernel symmetry");
    let mut rng = rng_for(seed, 10);
    let Ok(params) = KernelParams::new(3, 1.0) else { unreachable!() };
    let im = match bergman_table(3, 1.0) {
        Ok(im) => im,
        Err(e) => {
            t.fail(format!("I_m table: {e}"));
            return t.finish();
        }
    };
    for _ in 0..5 {
        let x = ball_point(&mut rng, 3, 0.5);
        let y = ball_point(&mut rng, 3, 0.5);
        for (name, f) in routes(&params, &im, cfg) {
            t.case(1e-10, || format!("{name} x={:?} y={:?}", x.coords(), y.coords()), || Ok(rel(f(&x, &y)?, f(&y, &x)?)));
        }
    }
    t.finish()
}

fn rotation_family(seed: u64, cfg: &SeriesConfig) -> FamilyReport {
    let mut t = Tally::new("rotation invariance");
    let mut rng = rng_for(seed, 11);
    let params = KernelParams::new(4, 0.5).expect("valid parameters");
    let im = match bergman_table(4, 0.5) {
        Ok(im) => im,
        Err(e) => {
            t.fail(format!("I_m table: {e}"));
            return t.finish();
        }
    };
    for _ in 0..5 {
        let x = ball_point(&mut rng, 4, 0.5);
        let y = ball_point(&mut rng, 4, 0.5);
        let u = random_orthogonal(&mut rng, 4);
        let (ux, uy) = (rotate(&u, &x), rotate(&u, &y));
        for (name, f) in routes(&params, &im, cfg) {
            t.case(1e-10, || format!("{name} x={:?} y={:?}", x.coords(), y.coords()), || Ok(rel(f(&ux, &uy)?, f(&x, &y)?)));
        }
    }
    t.finish()
}

fn constants_family(seed: u64, cfg: &SeriesConfig) -> FamilyReport {
    let mut t = Tally::new("reproducing constants K(0, y) = 1");
    let mut rng = rng_for(seed, 12);
    for n in [3, 5] {
        let params = KernelParams::new(n, 2.0).expect("valid parameters");
        let im = match bergman_table(n, 2.0) {
            Ok(im) => im,
            Err(e) => {
                t.fail(format!("I_m table: {e}"));
                continue;
            }
        };
        let o = BallPoint::origin(n);
        for _ in 0..3 {
            let y = ball_point(&mut rng, n, 0.6);
            for (name, f) in routes(&params, &im, cfg) {
                t.case(1e-12, || format!("{name} n={n} y={:?}", y.coords()), || Ok((f(&o, &y)? - 1.0).abs()));
            }
            t.case(1e-12, || format!("radial-f1 n={n}"), || Ok((szego_radial_f1(&y, 0.0, &params, cfg)?.value - 1.0).abs()));
        }
        t.check((szego_diagonal(&o, &params) - 1.0).abs(), 1e-12, || format!("diagonal n={n}"));
    }
    t.finish()
}

fn cauchy_schwarz_family(seed: u64, cfg: &SeriesConfig) -> FamilyReport {
    let mut t = Tally::new("kernel Cauchy-Schwarz");
    let mut rng = rng_for(seed, 13);
    let params = KernelParams::new(3, 0.5).expect("valid parameters");
    let im = match bergman_table(3, 0.5) {
        Ok(im) => im,
        Err(e) => {
            t.fail(format!("I_m table: {e}"));
            return t.finish();
        }
    };
    for _ in 0..5 {
        let x = ball_point(&mut rng, 3, 0.6);
        let y = ball_point(&mut rng, 3, 0.6);
        for (name, f) in routes(&params, &im, cfg).into_iter().skip(1).take(2) {
            t.case(1.0, || format!("{name} x={:?} y={:?}", x.coords(), y.coords()), || {
                let kxy = f(&x, &y)?;
                let bound = f(&x, &x)? * f(&y, &y)? * (1.0 + 1e-9);
                Ok(if kxy * kxy <= bound { 0.0 } else { f64::INFINITY })
            });
        }
    }
    t.finish()
}

fn gram_family(seed: u64, cfg: &SeriesConfig) -> FamilyReport {
    let mut t = Tally::new("6-point Gram matrix PSD");
    let mut rng = rng_for(seed, 14);
    let params = KernelParams::new(3, 1.0).expect("valid parameters");
    let im = match bergman_table(3, 1.0) {
        Ok(im) => im,
        Err(e) => {
            t.fail(format!("I_m table: {e}"));
            return t.finish();
        }
    };
    for _ in 0..3 {
        let pts: Vec<BallPoint> = (0..6).map(|_| ball_point(&mut rng, 3, 0.6)).collect();
        for (name, f) in routes(&params, &im, cfg).into_iter().skip(1).take(2) {
            t.case(1.0, || name.to_string(), || {
                let mut g = DMatrix::zeros(6, 6);
                for i in 0..6 {
                    for j in 0..=i {
                        let v = f(&pts[i], &pts[j])?;
                        g[(i, j)] = v;
                        g[(j, i)] = v;
                    }
                }
                let eig = SymmetricEigen::new(g).eigenvalues;
                let max = eig.max();
                let min = eig.min();
                Ok((-min / (1e-8 * max)).max(0.0))
            });
        }
    }
    t.finish()
}

fn diagonal_chain_family(cfg: &SeriesConfig) -> FamilyReport {
    let mut t = Tally::new("diagonal chain");
    for n in [3, 4] {
        let params = KernelParams::hardy(n).expect("valid dimension");
        for r in [0.1, 0.3, 0.5, 0.6] {
            let x = BallPoint::on_axis(n, r).expect("inside the ball");
            let d = szego_diagonal(&x, &params);
            t.case(1e-8, || format!("n={n} r={r}"), || {
                let radial = szego_radial_f1(&x, 1.0, &params, cfg)?.value;
                let fs = szego_finite_sum(&x, &x, &params, cfg)?.value;
                let x9 = szego_x9(&x, &x, &params, cfg)?.value;
                Ok([radial, fs, x9].iter().map(|v| rel(*v, d)).fold(0.0, f64::max))
            });
        }
    }
    let three = KernelParams::hardy(3).expect("valid dimension");
    let x = BallPoint::on_axis(3, 0.3).expect("inside the ball");
    t.check(rel(szego_diagonal(&x, &three), 1.3081 / 0.8281), 1e-14, || "n=3 r=0.3 exact value".into());
    t.finish()
}

fn agreement_family(seed: u64, cfg: &SeriesConfig) -> FamilyReport {
    let mut t = Tally::new("X9 vs finite sum vs quadrature");
    let mut rng = rng_for(seed, 15);
    let spec = QuadratureSpec::default();
    for n in [3, 4] {
        let params = KernelParams::hardy(n).expect("valid dimension");
        for _ in 0..4 {
            let x = ball_point(&mut rng, n, 0.5);
            let y = ball_point(&mut rng, n, 0.5);
            t.case(1e-6, || format!("n={n} x={:?} y={:?}", x.coords(), y.coords()), || {
                let a = szego_x9(&x, &y, &params, cfg)?.value;
                let b = szego_finite_sum(&x, &y, &params, cfg)?.value;
                let c = szego_quadrature(&x, &y, n, &spec)?;
                Ok(rel(a, b).max(rel(a, c)).max(rel(b, c)))
            });
        }
    }
    t.finish()
}

fn pair_integral_family(seed: u64, cfg: &SeriesConfig) -> FamilyReport {
    let mut t = Tally::new("general exponents: X9 vs quadrature");
    let mut rng = rng_for(seed, 16);
    let spec = QuadratureSpec::default();
    for n in [3, 4] {
        let params = KernelParams::hardy(n).expect("valid dimension");
        for _ in 0..3 {
            let alpha = uniform(&mut rng, 1.5, 4.0);
            let beta = uniform(&mut rng, 1.5, 4.0);
            let x = ball_point(&mut rng, n, 0.5);
            let y = ball_point(&mut rng, n, 0.5);
            t.case(1e-6, || format!("n={n} α={alpha} β={beta}"), || {
                let a = pair_integral_x9(&x, &y, alpha, beta, &params, cfg)?.value;
                Ok(rel(a, pair_integral_quadrature(&x, &y, alpha, beta, n, &spec)?))
            });
        }
    }
    t.finish()
}

fn bergman_family(seed: u64, cfg: &SeriesConfig) -> FamilyReport {
    let mut t = Tally::new("Bergman zonal vs triple series");
    let mut rng = rng_for(seed, 17);
    for (n, s) in [(3, 1.0), (4, 0.5)] {
        let params = KernelParams::new(n, s).expect("valid parameters");
        let im = match bergman_table(n, s) {
            Ok(im) => im,
            Err(e) => {
                t.fail(format!("I_m table: {e}"));
                continue;
            }
        };
        for _ in 0..3 {
            let x = ball_point(&mut rng, n, 0.4);
            let y = ball_point(&mut rng, n, 0.4);
            t.case(1e-7, || format!("n={n} s={s}"), || {
                let a = bergman_zonal_series(&x, &y, &params, &im, cfg)?.value;
                Ok(rel(a, bergman_triple_series(&x, &y, &params, &im, cfg)?.value))
            });
        }
    }
    t.finish()
}

fn hardy_limit_family(seed: u64, cfg: &SeriesConfig) -> FamilyReport {
    let mut t = Tally::new("Bergman routes with I = 1 vs Szego");
    let mut rng = rng_for(seed, 18);
    for n in [3, 4] {
        let params = KernelParams::hardy(n).expect("valid dimension");
        let ones = ImTable::constant(&params, 1.0, 200).expect("positive entries");
        for _ in 0..3 {
            let x = ball_point(&mut rng, n, 0.4);
            let y = ball_point(&mut rng, n, 0.4);
            t.case(1e-7, || format!("n={n}"), || {
                let k = szego_x9(&x, &y, &params, cfg)?.value;
                let a = bergman_zonal_series(&x, &y, &params, &ones, cfg)?.value;
                let b = bergman_triple_series(&x, &y, &params, &ones, cfg)?.value;
                Ok(rel(a, k).max(rel(b, k)))
            });
        }
        let nf = n as f64;
        for a in 0..=4usize {
            for b in 0..=4usize {
                for g in 0..=4usize {
                    t.case(1e-10, || format!("A({a},{b},{g}) n={n}"), || {
                        let got = bergman_coeff(a, b, g, &params, &ones)?;
                        let ln = ln_gamma(nf - 1.0 + (2 * a + g) as f64) + ln_gamma(nf - 1.0 + (2 * b + g) as f64)
                            - 2.0 * ln_gamma(nf - 1.0)
                            - (ln_gamma(nf / 2.0 + (a + b + g) as f64) - ln_gamma(nf / 2.0))
                            - ln_gamma(a as f64 + 1.0)
                            - ln_gamma(b as f64 + 1.0)
                            - ln_gamma(g as f64 + 1.0);
                        Ok(rel(got, ln.exp()))
                    });
                }
            }
        }
    }
    t.finish()
}

fn im_family() -> FamilyReport {
    let mut t = Tally::new("I_m(s) exact values");
    for n in [3, 4, 5] {
        for s in [0.0, 0.5, 2.0] {
            t.case(1e-10, || format!("I_0 n={n} s={s}"), || {
                let im = compute_im_table(&KernelParams::new(n, s)?, 2, &QuadratureSpec::default())?;
                Ok((im.values()[0] - 1.0).abs())
            });
        }
    }
    t.case(1e-10, || "I_1 n=4 s=0".into(), || {
        let im = compute_im_table(&KernelParams::new(4, 0.0)?, 1, &QuadratureSpec::default())?;
        Ok((im.values()[1] - 0.85).abs())
    });
    t.finish()
}

fn harmonicity_family(seed: u64, cfg: &SeriesConfig) -> FamilyReport {
    let mut t = Tally::new("H-harmonicity of the Szego kernel");
    let mut rng = rng_for(seed, 19);
    let coeff = match validated_coefficient(3) {
        Ok(c) => c,
        Err(e) => {
            t.fail(format!("coefficient selection: {e}"));
            return t.finish();
        }
    };
    t.check(if coeff == LaplacianCoefficient::NMinusTwo { 0.0 } else { 1.0 }, 0.5, || {
        "the Poisson kernel selects 2(n-2)".into()
    });
    let params = KernelParams::hardy(3).expect("valid dimension");
    for _ in 0..3 {
        let x = ball_point(&mut rng, 3, 0.5);
        let y0 = ball_point(&mut rng, 3, 0.5);
        let f = |p: &[f64]| match BallPoint::new(p.to_vec()) {
            Ok(q) => szego_finite_sum(&q, &y0, &params, cfg).map(|r| r.value).unwrap_or(f64::NAN),
            Err(_) => f64::NAN,
        };
        t.case(1.0, || format!("x={:?}", x.coords()), || {
            let order = residual_decay_order(&f, &x, 3, &DECAY_STEPS, coeff)?;
            let r = hharmonicity_residual(&f, &x, 3, DECAY_STEPS[2], coeff)?;
            Ok(if order >= 1.8 || r == 0.0 { 0.0 } else { 1.8 / order.max(1e-3) })
        });
    }
    t.finish()
}

fn monte_carlo_family(seed: u64) -> FamilyReport {
    let mut t = Tally::new("Monte Carlo determinism and scheme agreement");
    let mut rng = rng_for(seed, 20);
    let mc = QuadratureSpec::monte_carlo(200_000, seed);
    let f = SphereFunction::full(|e: &[f64]| 1.0 + e[0] * e[0] - 0.5 * e[1]);
    t.case(0.5, || "bit-identical rerun".into(), || {
        let a = sphere_quadrature(&f, 4, &mc)?.value;
        let b = sphere_quadrature(&f, 4, &mc)?.value;
        Ok(if a.to_bits() == b.to_bits() { 0.0 } else { 1.0 })
    });
    for n in [3, 5] {
        let x = ball_point(&mut rng, n, 0.5);
        let y = ball_point(&mut rng, n, 0.5);
        t.case(4.0, || format!("pair integral n={n}"), || {
            let exact = pair_integral_quadrature(&x, &y, 2.5, 2.0, n, &QuadratureSpec::default())?;
            let est = pair_integral_estimate(&x, &y, 2.5, 2.0, n, &mc)?;
            Ok((est.value - exact).abs() / est.std_error)
        });
    }
    t.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tally_counts() {
        let mut t = Tally::new("t");
        t.check(0.5, 1.0, || "a".into());
        t.check(2.0, 1.0, || "b".into());
        t.check(f64::NAN, 1.0, || "c".into());
        let r = t.finish();
        assert_eq!((r.passed, r.total), (1, 3));
        assert!(!r.ok());
        assert!(r.first_failure.unwrap().starts_with('b'));
    }

    #[test]
    fn naive_x9_reduces_to_gauss() {
        let cfg = SeriesConfig::default();
        let v = x9_naive(1.5, 2.0, 1.25, 0.0, 0.3, 0.0);
        let g = gauss_2f1(1.5, 2.0, 1.25, 0.3, &cfg).unwrap().value;
        assert!(rel(v, g) < 1e-13);
    }

    #[test]
    fn random_orthogonal_is_orthogonal() {
        let mut rng = rng_for(3, 0);
        let u = random_orthogonal(&mut rng, 5);
        let e = &u.transpose() * &u - DMatrix::identity(5, 5);
        assert!(e.amax() < 1e-13);
    }
}
