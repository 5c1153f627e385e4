//! One function per subcommand; each writes its own output and returns the
//! exit code.

use std::io::{self, Write};
use std::sync::Arc;
use std::time::Instant;

use hharmonic::kernels::{
    bergman_triple_series, bergman_zonal_cached, bergman_zonal_series, szego, ImTable, ImTableCache, DEFAULT_IM_DEPTH,
};
use hharmonic::oracle::{pair_integral_estimate, Scheme};
use hharmonic::validation::{selftest, SelftestReport};
use hharmonic::{BallPoint, Error, EvalResult, KernelParams, QuadratureSpec, Representation, Result, SeriesConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{
    parse_coords, parse_range, BenchArgs, BergmanArgs, Command, Common, CompareArgs, DiagArgs, EvalArgs, OutputFormat,
    Rep, SchemeArg, SelftestArgs, TableArgs,
};
use crate::output::{emit, fmt_f64, ErrorKind, ErrorRecord, Report, Row};

enum ImSource {
    Override(Arc<ImTable>),
    Cache(ImTableCache),
}

/// Kernel parameters, truncation and quadrature settings of one request.
pub struct Evaluator {
    params: KernelParams,
    cfg: SeriesConfig,
    spec: QuadratureSpec,
    im: ImSource,
}

impl Evaluator {
    pub fn new(c: &Common) -> Result<Self> {
        let params = KernelParams::new(c.dim, c.s)?;
        let cfg = SeriesConfig::new(c.rel_tol, 0.0, c.max_terms)?;
        let spec = QuadratureSpec {
            scheme: match c.scheme {
                SchemeArg::Tensor => Scheme::TensorGaussJacobi,
                SchemeArg::MonteCarlo => Scheme::MonteCarlo,
            },
            nodes_radial: c.nodes,
            nodes_angular: c.nodes,
            mc_samples: c.mc_samples,
            seed: c.seed,
        };
        spec.validate()?;
        let im = match c.im_override {
            Some(v) => ImSource::Override(Arc::new(ImTable::constant(&params, v, c.max_terms.max(1))?)),
            None => ImSource::Cache(ImTableCache::new(spec)),
        };
        Ok(Self { params, cfg, spec, im })
    }

    pub fn point(&self, coords: Vec<f64>) -> Result<BallPoint> {
        let p = BallPoint::new(coords)?;
        self.params.check_point(&p)?;
        Ok(p)
    }

    pub fn eval(&self, rep: Rep, x: &BallPoint, y: &BallPoint) -> Result<EvalResult> {
        self.eval_with(rep, x, y, &self.cfg, &self.spec)
    }

    fn eval_with(
        &self,
        rep: Rep,
        x: &BallPoint,
        y: &BallPoint,
        cfg: &SeriesConfig,
        spec: &QuadratureSpec,
    ) -> Result<EvalResult> {
        let p = &self.params;
        match rep {
            Rep::Auto => szego(x, y, p, cfg, Representation::Auto),
            Rep::X9 => szego(x, y, p, cfg, Representation::X9),
            Rep::FiniteSum => szego(x, y, p, cfg, Representation::FiniteSum),
            Rep::RadialF1 => szego(x, y, p, cfg, Representation::RadialF1),
            Rep::Diagonal => szego(x, y, p, cfg, Representation::Diagonal),
            Rep::Quadrature => {
                p.check_point(x)?;
                p.check_point(y)?;
                let nf = p.nf();
                let scale = ((nf - 1.0) * ((-x.norm_sq()).ln_1p() + (-y.norm_sq()).ln_1p())).exp();
                let est = pair_integral_estimate(x, y, nf, nf, p.n, spec)?;
                Ok(EvalResult {
                    value: scale * est.value,
                    terms_used: est.evaluations,
                    tail_estimate: scale * est.std_error,
                    converged: true,
                })
            }
            Rep::BergmanZonal | Rep::BergmanTriple => self.bergman_with(rep, x, y, cfg).map(|(r, _)| r),
        }
    }

    /// Bergman kernel plus the I_m table it was summed against.
    pub fn bergman(&self, rep: Rep, x: &BallPoint, y: &BallPoint) -> Result<(EvalResult, Arc<ImTable>)> {
        self.bergman_with(rep, x, y, &self.cfg)
    }

    fn bergman_with(
        &self,
        rep: Rep,
        x: &BallPoint,
        y: &BallPoint,
        cfg: &SeriesConfig,
    ) -> Result<(EvalResult, Arc<ImTable>)> {
        let p = &self.params;
        let cap = cfg.max_terms.max(1);
        match (&self.im, rep) {
            (ImSource::Override(t), Rep::BergmanZonal) => Ok((bergman_zonal_series(x, y, p, t, cfg)?, Arc::clone(t))),
            (ImSource::Override(t), Rep::BergmanTriple) => Ok((bergman_triple_series(x, y, p, t, cfg)?, Arc::clone(t))),
            (ImSource::Cache(cache), Rep::BergmanZonal) => {
                let r = bergman_zonal_cached(x, y, p, cache, cfg)?;
                Ok((r, cache.get(p, r.terms_used.saturating_sub(1))?))
            }
            (ImSource::Cache(cache), Rep::BergmanTriple) => {
                let mut depth = DEFAULT_IM_DEPTH.min(cap);
                loop {
                    let table = cache.get(p, depth)?;
                    match bergman_triple_series(x, y, p, &table, cfg) {
                        Err(Error::NonConvergence { .. }) if depth < cap => depth = (2 * depth).min(cap),
                        r => return Ok((r?, table)),
                    }
                }
            }
            _ => Err(Error::domain(format!("{} is not a Bergman representation", rep.label()))),
        }
    }
}

fn timed<T>(no_timing: bool, f: impl FnOnce() -> T) -> (T, Option<f64>) {
    let start = Instant::now();
    let v = f();
    let t = start.elapsed().as_secs_f64();
    (v, (!no_timing).then_some(t))
}

fn rep_label(rep: Rep, common: &Common) -> String {
    if rep.is_bergman() && common.im_override.is_some() {
        format!("{}:im-override", rep.label())
    } else {
        rep.label().to_string()
    }
}

/// Parses a point and checks it against the dimension; failures are usage
/// errors.
fn coords(s: &str, dim: usize) -> std::result::Result<Vec<f64>, ErrorRecord> {
    parse_coords(s, dim).map_err(ErrorRecord::usage)
}

fn range(s: &str) -> std::result::Result<Vec<f64>, ErrorRecord> {
    parse_range(s).map_err(ErrorRecord::usage)
}

fn finish<W: Write, E: Write>(
    format: OutputFormat,
    request: &Command,
    report: &Report,
    out: W,
    err: E,
) -> io::Result<u8> {
    emit(format, request, report, out, err)?;
    Ok(report.exit_code())
}

fn failed(record: ErrorRecord) -> Report {
    Report {
        rows: Vec::new(),
        errors: vec![record],
    }
}

/// Runs a subcommand, writing results to `out` and CSV diagnostics to `err`.
pub fn execute(cmd: &Command, out: impl Write, err: impl Write) -> io::Result<u8> {
    match cmd {
        Command::Eval(a) => finish(a.common.output, cmd, &eval(a), out, err),
        Command::Diag(a) => finish(a.common.output, cmd, &diag(a), out, err),
        Command::Table(a) => finish(a.common.output, cmd, &table(a), out, err),
        Command::Compare(a) => finish(a.common.output, cmd, &compare(a), out, err),
        Command::Bergman(a) => finish(a.common.output, cmd, &bergman(a), out, err),
        Command::Selftest(a) => run_selftest(a, cmd, out, err),
        Command::Bench(a) => run_bench(a, cmd, out, err),
    }
}

fn evaluator(c: &Common) -> std::result::Result<Evaluator, ErrorRecord> {
    Evaluator::new(c).map_err(|e| ErrorRecord::from_error(&e, None))
}

pub fn eval(a: &EvalArgs) -> Report {
    let run = || -> std::result::Result<Report, ErrorRecord> {
        let ev = evaluator(&a.common)?;
        let x = ev.point(coords(&a.x, a.common.dim)?).map_err(|e| ErrorRecord::from_error(&e, None))?;
        let y = match (&a.y, a.lambda) {
            (Some(y), _) => ev.point(coords(y, a.common.dim)?),
            (None, Some(l)) => x.scaled(l),
            (None, None) => return Err(ErrorRecord::usage("eval needs --y or --lambda")),
        }
        .map_err(|e| ErrorRecord::from_error(&e, None))?;
        let (r, t) = timed(a.common.no_timing, || ev.eval(a.rep, &x, &y));
        let r = r.map_err(|e| ErrorRecord::from_error(&e, Some(0)))?;
        Ok(Report {
            rows: vec![Row::from_eval(x.coords(), y.coords(), rep_label(a.rep, &a.common), &r, t)],
            errors: Vec::new(),
        })
    };
    run().unwrap_or_else(failed)
}

/// Evaluates `pairs` concurrently; rows and errors keep the input order.
fn evaluate_grid(ev: &Evaluator, common: &Common, rep: Rep, pairs: &[(Vec<f64>, Vec<f64>)]) -> Report {
    let label = rep_label(rep, common);
    let results: Vec<std::result::Result<Row, ErrorRecord>> = pairs
        .par_iter()
        .enumerate()
        .map(|(i, (xc, yc))| {
            let x = ev.point(xc.clone()).map_err(|e| ErrorRecord::from_error(&e, Some(i)))?;
            let y = ev.point(yc.clone()).map_err(|e| ErrorRecord::from_error(&e, Some(i)))?;
            let (r, t) = timed(common.no_timing, || ev.eval(rep, &x, &y));
            let r = r.map_err(|e| ErrorRecord::from_error(&e, Some(i)))?;
            Ok(Row::from_eval(xc, yc, label.clone(), &r, t))
        })
        .collect();
    let mut report = Report::default();
    for r in results {
        match r {
            Ok(row) => report.rows.push(row),
            Err(e) => report.errors.push(e),
        }
    }
    report
}

fn axis_point(n: usize, r: f64, theta: f64) -> Vec<f64> {
    let mut c = vec![0.0; n];
    c[0] = r * theta.cos();
    c[1] = r * theta.sin();
    c
}

pub fn diag(a: &DiagArgs) -> Report {
    let run = || -> std::result::Result<Report, ErrorRecord> {
        let ev = evaluator(&a.common)?;
        let rep = if a.rep == Rep::Auto { Rep::Diagonal } else { a.rep };
        let n = a.common.dim;
        let pairs: Vec<_> = range(&a.radii)?
            .into_iter()
            .map(|r| (axis_point(n, r, 0.0), axis_point(n, r, 0.0)))
            .collect();
        Ok(evaluate_grid(&ev, &a.common, rep, &pairs))
    };
    run().unwrap_or_else(failed)
}

/// `x = r e₁` and `y = r_y (cos θ e₁ + sin θ e₂)` over the grid
/// `radii × radii_y × angles`, in that nesting order.
pub fn table(a: &TableArgs) -> Report {
    let run = || -> std::result::Result<Report, ErrorRecord> {
        let ev = evaluator(&a.common)?;
        let n = a.common.dim;
        let radii = range(&a.radii)?;
        let angles = match &a.angles {
            Some(s) => range(s)?,
            None => vec![0.0],
        };
        let radii_y = a.radii_y.as_deref().map(range).transpose()?;
        let mut pairs = Vec::new();
        for &r in &radii {
            let ys = match (&radii_y, &a.angles) {
                (Some(v), _) => v.clone(),
                (None, Some(_)) => vec![r],
                (None, None) => radii.clone(),
            };
            for &ry in &ys {
                for &theta in &angles {
                    pairs.push((axis_point(n, r, 0.0), axis_point(n, ry, theta)));
                }
            }
        }
        Ok(evaluate_grid(&ev, &a.common, a.rep, &pairs))
    };
    run().unwrap_or_else(failed)
}

/// Uniform point in the ball of radius `radius`.
fn random_point(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    let r = radius * rng.random::<f64>().powf(1.0 / n as f64);
    v.into_iter().map(|c| c * r / norm).collect()
}

fn relative_residual(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

pub fn compare(a: &CompareArgs) -> Report {
    let run = || -> std::result::Result<Report, ErrorRecord> {
        if a.rep.len() < 2 {
            return Err(ErrorRecord::usage("compare needs at least two representations"));
        }
        let ev = evaluator(&a.common)?;
        let n = a.common.dim;
        let pairs: Vec<(Vec<f64>, Vec<f64>)> = match (&a.x, &a.y) {
            (Some(x), Some(y)) => vec![(coords(x, n)?, coords(y, n)?)],
            _ => {
                if !(a.radius >= 0.0 && a.radius < 1.0) {
                    return Err(ErrorRecord::usage("--radius must lie in [0, 1)"));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(a.common.seed);
                (0..a.pairs)
                    .map(|_| (random_point(&mut rng, n, a.radius), random_point(&mut rng, n, a.radius)))
                    .collect()
            }
        };

        let per_pair: Vec<(Vec<Row>, Vec<ErrorRecord>)> = pairs
            .par_iter()
            .enumerate()
            .map(|(i, (xc, yc))| compare_pair(&ev, a, i, xc, yc))
            .collect();

        let mut report = Report::default();
        let mut overall: f64 = 0.0;
        for (rows, errors) in per_pair {
            for r in &rows {
                if r.rep == "residual:max" {
                    overall = overall.max(r.value);
                }
            }
            report.rows.extend(rows);
            report.errors.extend(errors);
        }
        report.rows.push(Row::derived("residual:max-all", overall));
        Ok(report)
    };
    run().unwrap_or_else(failed)
}

fn compare_pair(ev: &Evaluator, a: &CompareArgs, i: usize, xc: &[f64], yc: &[f64]) -> (Vec<Row>, Vec<ErrorRecord>) {
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    let points = ev.point(xc.to_vec()).and_then(|x| Ok((x, ev.point(yc.to_vec())?)));
    let (x, y) = match points {
        Ok(p) => p,
        Err(e) => return (rows, vec![ErrorRecord::from_error(&e, Some(i))]),
    };
    let mut values = Vec::new();
    for &rep in &a.rep {
        let (r, t) = timed(a.common.no_timing, || ev.eval(rep, &x, &y));
        match r {
            Ok(r) => {
                rows.push(Row::from_eval(xc, yc, rep_label(rep, &a.common), &r, t));
                values.push((rep, r.value));
            }
            Err(e) => errors.push(ErrorRecord::from_error(&e, Some(i))),
        }
    }
    if values.len() < a.rep.len() {
        return (rows, errors);
    }
    let mut worst: f64 = 0.0;
    for (k, &(ra, va)) in values.iter().enumerate() {
        for &(rb, vb) in &values[k + 1..] {
            let res = relative_residual(va, vb);
            worst = worst.max(res);
            let mut row = Row::derived(format!("residual:{}-{}", ra.label(), rb.label()), res);
            row.x = xc.to_vec();
            row.y = yc.to_vec();
            rows.push(row);
        }
    }
    let mut row = Row::derived("residual:max", worst);
    row.x = xc.to_vec();
    row.y = yc.to_vec();
    rows.push(row);
    if !(worst <= a.tol) {
        errors.push(ErrorRecord {
            kind: ErrorKind::Tolerance,
            message: format!("pair {i}: max relative residual {worst:e} exceeds --tol {:e}", a.tol),
            index: Some(i),
            partial: None,
        });
    }
    (rows, errors)
}

pub fn bergman(a: &BergmanArgs) -> Report {
    let run = || -> std::result::Result<Report, ErrorRecord> {
        if !a.rep.is_bergman() {
            return Err(ErrorRecord::usage("bergman takes --rep bergman-zonal or bergman-triple"));
        }
        let ev = evaluator(&a.common)?;
        let n = a.common.dim;
        let x = ev.point(coords(&a.x, n)?).map_err(|e| ErrorRecord::from_error(&e, None))?;
        let y = ev.point(coords(&a.y, n)?).map_err(|e| ErrorRecord::from_error(&e, None))?;
        let (r, t) = timed(a.common.no_timing, || ev.bergman(a.rep, &x, &y));
        let (r, table) = r.map_err(|e| ErrorRecord::from_error(&e, Some(0)))?;
        let mut rows = vec![Row::from_eval(x.coords(), y.coords(), rep_label(a.rep, &a.common), &r, t)];
        let used = r.terms_used.saturating_sub(1).min(table.max_degree());
        rows.extend(table.values()[..=used].iter().enumerate().map(|(m, v)| Row::derived(format!("im:{m}"), *v)));
        Ok(Report { rows, errors: Vec::new() })
    };
    run().unwrap_or_else(failed)
}

#[derive(Serialize)]
struct SelftestDocument<'a> {
    request: &'a Command,
    rows: &'a SelftestReport,
    errors: Vec<ErrorRecord>,
}

fn run_selftest(a: &SelftestArgs, cmd: &Command, mut out: impl Write, mut err: impl Write) -> io::Result<u8> {
    let report = selftest(a.seed);
    let errors: Vec<ErrorRecord> = report
        .families
        .iter()
        .filter(|f| !f.ok())
        .map(|f| ErrorRecord {
            kind: ErrorKind::Tolerance,
            message: format!(
                "{}: {}/{} passed; {}",
                f.name,
                f.passed,
                f.total,
                f.first_failure.as_deref().unwrap_or("no cases")
            ),
            index: None,
            partial: None,
        })
        .collect();
    match a.output {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["family", "passed", "total", "worst_ratio", "status"])?;
            for f in &report.families {
                w.write_record([
                    f.name.to_string(),
                    f.passed.to_string(),
                    f.total.to_string(),
                    fmt_f64(f.worst_ratio),
                    if f.ok() { "pass" } else { "fail" }.to_string(),
                ])?;
            }
            w.flush()?;
            drop(w);
            for e in &errors {
                writeln!(err, "error: {}", e.message)?;
            }
            let passed = report.families.iter().filter(|f| f.ok()).count();
            writeln!(err, "selftest seed {}: {passed}/{} families passed", a.seed, report.families.len())?;
        }
        OutputFormat::Json => {
            let doc = SelftestDocument {
                request: cmd,
                rows: &report,
                errors: errors.clone(),
            };
            serde_json::to_writer_pretty(&mut out, &doc).map_err(io::Error::other)?;
            writeln!(out)?;
        }
    }
    Ok(if report.all_passed() { 0 } else { 4 })
}

#[derive(Debug, Clone, Serialize)]
struct BenchRow {
    rep: String,
    setting: String,
    value: f64,
    abs_error: f64,
    terms_used: usize,
    wall_time: Option<f64>,
}

#[derive(Serialize)]
struct BenchDocument<'a> {
    request: &'a Command,
    rows: &'a [BenchRow],
    errors: &'a [ErrorRecord],
}

const BENCH_TOLERANCES: [f64; 6] = [1e-4, 1e-6, 1e-8, 1e-10, 1e-12, 1e-14];
const BENCH_NODES: [usize; 5] = [8, 16, 32, 64, 128];
const BENCH_SAMPLES: [usize; 3] = [1_000, 10_000, 100_000];
/// Repeat each evaluation until this much time has passed (or 100 runs).
const BENCH_MIN_SECONDS: f64 = 0.02;

fn bench_time(f: impl Fn() -> Result<EvalResult>) -> (Result<EvalResult>, f64) {
    let start = Instant::now();
    let first = f();
    let mut runs = 1;
    while first.is_ok() && runs < 100 && start.elapsed().as_secs_f64() < BENCH_MIN_SECONDS {
        let _ = f();
        runs += 1;
    }
    (first, start.elapsed().as_secs_f64() / runs as f64)
}

fn run_bench(a: &BenchArgs, cmd: &Command, mut out: impl Write, err: impl Write) -> io::Result<u8> {
    let setup = || -> std::result::Result<(Evaluator, BallPoint, BallPoint), ErrorRecord> {
        let ev = evaluator(&a.common)?;
        let n = a.common.dim;
        let x = ev.point(coords(&a.x, n)?).map_err(|e| ErrorRecord::from_error(&e, None))?;
        let y = ev.point(coords(&a.y, n)?).map_err(|e| ErrorRecord::from_error(&e, None))?;
        Ok((ev, x, y))
    };
    let (ev, x, y) = match setup() {
        Ok(v) => v,
        Err(e) => return finish(a.common.output, cmd, &failed(e), out, err),
    };

    let mut rows = Vec::new();
    let mut errors = Vec::new();
    let mut record = |rep: Rep, setting: String, reference: f64, r: Result<EvalResult>, t: f64| match r {
        Ok(r) => rows.push(BenchRow {
            rep: rep.label().to_string(),
            setting,
            value: r.value,
            abs_error: (r.value - reference).abs(),
            terms_used: r.terms_used,
            wall_time: (!a.common.no_timing).then_some(t),
        }),
        // representations that do not apply to this pair are skipped
        Err(Error::Domain(_)) => {}
        Err(e) => errors.push(ErrorRecord::from_error(&e, None)),
    };

    let reference = match ev.eval(Rep::FiniteSum, &x, &y) {
        Ok(r) => r.value,
        Err(e) => return finish(a.common.output, cmd, &failed(ErrorRecord::from_error(&e, None)), out, err),
    };
    for rep in [Rep::X9, Rep::FiniteSum, Rep::RadialF1, Rep::Diagonal] {
        for tol in BENCH_TOLERANCES {
            let cfg = ev.cfg.with_rel_tol(tol);
            let (r, t) = bench_time(|| ev.eval_with(rep, &x, &y, &cfg, &ev.spec));
            record(rep, format!("rel_tol={tol:e}"), reference, r, t);
        }
    }
    for nodes in BENCH_NODES {
        let spec = QuadratureSpec::tensor(nodes, nodes);
        let (r, t) = bench_time(|| ev.eval_with(Rep::Quadrature, &x, &y, &ev.cfg, &spec));
        record(Rep::Quadrature, format!("tensor nodes={nodes}"), reference, r, t);
    }
    for samples in BENCH_SAMPLES {
        let spec = QuadratureSpec::monte_carlo(samples, a.common.seed);
        let (r, t) = bench_time(|| ev.eval_with(Rep::Quadrature, &x, &y, &ev.cfg, &spec));
        record(Rep::Quadrature, format!("monte-carlo samples={samples}"), reference, r, t);
    }
    match ev.eval(Rep::BergmanZonal, &x, &y) {
        Ok(b) => {
            for rep in [Rep::BergmanZonal, Rep::BergmanTriple] {
                for tol in BENCH_TOLERANCES {
                    let cfg = ev.cfg.with_rel_tol(tol);
                    let (r, t) = bench_time(|| ev.bergman_with(rep, &x, &y, &cfg).map(|(r, _)| r));
                    record(rep, format!("s={} rel_tol={tol:e}", ev.params.s), b.value, r, t);
                }
            }
        }
        Err(e) => errors.push(ErrorRecord::from_error(&e, None)),
    }

    let code = errors.iter().map(|e| e.kind.exit_code()).max().unwrap_or(0);
    match a.common.output {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["rep", "setting", "value", "abs_error", "terms_used", "wall_time"])?;
            for r in &rows {
                w.write_record([
                    r.rep.clone(),
                    r.setting.clone(),
                    fmt_f64(r.value),
                    fmt_f64(r.abs_error),
                    r.terms_used.to_string(),
                    r.wall_time.map(fmt_f64).unwrap_or_default(),
                ])?;
            }
            w.flush()?;
            drop(w);
            let mut err = err;
            for e in &errors {
                writeln!(err, "error: {}", e.message)?;
            }
        }
        OutputFormat::Json => {
            let doc = BenchDocument {
                request: cmd,
                rows: &rows,
                errors: &errors,
            };
            serde_json::to_writer_pretty(&mut out, &doc).map_err(io::Error::other)?;
            writeln!(out)?;
        }
    }
    Ok(code)
}
