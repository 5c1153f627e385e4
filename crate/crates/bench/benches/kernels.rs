use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hharmonic::kernels::{bergman_triple_series, bergman_zonal_series, compute_im_table, szego_finite_sum, szego_x9};
use hharmonic::oracle::szego_quadrature;
use hharmonic::{QuadratureSpec, SeriesConfig};
use hharmonic_bench::{pair, params};
use std::hint::black_box;

fn szego_representations(c: &mut Criterion) {
    let cfg = SeriesConfig::default();
    let mut g = c.benchmark_group("szego");
    for n in [3, 6] {
        let p = params(n, 0.0);
        for r in [0.3, 0.7] {
            let (x, y) = pair(n, r);
            let id = format!("n={n} r={r}");
            g.bench_with_input(BenchmarkId::new("x9", &id), &(), |b, _| {
                b.iter(|| szego_x9(black_box(&x), black_box(&y), &p, &cfg).unwrap())
            });
            g.bench_with_input(BenchmarkId::new("finite-sum", &id), &(), |b, _| {
                b.iter(|| szego_finite_sum(black_box(&x), black_box(&y), &p, &cfg).unwrap())
            });
        }
    }
    g.finish();
}

fn quadrature(c: &mut Criterion) {
    let mut g = c.benchmark_group("quadrature");
    let (x, y) = pair(3, 0.5);
    for nodes in [32, 128] {
        let spec = QuadratureSpec::tensor(nodes, nodes);
        g.bench_with_input(BenchmarkId::new("tensor", nodes), &spec, |b, spec| {
            b.iter(|| szego_quadrature(black_box(&x), black_box(&y), 3, spec).unwrap())
        });
    }
    g.finish();
}

fn bergman(c: &mut Criterion) {
    let cfg = SeriesConfig::default();
    let p = params(4, 1.0);
    let spec = QuadratureSpec::default();
    let mut g = c.benchmark_group("bergman");
    g.sample_size(10);
    g.bench_function("im-table depth 64", |b| b.iter(|| compute_im_table(black_box(&p), 64, &spec).unwrap()));
    let table = compute_im_table(&p, 128, &spec).unwrap();
    let (x, y) = pair(4, 0.5);
    g.bench_function("zonal", |b| {
        b.iter(|| bergman_zonal_series(black_box(&x), black_box(&y), &p, &table, &cfg).unwrap())
    });
    g.bench_function("triple", |b| {
        b.iter(|| bergman_triple_series(black_box(&x), black_box(&y), &p, &table, &cfg).unwrap())
    });
    g.finish();
}

criterion_group!(benches, szego_representations, quadrature, bergman);
criterion_main!(benches);
