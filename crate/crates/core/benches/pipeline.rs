use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use plane_breaker_core::expr::parse;
use plane_breaker_core::mesh::{build_mesh_with, sample_grid_with, ColorMap, Domain, Resolution, ZLimits};
use plane_breaker_core::Execution;
use std::hint::black_box;

const EQUATION: &str = "z = 3sin(x) + cos(y)";

fn modes() -> &'static [Execution] {
    Execution::available()
}

fn sampling(c: &mut Criterion) {
    let expr = parse(EQUATION).unwrap();
    let mut group = c.benchmark_group("sample_grid");
    for segments in [64u32, 128, 512] {
        let res = Resolution::new(segments).unwrap();
        group.throughput(Throughput::Elements(res.samples() as u64 * res.samples() as u64));
        for &exec in modes() {
            group.bench_with_input(
                BenchmarkId::new(format!("{exec:?}"), segments),
                &res,
                |b, &res| b.iter(|| sample_grid_with(&expr, Domain::default(), black_box(res), exec)),
            );
        }
    }
    group.finish();
}

fn meshing(c: &mut Criterion) {
    let expr = parse(EQUATION).unwrap();
    let cmap = ColorMap::viridis();
    let mut group = c.benchmark_group("build_mesh");
    for segments in [64u32, 128, 512] {
        let res = Resolution::new(segments).unwrap();
        let field = sample_grid_with(&expr, Domain::default(), res, Execution::Sequential);
        group.throughput(Throughput::Elements(res.samples() as u64 * res.samples() as u64));
        for &exec in modes() {
            group.bench_with_input(
                BenchmarkId::new(format!("{exec:?}"), segments),
                &field,
                |b, field| {
                    b.iter(|| build_mesh_with(&expr, black_box(field), ZLimits::default(), &cmap, exec))
                },
            );
        }
    }
    group.finish();
}

fn pipeline(c: &mut Criterion) {
    let cmap = ColorMap::viridis();
    let mut group = c.benchmark_group("parse_sample_mesh");
    let res = Resolution::default();
    for &exec in modes() {
        group.bench_function(format!("{exec:?}"), |b| {
            b.iter(|| {
                let expr = parse(black_box(EQUATION)).unwrap();
                let field = sample_grid_with(&expr, Domain::default(), res, exec);
                build_mesh_with(&expr, &field, ZLimits::default(), &cmap, exec)
            })
        });
    }
    group.finish();
}

criterion_group!(benches, sampling, meshing, pipeline);
criterion_main!(benches);
