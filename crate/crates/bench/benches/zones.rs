use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use zones_bench::{catalog, store, tag};
use zones_core::oracle::brute_match;
use zones_core::{points_near_point, self_match, Distribution, MatchJob, QuerySpec};

fn build(c: &mut Criterion) {
    let mut g = c.benchmark_group("build");
    for n in [1_000, 10_000, 100_000] {
        let pts = catalog(n, Distribution::UniformSphere);
        g.bench_with_input(BenchmarkId::from_parameter(n), &pts, |b, pts| {
            b.iter(|| store(black_box(pts), 1.0))
        });
    }
    g.finish();
}

fn query(c: &mut Criterion) {
    let mut g = c.benchmark_group("near");
    for dist in Distribution::ALL {
        let pts = catalog(100_000, dist);
        let s = store(&pts, 1.0);
        let centers: Vec<_> = pts.iter().step_by(1_000).map(|p| p.coord).collect();
        g.bench_function(dist.as_str(), |b| {
            b.iter(|| {
                centers
                    .iter()
                    .map(|&center| {
                        let spec = QuerySpec {
                            obj_type: tag(),
                            center,
                            theta: 0.2,
                        };
                        points_near_point(&s, &spec).unwrap().len()
                    })
                    .sum::<usize>()
            })
        });
    }
    g.finish();
}

fn matching(c: &mut Criterion) {
    let mut g = c.benchmark_group("selfmatch");
    g.sample_size(10);
    let pts = catalog(5_000, Distribution::UniformSphere);
    let s = store(&pts, 1.0);
    for workers in [1, 4] {
        let job = MatchJob::self_match(&s, tag(), 1.0).with_workers(workers);
        g.bench_function(BenchmarkId::new("batch", workers), |b| {
            b.iter(|| self_match(&job).unwrap().len())
        });
        g.bench_function(BenchmarkId::new("all_pairs", workers), |b| {
            b.iter(|| self_match(&job.with_symmetry(false)).unwrap().len())
        });
    }
    g.bench_function("brute", |b| b.iter(|| brute_match(&pts, &pts, 1.0, true).len()));
    g.finish();
}

criterion_group!(benches, build, query, matching);
criterion_main!(benches);
