//! Sequential against rayon-parallel execution of the two hot loops: the
//! subcomplex sum behind the Betti numbers and the orbit link check.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use gosset::fibration::{builtin_state, check_orbit, OrbitOptions};
use gosset::gosset::build;
use gosset::manifold::{betti_of_manifold, builtin_colouring, BettiOptions, SumStrategy};
use gosset::par::Execution;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn betti_sum(c: &mut Criterion) {
    let mut g = c.benchmark_group("betti_sum");
    g.sample_size(10);
    for (n, strategy) in [(6, SumStrategy::Full), (7, SumStrategy::ColourSymmetry)] {
        let q = build(n).unwrap();
        let col = builtin_colouring(&q).unwrap();
        for (name, execution) in MODES {
            let opts = BettiOptions {
                strategy,
                execution,
            };
            g.bench_with_input(BenchmarkId::new(name, n), &opts, |b, opts| {
                b.iter(|| betti_of_manifold(&q, &col, opts).unwrap())
            });
        }
    }
    g.finish();
}

fn orbit_check(c: &mut Criterion) {
    let mut g = c.benchmark_group("orbit_check");
    g.sample_size(10);
    for n in [6, 7] {
        let q = build(n).unwrap();
        let col = builtin_colouring(&q).unwrap();
        let s = builtin_state(&q, &col).unwrap();
        for (name, execution) in MODES {
            let opts = OrbitOptions {
                execution,
                ..OrbitOptions::default()
            };
            g.bench_with_input(BenchmarkId::new(name, n), &opts, |b, opts| {
                b.iter(|| check_orbit(&q, &col, &s, opts).unwrap())
            });
        }
    }
    g.finish();
}

criterion_group!(benches, betti_sum, orbit_check);
criterion_main!(benches);
