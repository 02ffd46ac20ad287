use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gsaw_core::arith::{int, rat};
use gsaw_core::oracle::enumerate_from;
use gsaw_core::sim::{run_walks_with, Execution, LatticeTopology, TopologyKind};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn walks(c: &mut Criterion) {
    let mut g = c.benchmark_group("run_walks");
    g.sample_size(10);
    for kind in [TopologyKind::SquareLadderTwoSided, TopologyKind::InfiniteSquare] {
        let t = LatticeTopology::new(kind);
        for (name, mode) in MODES {
            g.bench_with_input(BenchmarkId::new(name, kind), &t, |b, t| {
                b.iter(|| run_walks_with(t, &int(1), 100_000, 1, 8, mode).unwrap())
            });
        }
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate");
    g.sample_size(10);
    let t = LatticeTopology::new(TopologyKind::SquareLadderTwoSided);
    for (label, bias) in [("C=1", int(1)), ("C=3/2", rat(3, 2))] {
        for (name, mode) in MODES {
            g.bench_function(BenchmarkId::new(name, label), |b| {
                b.iter(|| enumerate_from(&t, t.start(), &bias, 14, mode).unwrap())
            });
        }
    }
    g.finish();
}

criterion_group!(benches, walks, oracle);
criterion_main!(benches);
