//! Sequential versus rayon execution of the hot loops. Without the
//! `parallel` feature only the sequential rows are measured.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hillcap_core::delsarte;
use hillcap_core::exec::Exec;
use hillcap_core::projgeom::{self, Cap};
use hillcap_core::scheme::{self, ConstructionOptions};
use hillcap_core::search::{self, BitGraph, SearchConfig};

fn modes() -> Vec<(&'static str, Exec)> {
    let mut m = vec![("sequential", Exec::Sequential)];
    #[cfg(feature = "parallel")]
    m.push(("parallel", Exec::Parallel));
    m
}

fn bench(c: &mut Criterion) {
    let built = scheme::construct(&ConstructionOptions::default()).unwrap();
    let f = &built.field;
    let s = &built.scheme;
    let cap = Cap::from_vectors(f, &built.graph_set()).unwrap();
    let sub = f.subfield_elements(64).unwrap();
    let graph = BitGraph::cayley(&built.connection.set);
    let config = SearchConfig {
        seed: 1,
        max_iterations: 64,
        ..Default::default()
    };

    let mut g = c.benchmark_group("hot_loops");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_with_input(BenchmarkId::new("eigenmatrix", name), &exec, |b, &e| {
            b.iter(|| scheme::eigenmatrix(e, f, &s.coloring, s.n_classes).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("hyperplane_profile", name), &exec, |b, &e| {
            b.iter(|| projgeom::intersection_profile_with(e, f, &cap))
        });
        g.bench_with_input(BenchmarkId::new("outer_distribution", name), &exec, |b, &e| {
            b.iter(|| delsarte::outer_distribution_with(e, s, &sub))
        });
        g.bench_with_input(BenchmarkId::new("greedy_64_restarts", name), &exec, |b, &e| {
            b.iter(|| search::greedy_randomized(e, &graph, &config))
        });
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
