use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use toric_core::enumeration::SubpolytopeEngine;
use toric_core::iv;
use toric_core::par::Execution;
use toric_core::polytope::{convex_hull, normal_form};
use toric_core::reid::{classify_reid, reid_delta, reid_table};

const MODES: [(&str, Execution); 2] = [
    ("parallel", Execution::Parallel),
    ("sequential", Execution::Sequential),
];

fn subpolytope_search(c: &mut Criterion) {
    let octahedron = convex_hull(&[
        iv![1, 0, 0],
        iv![-1, 0, 0],
        iv![0, 1, 0],
        iv![0, -1, 0],
        iv![0, 0, 1],
        iv![0, 0, -1],
    ])
    .unwrap();
    let engine = SubpolytopeEngine::new(&octahedron.polar_lattice_hull().unwrap()).unwrap();
    let mut g = c.benchmark_group("reflexive_masks_cube");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| engine.reflexive_masks(exec))
        });
    }
    g.finish();
}

fn batch_normal_forms(c: &mut Criterion) {
    let deltas: Vec<_> = reid_table()
        .iter()
        .map(|e| reid_delta(e).unwrap())
        .collect();
    let mut g = c.benchmark_group("normal_forms_reid");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| exec.map(&deltas, normal_form))
        });
    }
    g.finish();
    let mut g = c.benchmark_group("classify_reid");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| classify_reid(exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, subpolytope_search, batch_normal_forms);
criterion_main!(benches);
