use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use vrpbench::extract::{split_at_intersections_with, PairStrategy, DEFAULT_EPSILON};
use vrpbench::generator::{assign_counts, assign_counts_linear, street_weights};
use vrpbench::heuristics::{solve, Algorithm, SolverConfig};
use vrpbench::rng::BenchRng;
use vrpbench::{generate, DistanceOracle, GenerationSpec, Objective, PenaltyTable};
use vrpbench_bench::{city_instance, city_network, city_soup};

fn split(c: &mut Criterion) {
    let soup = city_soup();
    let mut group = c.benchmark_group("split");
    group.sample_size(10);
    for (name, strategy) in [("bucketed", PairStrategy::Bucketed), ("all_pairs", PairStrategy::AllPairs)] {
        group.bench_function(name, |b| {
            b.iter(|| split_at_intersections_with(black_box(&soup), DEFAULT_EPSILON, strategy).unwrap())
        });
    }
    group.finish();
}

fn dijkstra(c: &mut Criterion) {
    let net = city_network();
    c.bench_function("dijkstra_row", |b| {
        b.iter_batched(
            || DistanceOracle::new(&net),
            |oracle| oracle.distances_from(black_box(net.depot().unwrap())).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn sampling(c: &mut Criterion) {
    let net = city_network();
    let weights = street_weights(&net, &PenaltyTable::DEFAULT);
    let mut group = c.benchmark_group("assign_counts");
    group.bench_function("binary_search", |b| {
        b.iter(|| assign_counts(&weights, 10_000, &mut BenchRng::new(7)).unwrap())
    });
    group.bench_function("linear", |b| {
        b.iter(|| assign_counts_linear(&weights, 10_000, &mut BenchRng::new(7)).unwrap())
    });
    group.finish();

    let mut group = c.benchmark_group("generate");
    for m in [100, 1000, 10_000] {
        group.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| {
            let spec = GenerationSpec::new(m, 7, 1);
            b.iter(|| generate(&net, &PenaltyTable::DEFAULT, &spec).unwrap())
        });
    }
    group.finish();
}

fn routing(c: &mut Criterion) {
    let instance = city_instance(200, 2);
    let nn = SolverConfig {
        algorithm: Algorithm::NearestNeighbor,
        ..SolverConfig::default()
    };
    let solution = solve(&instance, &nn, |_| {}).unwrap().solution;
    c.bench_function("evaluate_200", |b| {
        b.iter(|| vrpbench::evaluate(&instance, black_box(&solution), Objective::TotalLength).unwrap())
    });

    let mut group = c.benchmark_group("solve_200");
    group.sample_size(10);
    group.bench_function("nearest_neighbor", |b| b.iter(|| solve(&instance, &nn, |_| {}).unwrap()));
    let ls = SolverConfig {
        max_iterations: 200,
        ..SolverConfig::default()
    };
    group.bench_function("local_search", |b| b.iter(|| solve(&instance, &ls, |_| {}).unwrap()));
    group.finish();
}

criterion_group!(benches, split, dijkstra, sampling, routing);
criterion_main!(benches);
