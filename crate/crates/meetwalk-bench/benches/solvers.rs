//! Benchmarks for the meeting-time machinery: the dense pairwise solve,
//! the matrix-free group solve, product reachability, and the Monte Carlo
//! oracle.

use criterion::{criterion_group, criterion_main, Criterion};
use meetwalk_bench::{table_chain, three_factor_chain};
use meetwalk_core::dtmc::{group_meeting_times_with, meeting_times, SolveOptions};
use meetwalk_core::graph::GraphFamily;
use meetwalk_core::product::{reaches_meeting_set, StateBudget};
use meetwalk_core::sim::simulate_dtmc;
use std::hint::black_box;

fn bench_pairwise_dense(c: &mut Criterion) {
    let p = table_chain(&GraphFamily::Ring { n: 20 });
    c.bench_function("meeting_times ring n=20 (dense, 400 states)", |b| {
        b.iter(|| meeting_times(black_box(&p), black_box(&p)).unwrap())
    });
}

fn bench_group_iterative(c: &mut Criterion) {
    let p = three_factor_chain();
    let pursuers = [p.clone(), p.clone()];
    let evaders = [p];
    let opts = SolveOptions {
        dense_threshold: 0,
        ..SolveOptions::default()
    };
    c.bench_function(
        "group_meeting_times L=2 M=1 n=12 (matrix-free, 1728 states)",
        |b| {
            b.iter(|| {
                group_meeting_times_with(black_box(&pursuers), black_box(&evaders), &opts).unwrap()
            })
        },
    );
}

fn bench_reachability(c: &mut Criterion) {
    let p = table_chain(&GraphFamily::Lattice { rows: 4, cols: 5 });
    c.bench_function("reaches_meeting_set 3 factors n=20 (8000 states)", |b| {
        b.iter(|| {
            reaches_meeting_set(black_box(&[&p, &p, &p]), 2, 1, StateBudget::default()).unwrap()
        })
    });
}

fn bench_simulation(c: &mut Criterion) {
    let p = table_chain(&GraphFamily::Star { n: 20 });
    c.bench_function("simulate_dtmc star n=20, 10k trials", |b| {
        b.iter(|| {
            simulate_dtmc(
                black_box(std::slice::from_ref(&p)),
                black_box(std::slice::from_ref(&p)),
                &[0, 1],
                10_000,
                1_000_000,
                7,
            )
            .unwrap()
        })
    });
}

criterion_group!(
    benches,
    bench_pairwise_dense,
    bench_group_iterative,
    bench_reachability,
    bench_simulation
);
criterion_main!(benches);
