//! Timings for the stages that dominate a verify run: building the gadget
//! tables, enumerating the bounded closure, classifying members, and the
//! full embedding check on the smallest fixture. Sample counts are kept low
//! because single iterations already run for milliseconds to seconds.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use latclone_bench::systems;
use latclone_core::classify::spoilt_inventory;
use latclone_core::enumerate::enumerate_slice;
use latclone_core::fixtures;
use latclone_core::{verify_embedding, Bounds, GeneratorSystem};

fn bench_construction(c: &mut Criterion) {
    let mut group = c.benchmark_group("construction");
    for (name, lattice) in fixtures::all() {
        if !["chain2", "b2", "m3"].contains(&name) {
            continue;
        }
        group.bench_function(name, |b| {
            b.iter(|| {
                let family =
                    latclone_core::family::singleton_family(lattice.size()).unwrap();
                black_box(GeneratorSystem::build(lattice.clone(), family).unwrap())
            })
        });
    }
    group.finish();
}

fn bench_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("closure");
    group.sample_size(10);
    for (name, sys) in systems() {
        let gens = sys.generators();
        let ground = sys.ground_size();
        group.bench_function(format!("{name}/unary_depth4"), |b| {
            b.iter(|| {
                black_box(enumerate_slice(
                    &gens,
                    ground,
                    1,
                    &Bounds { max_arity: 1, depth: 4, ..Bounds::default() },
                ))
            })
        });
        if name == "chain2" {
            group.bench_function(format!("{name}/binary_depth3"), |b| {
                b.iter(|| {
                    black_box(enumerate_slice(&gens, ground, 2, &Bounds::default()))
                })
            });
        }
    }
    group.finish();
}

fn bench_classification(c: &mut Criterion) {
    let mut group = c.benchmark_group("classification");
    group.sample_size(10);
    for (name, sys) in systems() {
        if name != "chain2" {
            continue;
        }
        group.bench_function(name, |b| {
            b.iter(|| black_box(spoilt_inventory(&sys, &Bounds::default())))
        });
    }
    group.finish();
}

fn bench_embedding(c: &mut Criterion) {
    let mut group = c.benchmark_group("embedding");
    group.sample_size(10);
    for (name, sys) in systems() {
        if name != "chain2" {
            continue;
        }
        group.bench_function(name, |b| {
            b.iter(|| black_box(verify_embedding(&sys, name, &Bounds::default())))
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_construction,
    bench_enumeration,
    bench_classification,
    bench_embedding
);
criterion_main!(benches);
