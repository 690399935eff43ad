//! End-to-end pipeline benchmarks: model parsing, transformation, adapter
//! generation, and simulated execution.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use fnkit_bench::{
    demo_functions, demo_integration, demo_manifests, demo_platform, demo_topology, demo_trace,
    templates,
};
use fnkit_cli::commands::execute_run;
use fnkit_core::adapter::generate_adapter;
use fnkit_core::function_model::{parse_function_model, serialize_function_model};
use fnkit_core::integration::transform;
use fnkit_core::sim::SimClock;

fn bench_parse(c: &mut Criterion) {
    let text = serialize_function_model(&demo_functions()[0]);
    c.bench_function("parse_function_model/core_acc", |b| {
        b.iter(|| parse_function_model(black_box(&text)).unwrap())
    });
}

fn bench_transform(c: &mut Criterion) {
    let functions = demo_functions();
    let platform = demo_platform();
    let topology = demo_topology();
    c.bench_function("transform/ecocontrol", |b| {
        b.iter(|| transform(black_box(&functions), &platform, &topology).unwrap())
    });
}

fn bench_generate(c: &mut Criterion) {
    let model = demo_integration();
    let templates = templates();
    c.bench_function("generate_adapter/core_acc", |b| {
        b.iter(|| generate_adapter(black_box(&model), "CoreAccComponent", &templates).unwrap())
    });
}

fn bench_simulated_second(c: &mut Criterion) {
    let manifests = demo_manifests();
    let trace = demo_trace();
    c.bench_function("scheduler/one_virtual_second", |b| {
        b.iter(|| {
            execute_run(
                SimClock::virtual_clock(),
                black_box(&manifests),
                &trace,
                1_000_000,
            )
            .unwrap()
        })
    });
}

criterion_group!(
    benches,
    bench_parse,
    bench_transform,
    bench_generate,
    bench_simulated_second
);
criterion_main!(benches);
