use std::collections::BTreeSet;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use eventlens::features::{build_dataset, FeatureExtractor};
use eventlens::ml::{cross_validate, train_random_forest, ClassifierSpec, ForestParams, Variant};
use eventlens::overlap::overlap_matrix;
use eventlens::synth::{generate, SynthConfig};
use eventlens::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn corpus() -> eventlens::synth::SynthOutput {
    generate(&SynthConfig {
        fb_posts: 4000,
        tw_posts: 4000,
        same_time_pairs: 200,
        ..SynthConfig::default()
    })
    .expect("default config is feasible")
}

fn bench(c: &mut Criterion) {
    let out = corpus();
    let ex = FeatureExtractor::default();
    let ds = build_dataset(&out.fb, &out.labels, &ex, Execution::Sequential).unwrap();

    let mut g = c.benchmark_group("features");
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| build_dataset(&out.fb, &out.labels, &ex, mode).unwrap())
        });
    }
    g.finish();

    let mut g = c.benchmark_group("random_forest");
    g.sample_size(10);
    let params = ForestParams { n_trees: 30, ..ForestParams::default() };
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| train_random_forest(&ds, params, 42, mode).unwrap())
        });
    }
    g.finish();

    let mut g = c.benchmark_group("cross_validation");
    g.sample_size(10);
    let spec = ClassifierSpec::default_for(Variant::DecisionTree);
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| cross_validate(&ds, &spec, 10, 42, mode).unwrap())
        });
    }
    g.finish();

    let sets: Vec<(String, BTreeSet<u32>)> = (0..48u32)
        .map(|i| (format!("e{i}"), (0..20_000).filter(|x| (x * 7 + i) % (3 + i % 5) == 0).collect()))
        .collect();
    let mut g = c.benchmark_group("overlap_matrix");
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| overlap_matrix(&sets, mode)));
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
