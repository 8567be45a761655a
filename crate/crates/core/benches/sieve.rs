use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use special_cremona::invariants::TransformationConfig;
use special_cremona::pipeline::{
    builtin_names, builtin_pipeline, enumerate, run_pipeline_with, Candidate, FilterBank, Schedule,
};

const SCHEDULES: [(&str, Schedule); 2] = [("sequential", Schedule::Sequential), ("parallel", Schedule::Parallel)];

/// The first two sieves of the threefold pipeline over a widened grid.
fn sieve_stage(c: &mut Criterion) {
    let bank = FilterBank::new(&TransformationConfig::cubic_p6(), 3).unwrap();
    let filters = bank.resolve_all(&["liso".to_string(), "cremona".to_string()]).unwrap();
    let domain: Vec<Candidate> = (3..=120)
        .flat_map(|l| (0..=400).map(move |g| Candidate::pair(l, g)))
        .collect();
    let mut group = c.benchmark_group("sieve-stage");
    for (name, schedule) in SCHEDULES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &schedule, |b, &s| {
            b.iter(|| enumerate("bench", black_box(&domain), &filters, s).unwrap())
        });
    }
    group.finish();
}

fn full_pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);
    for pipeline in builtin_names() {
        let spec = builtin_pipeline(pipeline).unwrap();
        for (name, schedule) in SCHEDULES {
            group.bench_with_input(BenchmarkId::new(pipeline, name), &schedule, |b, &s| {
                b.iter(|| run_pipeline_with(black_box(&spec), s).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, sieve_stage, full_pipeline);
criterion_main!(benches);
