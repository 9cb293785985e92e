use std::hint::black_box;

use bornctl::verify::par::Execution;
use bornctl::verify::suites::{run_single, SuiteOptions};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const CASES: u64 = 24;

fn laws(c: &mut Criterion) {
    let mut group = c.benchmark_group("law");
    group.sample_size(10);
    for (suite, law) in [("coherence", "pentagon"), ("category", "associativity"), ("fibration", "exchange")] {
        for (label, execution) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
            let opts = SuiteOptions { instances: CASES, execution, ..SuiteOptions::defaults(1) };
            group.bench_with_input(BenchmarkId::new(format!("{suite}/{law}"), label), &opts, |b, opts| {
                b.iter(|| black_box(run_single(suite, law, opts).unwrap()))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, laws);
criterion_main!(benches);
