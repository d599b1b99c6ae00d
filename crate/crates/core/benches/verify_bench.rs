//! Benchmarks the verification suites with sequential versus parallel case
//! scheduling, plus the raw page computation they are built on.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use specseq_core::gen::Gen;
use specseq_core::{par, verify, Field};

fn bench_case_scheduling(c: &mut Criterion) {
    let mut group = c.benchmark_group("page-cases");
    for &jobs in &[1usize, 0] {
        let label = if jobs == 1 { "sequential" } else { "parallel" };
        group.bench_with_input(BenchmarkId::from_parameter(label), &jobs, |b, &jobs| {
            b.iter(|| {
                par::run_cases(16, jobs, |i| {
                    let a = Gen::new(Field::Q, 0xBE5C ^ i).complex();
                    (0..=4u32).map(|r| a.page(r).total_dim()).sum::<usize>()
                })
            })
        });
    }
    group.finish();
}

fn bench_verify_suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify-pages-suite");
    group.sample_size(10);
    for &jobs in &[1usize, 0] {
        let label = if jobs == 1 { "sequential" } else { "parallel" };
        group.bench_with_input(BenchmarkId::from_parameter(label), &jobs, |b, &jobs| {
            b.iter(|| verify::run("pages", Field::Q, 42, 16, jobs).unwrap().passed)
        });
    }
    group.finish();
}

criterion_group!(benches, bench_case_scheduling, bench_verify_suites);
criterion_main!(benches);
