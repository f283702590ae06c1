use bernstein_core::espace::Polynomial;
use bernstein_core::krein::KreinCertificate;
use bernstein_core::majorant::{majorant_profile, MajorantOptions};
use bernstein_core::par::Execution;
use bernstein_core::weight::{seminorm_entire, SamplingPlan, Weight};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use std::hint::black_box;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn profile(c: &mut Criterion) {
    let w = Weight::gaussian();
    let degrees: Vec<usize> = (0..=8).collect();
    let probes = [Complex64::i(), Complex64::new(0.5, 0.5), Complex64::new(-1.0, 2.0)];
    let mut g = c.benchmark_group("majorant_profile");
    g.sample_size(10);
    for (name, exec) in MODES {
        let opts = MajorantOptions { exec, ..MajorantOptions::default() };
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| majorant_profile(black_box(&w), &degrees, &probes, &opts).unwrap())
        });
    }
    g.finish();
}

fn seminorm(c: &mut Criterion) {
    let w = Weight::gaussian();
    let p = Polynomial::real(&[1.0, -0.5, 0.25, 0.0, 0.1, 0.0, -0.01]).into();
    let plan = SamplingPlan::new(30.0, 1e-4);
    let mut g = c.benchmark_group("seminorm");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| seminorm_entire(black_box(&w), &p, &plan, exec).unwrap())
        });
    }
    g.finish();
}

fn zeros(c: &mut Criterion) {
    let cert = KreinCertificate::sin_pi();
    let mut g = c.benchmark_group("zeros_with_derivatives");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| cert.zeros_with_derivatives(black_box(20_000), exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, profile, seminorm, zeros);
criterion_main!(benches);
