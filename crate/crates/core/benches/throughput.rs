use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use gapdyn_core::census::census_rows;
use gapdyn_core::dynamics::{a_product, transfer_matrix};
use gapdyn_core::gap_cycle::{cycle_for, CycleLimits};
use gapdyn_core::prime_engine::{gap_census, PrimeRange, SieveConfig};
use gapdyn_core::ExecPolicy;
use std::hint::black_box;

const POLICIES: [(&str, ExecPolicy); 2] = [
    ("sequential", ExecPolicy::Sequential),
    ("parallel", ExecPolicy::Parallel),
];

fn cfg(policy: ExecPolicy) -> SieveConfig {
    SieveConfig {
        policy,
        ..SieveConfig::default()
    }
}

fn sieve(c: &mut Criterion) {
    let mut group = c.benchmark_group("gap_census");
    group.sample_size(10);
    let (lo, hi) = (1_000_000_000u64, 1_050_000_000u64);
    group.throughput(Throughput::Elements(hi - lo));
    for (name, policy) in POLICIES {
        group.bench_with_input(BenchmarkId::new(name, "1e9+5e7"), &policy, |b, &p| {
            b.iter(|| gap_census(black_box(PrimeRange::new(lo, hi).unwrap()), &cfg(p)))
        });
    }
    group.finish();
}

fn census(c: &mut Criterion) {
    let cycle = cycle_for(19, &CycleLimits::default()).unwrap();
    let mut group = c.benchmark_group("census_rows");
    group.sample_size(10);
    group.throughput(Throughput::Elements(cycle.len() as u64));
    for (name, policy) in POLICIES {
        group.bench_with_input(BenchmarkId::new(name, "G(19#)"), &policy, |b, &p| {
            b.iter(|| census_rows(black_box(&cycle), 32, p).unwrap())
        });
    }
    group.finish();
}

fn products(c: &mut Criterion) {
    let mut group = c.benchmark_group("transfer");
    group.sample_size(10);
    let end = 20_000_000u64;
    for (name, policy) in POLICIES {
        group.bench_with_input(
            BenchmarkId::new(format!("a_2/{name}"), "to 2e7"),
            &policy,
            |b, &p| b.iter(|| a_product::<f64>(13, black_box(end), 2, &cfg(p)).unwrap()),
        );
        group.bench_with_input(
            BenchmarkId::new(format!("M_8/{name}"), "to 2e7"),
            &policy,
            |b, &p| b.iter(|| transfer_matrix::<f64>(13, black_box(end), 8, &cfg(p)).unwrap()),
        );
    }
    group.finish();
}

criterion_group!(benches, sieve, census, products);
criterion_main!(benches);
