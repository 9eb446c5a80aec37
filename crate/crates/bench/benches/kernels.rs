use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use hlmoments::group::enumerate_subgroups;
use hlmoments::moments::m_u;
use hlmoments::{c_coeff, hl_p, verify, PGroup};
use hlmoments_bench::{identity_cases, partition};

fn hall_littlewood(c: &mut Criterion) {
    let mut g = c.benchmark_group("hl_p");
    for (text, n) in [("2,1", 3), ("3,1", 4), ("2,2,1", 4)] {
        let lambda = partition(text);
        g.bench_with_input(BenchmarkId::new(text, n), &(lambda, n), |b, (l, n)| b.iter(|| hl_p(black_box(l), *n).unwrap()));
    }
    g.finish();
}

fn c_coefficients(c: &mut Criterion) {
    let lambda = partition("4,3,2,1");
    let mu = partition("2,1");
    c.bench_function("c_coeff 4321/21", |b| b.iter(|| c_coeff(black_box(&lambda), black_box(&mu))));
}

fn groups(c: &mut Criterion) {
    let h = PGroup::new(&partition("2,1,1"), 3).unwrap();
    c.bench_function("subgroups 211 p=3", |b| b.iter(|| enumerate_subgroups(black_box(&h)).unwrap()));
    let lambda = partition("2,1");
    c.bench_function("m_u 21 p=3 u=2", |b| b.iter(|| m_u(black_box(&lambda), 3, 2).unwrap()));
}

fn identities(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify");
    g.sample_size(20);
    for case in identity_cases() {
        g.bench_function(case.id.name(), |b| b.iter(|| verify(black_box(&case))));
    }
    g.finish();
}

criterion_group!(benches, hall_littlewood, c_coefficients, groups, identities);
criterion_main!(benches);
