use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lempert_core::exec::{set_execution, Execution};
use lempert_core::lempertize::{build_inverse, field_from_inverse, LempertCandidate, RootSolveConfig};
use lempert_core::metrics::distance_consistency;
use lempert_core::verify::{inverse_agreement, range_supremum};
use lempert_core::{DomainKind, GeodesicSpec, LeftInverseSpec};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn phi_range(c: &mut Criterion) {
    let mut group = c.benchmark_group("phi_range_20k");
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            set_execution(mode);
            b.iter(|| range_supremum(&LeftInverseSpec::RoyalPhi, DomainKind::SymBidisc, black_box(20_000), 42).unwrap())
        });
    }
    group.finish();
}

fn royal_construction(c: &mut Criterion) {
    let field = field_from_inverse(&LeftInverseSpec::RoyalPhi, GeodesicSpec::Royal).unwrap();
    let h = build_inverse(&LempertCandidate::new(field), &RootSolveConfig::default()).unwrap();
    let mut group = c.benchmark_group("royal_construction_200");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            set_execution(mode);
            b.iter(|| inverse_agreement(&h, &LeftInverseSpec::RoyalPhi, black_box(200), 42, 1e-9).unwrap())
        });
    }
    group.finish();
}

fn g2_distances(c: &mut Criterion) {
    let mut group = c.benchmark_group("g2_distance_consistency_100");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            set_execution(mode);
            b.iter(|| distance_consistency(DomainKind::SymBidisc, black_box(100), 42).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, phi_range, royal_construction, g2_distances);
criterion_main!(benches);
