use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use kzp_bench::{point_fixture, solution_fixture};
use kzp_core::curvature::{kernel_audit, pcurv_direct_oracle, point_data, random_point, AuditOptions};
use kzp_core::kz::verify_symbolic;
use kzp_core::phyper::{build_solution, Family};
use kzp_core::{seeded_rng, PrimeField};

fn solutions(c: &mut Criterion) {
    let f = PrimeField::new(7).unwrap();
    c.bench_function("build barN g=2 r=2 p=7 ℓ=(2,2)", |b| b.iter(|| build_solution(Family::BarN, 2, f, 2, black_box(&[2, 2])).unwrap()));
    let (sys, v) = solution_fixture(Family::BarN, 2, 7, 2, &[2, 2]).unwrap();
    c.bench_function("verify barN g=2 r=2 p=7 ℓ=(2,2)", |b| b.iter(|| verify_symbolic(&sys, black_box(&v), u64::MAX).unwrap()));
}

fn curvature(c: &mut Criterion) {
    let (f, ext, data) = point_fixture(3, 11, 7).unwrap();
    let mut rng = seeded_rng(7);
    c.bench_function("point data g=3 p=11", |b| b.iter(|| point_data(&ext, f, random_point(&ext, 3, &mut rng)).unwrap()));
    c.bench_function("∇^p oracle g=2 p=7 a=0", |b| {
        let (f, ext, data) = point_fixture(2, 7, 3).unwrap();
        b.iter(|| pcurv_direct_oracle(&ext, f, black_box(&data.point), 0).unwrap())
    });
    let opts = AuditOptions { primitive: true, only_k: None };
    c.bench_function("kernel audit g=3 r=3 p=11", |b| b.iter(|| kernel_audit(&ext, black_box(&data.basis), 3, opts).unwrap()));
    let (_, ext4, data4) = point_fixture(4, 11, 9).unwrap();
    let opts = AuditOptions { primitive: false, only_k: None };
    c.bench_function("kernel audit g=4 r=3 p=11", |b| b.iter(|| kernel_audit(&ext4, black_box(&data4.basis), 3, opts).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = solutions, curvature
}
criterion_main!(benches);
