use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use vlab_core::arith::{kloosterman, ramanujan_tau_table, KloostermanParams};
use vlab_core::lattice::{circle_count, delta_circle, divisor_summatory};
use vlab_core::mellin::VoronoiTransform;
use vlab_core::special::{bessel_j0, bessel_k0, bessel_y0, zeta};
use vlab_core::{SpectralParams, TestFunction, C64};

fn arithmetic(c: &mut Criterion) {
    c.bench_function("tau table N=10000", |b| b.iter(|| ramanujan_tau_table(black_box(10_000)).unwrap()));
    c.bench_function("kloosterman c=997", |b| {
        b.iter(|| kloosterman(black_box(KloostermanParams { m: 3, n: 5, c: 997 })).unwrap())
    });
}

fn special(c: &mut Criterion) {
    c.bench_function("bessel j0 y0 k0 at 12.5", |b| {
        b.iter(|| bessel_j0(black_box(12.5)) + bessel_y0(black_box(12.5)) + bessel_k0(black_box(12.5)))
    });
    c.bench_function("zeta at 1/2 + 30i", |b| b.iter(|| zeta(black_box(C64::new(0.5, 30.0))).unwrap()));
}

fn transforms(c: &mut Criterion) {
    let f = TestFunction::exp_inverse(1.0, 4.0).unwrap();
    let params = SpectralParams::gl2_holomorphic(12).unwrap();
    let mb = VoronoiTransform::new(&f, &params).unwrap();
    c.bench_function("gl2 transform eval", |b| b.iter(|| mb.eval(black_box(2.5)).unwrap()));
    let sym2 = SpectralParams::sym2_of_weight(12).unwrap();
    let f3 = TestFunction::exp_inverse(0.2, 10.0).unwrap();
    let mb3 = VoronoiTransform::new(&f3, &sym2).unwrap();
    c.bench_function("gl3 transform eval", |b| b.iter(|| mb3.eval(black_box(0.02)).unwrap()));
}

fn lattice(c: &mut Criterion) {
    c.bench_function("circle count X=1e12", |b| b.iter(|| circle_count(black_box(1e12)).unwrap()));
    c.bench_function("delta circle X=1e8", |b| b.iter(|| delta_circle(black_box(1e8)).unwrap()));
    c.bench_function("divisor summatory X=1e12", |b| b.iter(|| divisor_summatory(black_box(1e12)).unwrap()));
}

criterion_group!(benches, arithmetic, special, transforms, lattice);
criterion_main!(benches);
