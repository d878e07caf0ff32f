//! Criterion benchmarks for the heavy symbolic pipelines: the Hessian
//! determinant, the gate resultant, full classification of a random smooth
//! quadric, and the surface chamber sweep.

use criterion::{criterion_group, criterion_main, Criterion};
use kstab_core::action::hessian_det;
use kstab_core::mpoly::{MPoly, C, S, V};
use kstab_core::normal_form::{classify, shear_structure};
use kstab_core::resultant::resultant;
use kstab_core::sample::{rng, smooth_quadric};
use kstab_core::stability::s_w2_exceptional;
use kstab_core::zariski::{config, dp4_restrictions, lift_through_point, surface_chambers};
use std::hint::black_box;

fn bench_hessian(c: &mut Criterion) {
    let s: [MPoly; 6] = core::array::from_fn(|i| MPoly::var(S[i]));
    c.bench_function("hessian_determinant_symbolic", |b| {
        b.iter(|| hessian_det(black_box(&s)))
    });
}

fn bench_gate_resultant(c: &mut Criterion) {
    let st = shear_structure();
    c.bench_function("gate_resultant", |b| {
        b.iter(|| resultant(black_box(&st.slot4), black_box(&st.offset), C).unwrap())
    });
}

fn bench_classify(c: &mut Criterion) {
    let s = smooth_quadric(&mut rng(17));
    c.bench_function("classify_random_smooth_quadric", |b| {
        b.iter(|| classify(black_box(&s)).unwrap())
    });
}

fn bench_chamber_sweep(c: &mut Criterion) {
    let base = config("dp4").unwrap();
    let cfg = config("dp4-blowup").unwrap();
    let (lo, hi, coeffs) = dp4_restrictions().swap_remove(0);
    let lifted = lift_through_point(&base, &coeffs, &MPoly::var(V)).unwrap();
    c.bench_function("surface_chamber_sweep", |b| {
        b.iter(|| surface_chambers(black_box(&lifted), &cfg, &lo, &hi).unwrap())
    });
}

fn bench_curve_functional(c: &mut Criterion) {
    c.bench_function("swept_curve_functional", |b| {
        b.iter(|| s_w2_exceptional(black_box("dp4-blowup")).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_hessian, bench_gate_resultant, bench_classify, bench_chamber_sweep, bench_curve_functional
}
criterion_main!(benches);
