use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use apmeas_bench::{integer_comb, mixed_measure};
use apmeas_core::convolution::{convolve_mf, safe_grid};
use apmeas_core::diffraction::{autocorrelation, fourier, Taper};
use apmeas_core::convolution::VanHoveSequence;
use apmeas_core::norms::{canonical_family, norm_u, norm_via_family};
use apmeas_core::periods::norm_period_scan;
use apmeas_core::{TestFunction, Window};

fn bench_sliding_norm(c: &mut Criterion) {
    let m = mixed_measure(64.0);
    let u = Window::new(0.0, 1.0).unwrap();
    c.bench_function("sliding norm, mixed measure on (-64,64)", |b| {
        b.iter(|| norm_u(black_box(&m), black_box(&u)).unwrap().value)
    });
}

fn bench_family_norm(c: &mut Criterion) {
    let m = mixed_measure(16.0);
    let u = Window::new(0.0, 1.0).unwrap();
    let fam = canonical_family(&u, 5);
    c.bench_function("family norm, depth 5", |b| {
        b.iter(|| norm_via_family(black_box(&m), &u, &fam).unwrap().value)
    });
}

fn bench_period_scan(c: &mut Criterion) {
    let m = integer_comb(32.0);
    let u = Window::new(0.0, 1.0).unwrap();
    let scan = Window::new(-8.0, 8.0).unwrap();
    c.bench_function("norm period scan, comb, 129 translates", |b| {
        b.iter(|| norm_period_scan(black_box(&m), &u, &scan, 0.125).unwrap().len())
    });
}

fn bench_convolve_mf(c: &mut Criterion) {
    let m = mixed_measure(32.0);
    let g = TestFunction::hat(-1.0, 0.0, 1.0).unwrap();
    let grid = safe_grid(&m, &g, 1.0 / 64.0).unwrap();
    c.bench_function("measure * hat on the safe grid", |b| {
        b.iter(|| convolve_mf(black_box(&m), &g, grid).unwrap().len())
    });
}

fn bench_fourier(c: &mut Criterion) {
    let comb = integer_comb(60.0);
    let vh = VanHoveSequence::linear(50);
    let gamma = autocorrelation(&comb, &vh, 50).unwrap();
    c.bench_function("fourier of comb autocorrelation, 2001 bins", |b| {
        b.iter(|| {
            fourier(black_box(&gamma), 0.0, 2.5e-3, 2001, Taper::Triangular, 100.0)
                .unwrap()
                .intensities
                .len()
        })
    });
}

criterion_group!(
    benches,
    bench_sliding_norm,
    bench_family_norm,
    bench_period_scan,
    bench_convolve_mf,
    bench_fourier
);
criterion_main!(benches);
