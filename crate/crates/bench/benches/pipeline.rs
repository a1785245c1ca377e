use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use xi_core::chambers::{count_chambers, dual_count, RASTER_RESOLUTION};
use xi_core::completion::completed_signed_contour;
use xi_core::contour::{find_cusps, trace_all, Sampling};
use xi_core::spectrum::{analyze, DEFAULT_RANK_TOL};
use xi_core::zeroset::{topology_signature, ExpSum, SignatureOptions};
use xi_core::{SignClass, Spectrum};

fn penta() -> Spectrum {
    Spectrum::from_rows(&[vec![0., 1., 0., 4., 1.], vec![0., 0., 1., 1., 4.]]).unwrap()
}

fn stages(c: &mut Criterion) {
    let spec = penta();
    let (_, basis) = analyze(&spec, DEFAULT_RANK_TOL).unwrap();
    let sign: SignClass = "+--++".parse().unwrap();
    let sampling = Sampling::default().with_window(16.0);
    let contour = completed_signed_contour(&spec, &basis, &sign, &sampling).unwrap();

    c.bench_function("analyze", |b| {
        b.iter(|| analyze(black_box(&spec), DEFAULT_RANK_TOL).unwrap())
    });
    c.bench_function("find_cusps", |b| {
        b.iter(|| find_cusps(black_box(&basis), DEFAULT_RANK_TOL).unwrap())
    });
    c.bench_function("trace_all", |b| {
        b.iter(|| trace_all(black_box(&basis), &sampling).unwrap())
    });

    let mut slow = c.benchmark_group("chambers");
    slow.sample_size(10);
    slow.bench_function("count_chambers", |b| {
        b.iter(|| count_chambers(black_box(&contour), 8.0).unwrap())
    });
    slow.bench_function("dual_count", |b| {
        b.iter(|| dual_count(black_box(&contour), 8.0, RASTER_RESOLUTION).unwrap())
    });
    slow.finish();

    let inf = Spectrum::from_rows(&[vec![0., 1., 0., 2., 0.], vec![0., 0., 1., 0., 2.]]).unwrap();
    let g = ExpSum::new(inf, vec![3.25, 1.0, -4.0, 1.0, 1.0]).unwrap();
    let mut zs = c.benchmark_group("zeroset");
    zs.sample_size(10);
    zs.bench_function("topology_signature", |b| {
        b.iter(|| topology_signature(black_box(&g), &SignatureOptions::default()).unwrap())
    });
    zs.finish();
}

criterion_group!(benches, stages);
criterion_main!(benches);
