//! Parallel against sequential evaluation of the data-parallel kernels.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ihsig_core::catalog;
use ihsig_core::complex::boundary_matrix;
use ihsig_core::exec;
use ihsig_core::filtered::{intersection_homology, FilteredComplex, Perversity};
use ihsig_core::witt::is_witt;

const MODES: [(&str, bool); 2] = [("sequential", true), ("parallel", false)];

fn subdivision(c: &mut Criterion) {
    let k = catalog::s2xs2().0;
    let mut g = c.benchmark_group("barycentric_subdivision");
    g.sample_size(10);
    for (name, seq) in MODES {
        g.bench_function(BenchmarkId::new(name, "s2xs2"), |b| {
            exec::set_sequential(seq);
            b.iter(|| k.barycentric_subdivision())
        });
    }
    g.finish();
}

fn boundary(c: &mut Criterion) {
    let k = catalog::s2xs2().0.barycentric_subdivision().complex;
    let mut g = c.benchmark_group("boundary_matrix");
    g.sample_size(10);
    for (name, seq) in MODES {
        g.bench_function(BenchmarkId::new(name, "sd s2xs2, degree 3"), |b| {
            exec::set_sequential(seq);
            b.iter(|| boundary_matrix(&k, 3))
        });
    }
    g.finish();
}

fn ih(c: &mut Criterion) {
    let k = catalog::torus().iterated_suspension(2);
    let x = FilteredComplex::skeletal(&k);
    let mut g = c.benchmark_group("intersection_homology");
    g.sample_size(10);
    for (name, seq) in MODES {
        g.bench_function(BenchmarkId::new(name, "double suspension of T2"), |b| {
            exec::set_sequential(seq);
            b.iter(|| intersection_homology(&x, &Perversity::LowerMiddle).unwrap())
        });
    }
    g.finish();
}

fn witt(c: &mut Criterion) {
    let k = catalog::cp2();
    let mut g = c.benchmark_group("witt");
    g.sample_size(10);
    for (name, seq) in MODES {
        g.bench_function(BenchmarkId::new(name, "cp2"), |b| {
            exec::set_sequential(seq);
            b.iter(|| is_witt(&k).unwrap())
        });
    }
    g.finish();
}

fn regularity(c: &mut Criterion) {
    let a = catalog::octahedron_rotation().action.subdivide();
    let mut g = c.benchmark_group("regularity");
    g.sample_size(10);
    for (name, seq) in MODES {
        g.bench_function(BenchmarkId::new(name, "sd octahedron, Z/4"), |b| {
            exec::set_sequential(seq);
            b.iter(|| a.regularity_violation())
        });
    }
    g.finish();
}

criterion_group!(kernels, subdivision, boundary, ih, witt, regularity);
criterion_main!(kernels);
