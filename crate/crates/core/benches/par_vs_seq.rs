//! Compares the data-parallel mass scan against its sequential fallback.
//!
//! With the default `parallel` feature, `degeneracy_scan` fans the grid out
//! over rayon while `degeneracy_scan_seq` stays single threaded; built with
//! `--no-default-features` both paths are sequential and the two groups
//! should coincide.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ngon_spectra::block_spectrum::{degeneracy_scan, degeneracy_scan_seq};

fn bench_mass_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("mass_scan");
    group.sample_size(10);
    for (n, steps) in [(7usize, 200usize), (10, 200)] {
        group.bench_with_input(
            BenchmarkId::new("parallel", format!("n{n}_steps{steps}")),
            &(n, steps),
            |b, &(n, steps)| b.iter(|| degeneracy_scan(n, 0.1, 20.0, steps).unwrap()),
        );
        group.bench_with_input(
            BenchmarkId::new("sequential", format!("n{n}_steps{steps}")),
            &(n, steps),
            |b, &(n, steps)| b.iter(|| degeneracy_scan_seq(n, 0.1, 20.0, steps).unwrap()),
        );
    }
    group.finish();
}

criterion_group!(benches, bench_mass_scan);
criterion_main!(benches);
