//! Sequential vs data-parallel kernels on representative workloads.
//!
//! Run with the default features to measure both paths; with
//! `--no-default-features` only the sequential variants are compiled.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use bitfermi_core::kernels;
use bitfermi_core::lattice::LatticeSpec;
use bitfermi_core::rng::{random_ensemble, Xoshiro256};
use bitfermi_core::sector::Sector;
use bitfermi_core::sparse::SparseMatrix;
use bitfermi_core::step_operator::{build_step_operator, Factor};
use bitfermi_core::wavefunction::StateVector;
use num_complex::Complex64;

fn bench_permutation_apply(c: &mut Criterion) {
    let spec = LatticeSpec::new(4).unwrap();
    let s = build_step_operator(&spec, Factor::Full).unwrap();
    let p = s.permutation().unwrap();
    let dim = p.dim();
    let target: Vec<usize> = (0..dim).map(|i| p.target(i)).collect();
    let q: Vec<f64> = (0..dim).map(|i| (i as f64).sin()).collect();

    let mut group = c.benchmark_group("permutation_apply_dim65536");
    group.bench_function("seq", |b| {
        let mut out = vec![0.0; dim];
        b.iter(|| kernels::permute_seq(&target, &q, &mut out));
    });
    #[cfg(feature = "parallel")]
    group.bench_function("par", |b| {
        let mut out = vec![0.0; dim];
        b.iter(|| kernels::permute_par(&target, &q, &mut out));
    });
    group.finish();
}

fn bench_ensemble_batch(c: &mut Criterion) {
    let spec = LatticeSpec::new(3).unwrap();
    let mut rng = Xoshiro256::seed_from_u64(1);
    let batch: Vec<_> = (0..64)
        .map(|_| random_ensemble(spec, 256, &mut rng).unwrap())
        .collect();

    let mut group = c.benchmark_group("ensemble_batch_64x256");
    group.bench_function("seq", |b| {
        b.iter_batched(
            || batch.clone(),
            |batch| kernels::ensemble_batch_seq(&batch),
            BatchSize::SmallInput,
        );
    });
    #[cfg(feature = "parallel")]
    group.bench_function("par", |b| {
        b.iter_batched(
            || batch.clone(),
            |batch| kernels::ensemble_batch_par(&batch),
            BatchSize::SmallInput,
        );
    });
    group.finish();
}

fn bench_sector_matvec(c: &mut Criterion) {
    let spec = LatticeSpec::new(24).unwrap();
    let sector = Sector::one_right_one_left(spec);
    let (h_free, h_int) = bitfermi_core::fock::build_h_lattice_sector(&sector);
    let h: SparseMatrix = h_free.add(&h_int);
    let v: Vec<Complex64> = (0..sector.dim())
        .map(|i| Complex64::new((i as f64).cos(), (i as f64 * 0.3).sin()))
        .collect();
    let state = StateVector::new(v);

    let mut group = c.benchmark_group("sector_matvec_dim2304");
    group.bench_function("seq", |b| {
        b.iter(|| h.matvec_seq(state.as_slice()));
    });
    #[cfg(feature = "parallel")]
    group.bench_function("par", |b| {
        b.iter(|| h.matvec_par(state.as_slice()));
    });
    group.finish();
}

criterion_group!(benches, bench_permutation_apply, bench_ensemble_batch, bench_sector_matvec);
criterion_main!(benches);
