//! Sequential and data-parallel variants of the hot loops, exposed for the
//! bench suite. The public API dispatches on the `parallel` feature; these
//! entry points keep both paths callable side by side.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::automaton::{ensemble_step, Ensemble};
use crate::wavefunction::WaveFunction;

/// Permutation relabeling of a real state vector, sequential.
pub fn permute_seq(target: &[usize], q: &[f64], out: &mut [f64]) {
    for (rho, &t) in target.iter().enumerate() {
        out[t] = q[rho];
    }
}

/// Permutation relabeling through a parallel index map.
#[cfg(feature = "parallel")]
pub fn permute_par(target: &[usize], q: &[f64], out: &mut [f64]) {
    let inverse: Vec<usize> = {
        let mut inv = vec![0usize; target.len()];
        for (rho, &t) in target.iter().enumerate() {
            inv[t] = rho;
        }
        inv
    };
    out.par_iter_mut()
        .enumerate()
        .for_each(|(t, slot)| *slot = q[inverse[t]]);
}

/// Step a batch of ensembles, sequential.
pub fn ensemble_batch_seq(batch: &[Ensemble]) -> Vec<Ensemble> {
    batch.iter().map(ensemble_step).collect()
}

/// Step a batch of ensembles across the thread pool.
#[cfg(feature = "parallel")]
pub fn ensemble_batch_par(batch: &[Ensemble]) -> Vec<Ensemble> {
    batch.par_iter().map(ensemble_step).collect()
}

/// Batched probability extraction (`p = q^2` per ensemble member).
pub fn probabilities_seq(batch: &[WaveFunction]) -> Vec<Vec<f64>> {
    batch.iter().map(|q| q.probabilities()).collect()
}

#[cfg(feature = "parallel")]
pub fn probabilities_par(batch: &[WaveFunction]) -> Vec<Vec<f64>> {
    batch.par_iter().map(|q| q.probabilities()).collect()
}
