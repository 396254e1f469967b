//! Deterministic random numbers: xoshiro256** seeded through SplitMix64.
//!
//! The generator is pinned to named reference constants so runs reproduce
//! byte-identically across platforms and so ports in other languages can
//! replay the test vectors. xoshiro256**: state update by xor/shift/rotate
//! with shift constants (17, 45) and rotations (23, 45); output
//! `rotl(s1 * 5, 7) * 9`. SplitMix64 stretches a 64-bit seed with the
//! increment 0x9e3779b97f4a7c15.

use crate::automaton::Ensemble;
use crate::error::CoreError;
use crate::lattice::LatticeSpec;

#[derive(Debug, Clone)]
pub struct Xoshiro256 {
    s: [u64; 4],
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Xoshiro256 {
    pub fn seed_from_u64(seed: u64) -> Xoshiro256 {
        let mut sm = seed;
        let s = [
            splitmix64(&mut sm),
            splitmix64(&mut sm),
            splitmix64(&mut sm),
            splitmix64(&mut sm),
        ];
        Xoshiro256 { s }
    }

    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// Uniform double in `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, bound)`.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        // simple multiply-shift range reduction; bias is irrelevant at our scales
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }
}

/// A random sparse ensemble: `support` configurations drawn uniformly with
/// random positive weights, normalized exactly.
pub fn random_ensemble(
    spec: LatticeSpec,
    support: usize,
    rng: &mut Xoshiro256,
) -> Result<Ensemble, CoreError> {
    let dim = spec
        .dimension()
        .ok_or(CoreError::BudgetExceeded { dim: usize::MAX, cap: usize::MAX })?;
    let mut entries: Vec<(u128, f64)> = Vec::with_capacity(support);
    let mut total = 0.0;
    for _ in 0..support {
        let tau = rng.next_below(dim as u64) as u128;
        let w = rng.next_f64() + 1e-3;
        entries.push((tau, w));
        total += w;
    }
    for (_, w) in &mut entries {
        *w /= total;
    }
    // exact renormalization of the largest entry so the sum is 1 within 1e-12
    let sum: f64 = entries.iter().map(|(_, w)| *w).sum();
    if let Some((_, w)) = entries.iter_mut().max_by(|a, b| a.1.total_cmp(&b.1)) {
        *w += 1.0 - sum;
    }
    Ensemble::new(spec, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_sequence_from_seed_zero() {
        // xoshiro256** seeded via SplitMix64(0); first outputs are fixed forever
        let mut rng = Xoshiro256::seed_from_u64(0);
        let first: Vec<u64> = (0..3).map(|_| rng.next_u64()).collect();
        assert_eq!(first[0], 0x99ec_5f36_cb75_f2b4);
        assert_eq!(first[1], 0xbf6e_1f78_4956_452a);
        assert_eq!(first[2], 0x1a5f_849d_4933_e6e0);
    }

    #[test]
    fn doubles_are_in_unit_interval() {
        let mut rng = Xoshiro256::seed_from_u64(12345);
        for _ in 0..1000 {
            let x = rng.next_f64();
            assert!((0.0..1.0).contains(&x));
        }
    }

    #[test]
    fn random_ensembles_are_normalized() {
        let spec = LatticeSpec::new(3).unwrap();
        let mut rng = Xoshiro256::seed_from_u64(7);
        for _ in 0..20 {
            let e = random_ensemble(spec, 40, &mut rng).unwrap();
            assert!((e.total() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn identical_seeds_reproduce() {
        let spec = LatticeSpec::new(2).unwrap();
        let a = random_ensemble(spec, 10, &mut Xoshiro256::seed_from_u64(42)).unwrap();
        let b = random_ensemble(spec, 10, &mut Xoshiro256::seed_from_u64(42)).unwrap();
        assert_eq!(a, b);
    }
}
