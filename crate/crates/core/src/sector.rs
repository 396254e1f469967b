//! Conserved-charge sectors: dense work happens per block, never on the
//! full exponential-dimension space.

use std::collections::HashMap;

use crate::automaton::automaton_step;
use crate::error::CoreError;
use crate::lattice::{BitConfig, ChargeKind, Color, LatticeSpec, Species};
use crate::step_operator::SignedPermutation;
use crate::wavefunction::StateVector;

/// An ordered basis of configuration indices closed under the dynamics.
#[derive(Debug, Clone)]
pub struct Sector {
    pub spec: LatticeSpec,
    basis: Vec<u128>,
    lookup: HashMap<u128, usize>,
}

impl Sector {
    pub fn from_basis(spec: LatticeSpec, mut basis: Vec<u128>) -> Sector {
        basis.sort_unstable();
        basis.dedup();
        let lookup = basis.iter().enumerate().map(|(i, &tau)| (tau, i)).collect();
        Sector { spec, basis, lookup }
    }

    /// All configurations with the given right/left particle numbers
    /// (requires an enumerable full space, `4 M_x < 64` or so).
    pub fn charge_sector(spec: LatticeSpec, n_r: u32, n_l: u32) -> Result<Sector, CoreError> {
        let dim = spec
            .dimension()
            .ok_or(CoreError::BudgetExceeded { dim: usize::MAX, cap: usize::MAX })?;
        let basis = (0..dim as u128)
            .filter(|&tau| {
                let c = BitConfig::from_index(tau, &spec).expect("in range");
                c.charge(ChargeKind::NRight) == n_r && c.charge(ChargeKind::NLeft) == n_l
            })
            .collect();
        Ok(Sector::from_basis(spec, basis))
    }

    /// The two-particle sector with one right mover and one left mover,
    /// built directly (works at any lattice size).
    pub fn one_right_one_left(spec: LatticeSpec) -> Sector {
        let mut basis = Vec::with_capacity(4 * spec.m_x * spec.m_x);
        for x_r in 0..spec.m_x {
            for c_r in [Color::C1, Color::C2] {
                for x_l in 0..spec.m_x {
                    for c_l in [Color::C1, Color::C2] {
                        let config = BitConfig::with_particles(
                            &spec,
                            &[
                                (x_r, Species { mover: crate::lattice::Mover::Right, color: c_r }),
                                (x_l, Species { mover: crate::lattice::Mover::Left, color: c_l }),
                            ],
                        );
                        basis.push(config.index());
                    }
                }
            }
        }
        Sector::from_basis(spec, basis)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn config(&self, i: usize) -> BitConfig {
        BitConfig::from_index(self.basis[i], &self.spec).expect("stored index valid")
    }

    pub fn index_of(&self, config: &BitConfig) -> Option<usize> {
        self.lookup.get(&config.index()).copied()
    }

    pub fn basis(&self) -> &[u128] {
        &self.basis
    }

    /// Restrict a configuration map to this sector; fails if the image leaves it.
    pub fn restrict_map(
        &self,
        rule: impl Fn(&BitConfig, &LatticeSpec) -> BitConfig,
    ) -> Result<SignedPermutation, CoreError> {
        let target = (0..self.dim())
            .map(|i| {
                let image = rule(&self.config(i), &self.spec);
                self.index_of(&image).ok_or(CoreError::IndexOutOfRange {
                    tau: image.index(),
                    bits: self.spec.num_bits(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SignedPermutation::new(target, vec![1; self.dim()]))
    }

    /// The automaton step restricted to this sector.
    pub fn automaton_permutation(&self) -> Result<SignedPermutation, CoreError> {
        self.restrict_map(automaton_step)
    }

    /// Apply the automaton step directly to a sector state vector.
    pub fn automaton_apply(&self, v: &StateVector) -> Result<StateVector, CoreError> {
        let p = self.automaton_permutation()?;
        let mut out = StateVector::zeros(self.dim());
        for i in 0..self.dim() {
            out.as_mut_slice()[p.target(i)] = v.amplitude(i);
        }
        Ok(out)
    }
}
