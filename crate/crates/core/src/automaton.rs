//! The deterministic updating rule and its probabilistic extension.
//!
//! One step is transport followed by scattering. Transport moves every right
//! mover one site up and every left mover one site down. Scattering then acts
//! independently at each site: if exactly one right mover and one left mover
//! meet, both colors flip; every other local configuration is left alone.
//! All randomness lives in the initial condition, carried as a sparse
//! probability distribution over configurations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::lattice::{BitConfig, LatticeSpec, Species, SPECIES_PER_SITE};
use crate::tol::ENSEMBLE_NORM;

/// Local scatter table on nibble values `(n_R1, n_R2, n_L1, n_L2)`:
/// 9 = (1,0,0,1) <-> 6 = (0,1,1,0) and 5 = (1,0,1,0) <-> 10 = (0,1,0,1),
/// all other twelve values fixed. Applying it twice is the identity.
pub const SCATTER_TABLE: [u8; 16] =
    [0, 1, 2, 3, 4, 10, 9, 7, 8, 6, 5, 11, 12, 13, 14, 15];

/// Transport half-step: `n_Ra(x+1) <- n_Ra(x)`, `n_La(x-1) <- n_La(x)`.
pub fn free_step(config: &BitConfig, spec: &LatticeSpec) -> BitConfig {
    let mut out = BitConfig::empty(spec);
    for x in 0..spec.m_x {
        let up = spec.wrap(x as isize + 1);
        let down = spec.wrap(x as isize - 1);
        for s in [Species::R1, Species::R2] {
            if config.get(x, s) {
                out.set(up, s, true);
            }
        }
        for s in [Species::L1, Species::L2] {
            if config.get(x, s) {
                out.set(down, s, true);
            }
        }
    }
    out
}

/// Inverse transport.
pub fn free_step_inverse(config: &BitConfig, spec: &LatticeSpec) -> BitConfig {
    let mut out = BitConfig::empty(spec);
    for x in 0..spec.m_x {
        let up = spec.wrap(x as isize + 1);
        let down = spec.wrap(x as isize - 1);
        for s in [Species::R1, Species::R2] {
            if config.get(x, s) {
                out.set(down, s, true);
            }
        }
        for s in [Species::L1, Species::L2] {
            if config.get(x, s) {
                out.set(up, s, true);
            }
        }
    }
    out
}

/// Scatter half-step: apply the local table at every site. An involution.
pub fn interaction_step(config: &BitConfig, spec: &LatticeSpec) -> BitConfig {
    let mut out = *config;
    for x in 0..spec.m_x {
        out.set_nibble(x, SCATTER_TABLE[config.nibble(x) as usize]);
    }
    out
}

/// One full automaton step: transport, then scatter. Bijective.
pub fn automaton_step(config: &BitConfig, spec: &LatticeSpec) -> BitConfig {
    interaction_step(&free_step(config, spec), spec)
}

/// The inverse step: scatter (its own inverse), then inverse transport.
pub fn inverse_step(config: &BitConfig, spec: &LatticeSpec) -> BitConfig {
    free_step_inverse(&interaction_step(config, spec), spec)
}

/// What happened at a scattering site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EventKind {
    /// (1,0,0,1) <-> (0,1,1,0)
    #[serde(rename = "scatter_9_6")]
    Scatter96,
    /// (1,0,1,0) <-> (0,1,0,1)
    #[serde(rename = "scatter_5_10")]
    Scatter510,
}

/// A nontrivial local swap at time step `t`, site `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrajectoryEvent {
    pub t: usize,
    pub x: usize,
    pub kind: EventKind,
    pub before: u8,
    pub after: u8,
}

/// Run `n_steps` automaton steps, recording each configuration and every
/// scatter event. `configs[k]` is the state after `k` steps; an event during
/// step `k -> k+1` is stamped with `t = k + 1`.
pub fn trajectory(
    config: &BitConfig,
    spec: &LatticeSpec,
    n_steps: usize,
) -> (Vec<BitConfig>, Vec<TrajectoryEvent>) {
    let mut configs = Vec::with_capacity(n_steps + 1);
    let mut events = Vec::new();
    let mut current = *config;
    configs.push(current);
    for step in 0..n_steps {
        let moved = free_step(&current, spec);
        let mut next = moved;
        for x in 0..spec.m_x {
            let before = moved.nibble(x);
            let after = SCATTER_TABLE[before as usize];
            if before != after {
                next.set_nibble(x, after);
                let kind = match before {
                    9 | 6 => EventKind::Scatter96,
                    5 | 10 => EventKind::Scatter510,
                    _ => unreachable!("scatter table only moves 5,6,9,10"),
                };
                events.push(TrajectoryEvent { t: step + 1, x, kind, before, after });
            }
        }
        current = next;
        configs.push(current);
    }
    (configs, events)
}

/// Sparse probability distribution over configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub spec: LatticeSpec,
    weights: BTreeMap<u128, f64>,
}

impl Ensemble {
    /// Build from `(configuration index, probability)` pairs.
    pub fn new(spec: LatticeSpec, entries: Vec<(u128, f64)>) -> Result<Ensemble, CoreError> {
        let mut weights = BTreeMap::new();
        let mut total = 0.0;
        for (tau, p) in entries {
            if tau & !spec.full_mask() != 0 {
                return Err(CoreError::IndexOutOfRange { tau, bits: spec.num_bits() });
            }
            if p < 0.0 {
                return Err(CoreError::NegativeWeight { tau, weight: p });
            }
            if p > 0.0 {
                *weights.entry(tau).or_insert(0.0) += p;
                total += p;
            }
        }
        if (total - 1.0).abs() > ENSEMBLE_NORM {
            return Err(CoreError::NotNormalized(total));
        }
        Ok(Ensemble { spec, weights })
    }

    /// Deterministic special case: all weight on one configuration.
    pub fn point_mass(spec: LatticeSpec, config: &BitConfig) -> Ensemble {
        let mut weights = BTreeMap::new();
        weights.insert(config.index(), 1.0);
        Ensemble { spec, weights }
    }

    pub fn support_size(&self) -> usize {
        self.weights.len()
    }

    pub fn probability(&self, tau: u128) -> f64 {
        self.weights.get(&tau).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.weights.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u128, f64)> + '_ {
        self.weights.iter().map(|(&tau, &p)| (tau, p))
    }

    /// Advance the distribution one step: weights are moved, never mixed.
    pub fn step(&self) -> Ensemble {
        let weights = self
            .weights
            .iter()
            .map(|(&tau, &p)| {
                let c = BitConfig::from_index(tau, &self.spec).expect("stored index valid");
                (automaton_step(&c, &self.spec).index(), p)
            })
            .collect();
        Ensemble { spec: self.spec, weights }
    }

    /// Expectation value of an observable over the distribution.
    pub fn expectation<F: Fn(&BitConfig) -> f64>(&self, obs: F) -> f64 {
        self.weights
            .iter()
            .map(|(&tau, &p)| {
                let c = BitConfig::from_index(tau, &self.spec).expect("stored index valid");
                p * obs(&c)
            })
            .sum()
    }
}

/// Advance an ensemble one automaton step.
pub fn ensemble_step(e: &Ensemble) -> Ensemble {
    e.step()
}

/// A scatter happens at `(t, x)` iff, after the transport half-step, exactly
/// one right mover and exactly one left mover occupy `x`. Used as the
/// independent replay oracle for event logs.
pub fn scatter_predicate(nibble: u8) -> bool {
    let n = nibble as u32;
    (n & 0b0011).count_ones() == 1 && (n & 0b1100).count_ones() == 1
}

/// JSON file format for ensembles.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleFile {
    #[serde(rename = "M_x")]
    pub m_x: usize,
    pub entries: Vec<EnsembleEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleEntry {
    pub bits: String,
    pub p: f64,
}

impl EnsembleFile {
    pub fn encode(e: &Ensemble) -> EnsembleFile {
        let entries = e
            .iter()
            .map(|(tau, p)| {
                let c = BitConfig::from_index(tau, &e.spec).expect("stored index valid");
                EnsembleEntry { bits: c.bit_string(), p }
            })
            .collect();
        EnsembleFile { m_x: e.spec.m_x, entries }
    }

    pub fn decode(&self) -> Result<Ensemble, CoreError> {
        let spec = LatticeSpec::new(self.m_x)?;
        let entries = self
            .entries
            .iter()
            .map(|entry| {
                BitConfig::from_bit_string(&entry.bits, &spec).map(|c| (c.index(), entry.p))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ensemble::new(spec, entries)
    }
}

/// Exhaustive iterator over all configurations of a small lattice.
pub fn all_configs(spec: &LatticeSpec) -> impl Iterator<Item = BitConfig> + '_ {
    let dim = spec
        .dimension()
        .expect("exhaustive enumeration needs 4*M_x < usize bits") as u128;
    (0..dim).map(move |tau| BitConfig::from_index(tau, spec).expect("in range"))
}

#[allow(unused)]
fn species_bits(spec: &LatticeSpec, species: Species) -> u128 {
    let mut mask = 0u128;
    for x in 0..spec.m_x {
        mask |= 1u128 << (SPECIES_PER_SITE * x + species.index());
    }
    mask
}
