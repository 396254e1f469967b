//! Simulation and verification core for a reversible bit automaton of
//! interacting right/left movers and its operator representations.
//!
//! The layers, bottom up:
//! - [`lattice`]: periodic chain, four species per site, bit-packed
//!   configurations and the global index convention.
//! - [`automaton`]: the deterministic update (transport then scatter),
//!   trajectories with event logs, and sparse probability ensembles.
//! - [`wavefunction`] / [`step_operator`]: the time-local state as a real
//!   unit vector and the update as a unique-jump (signed permutation) matrix.
//! - [`hamiltonian`]: Hermitian generators via exact cycle logarithms or
//!   dense unitary eigendecomposition; continuous-time evolution.
//! - [`fock`]: ladder operators on the occupation basis, operator-identity
//!   construction of the step factors, lattice Hamiltonians, and
//!   splitting/continuum comparisons.
//! - [`sector`]: conserved-charge blocks so dense work stays small.
//!
//! The `parallel` feature (default) runs the hot loops through rayon; without
//! it everything falls back to the sequential paths used by the benches.

pub mod automaton;
pub mod error;
pub mod fock;
pub mod hamiltonian;
pub mod kernels;
pub mod lattice;
pub mod numerics;
pub mod rng;
pub mod sector;
pub mod sparse;
pub mod step_operator;
pub mod tol;
pub mod wavefunction;

pub use automaton::{
    automaton_step, ensemble_step, free_step, interaction_step, inverse_step, trajectory,
    Ensemble, EventKind, TrajectoryEvent,
};
pub use error::CoreError;
pub use hamiltonian::{delta_h, free_spectrum, Hamiltonian};
pub use lattice::{BitConfig, ChargeKind, Color, ConfigLiteral, LatticeSpec, Mover, Species};
pub use sector::Sector;
pub use sparse::SparseMatrix;
pub use step_operator::{
    build_step_operator, build_translation, translation_commutator, Factor, SignedPermutation,
    StepOperator,
};
pub use wavefunction::{StateVector, WaveFunction};
