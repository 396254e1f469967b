use thiserror::Error;

/// Errors shared by the configuration, evolution and operator layers.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid lattice size {0} (need 1 ..= 32 sites)")]
    InvalidLattice(usize),

    #[error("invalid lattice spacing {0} (must be positive)")]
    InvalidEpsilon(f64),

    #[error("invalid species index {0} (need 0..4)")]
    InvalidSpecies(usize),

    #[error("configuration index {tau} out of range for {bits} bits")]
    IndexOutOfRange { tau: u128, bits: usize },

    #[error("malformed bit string {0:?} (need 0/1 of length 4*M_x)")]
    BadBitString(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("state space of dimension {dim} exceeds the configured cap {cap}")]
    BudgetExceeded { dim: usize, cap: usize },

    #[error("ensemble weights not normalized: sum = {0}")]
    NotNormalized(f64),

    #[error("negative ensemble weight {weight} on configuration {tau}")]
    NegativeWeight { tau: u128, weight: f64 },

    #[error("matrix is not unitary (max defect {0:.3e})")]
    NonUnitary(f64),

    #[error("operator is not in permutation form")]
    NotPermutationForm,
}
