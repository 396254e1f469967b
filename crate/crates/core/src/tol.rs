//! Central tolerance constants. Every floating-point comparison in the
//! library and the verification suites draws from here, so a run can override
//! them in one place (see the CLI's tolerance table).

/// Ensemble normalization defect allowed at construction.
pub const ENSEMBLE_NORM: f64 = 1e-12;

/// Wave-function norm defect (unit vectors, exact-arithmetic level).
pub const WAVEFUNCTION_NORM: f64 = 1e-12;

/// Ensemble/wave-function probability agreement along evolutions.
pub const PROBABILITY_MATCH: f64 = 1e-12;

/// Hermiticity defect of extracted Hamiltonians.
pub const HERMITICITY: f64 = 1e-12;

/// Unitarity defect of dense step operators.
pub const UNITARITY: f64 = 1e-10;

/// Max-norm reconstruction error of exp(-i eps H) against its source operator.
pub const EXP_ROUNDTRIP: f64 = 1e-10;

/// Continuous evolution against discrete automaton steps at integer times.
pub const SCHRODINGER_MATCH: f64 = 1e-9;

/// Fock-operator anticommutator defect.
pub const ANTICOMMUTATOR: f64 = 1e-14;

/// Operator-identity checks between constructions (scatter exponential, etc.).
pub const OPERATOR_MATCH: f64 = 1e-12;

/// One-particle eigenphase agreement.
pub const EIGENPHASE: f64 = 1e-12;

/// Phase alignment for smooth momentum states in splitting comparisons.
pub const SMOOTH_PHASE: f64 = 1e-8;

/// Eigenphases closer than this to the branch point pi are reported.
pub const BRANCH_CUT_WINDOW: f64 = 1e-9;
