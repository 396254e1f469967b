//! Step evolution operators: the matrix form of the automaton update.
//!
//! The automaton's operator is a "unique jump" matrix: exactly one nonzero
//! entry in each row and column. We keep that case as an explicit signed
//! permutation (exact integer arithmetic); coarse-grained or fractional-step
//! operators fall back to a dense complex matrix.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::automaton::{automaton_step, free_step, interaction_step};
use crate::error::CoreError;
use crate::lattice::{BitConfig, ChargeKind, LatticeSpec};
use crate::wavefunction::{StateVector, WaveFunction};

/// Which factorization a step operator represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    Full,
    Free,
    Int,
    /// Single-site 16x16 scatter block.
    Site,
}

/// A signed permutation matrix: column `rho` has its single nonzero entry
/// `sign[rho]` in row `target[rho]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPermutation {
    target: Vec<usize>,
    sign: Vec<i8>,
}

impl SignedPermutation {
    pub fn identity(dim: usize) -> SignedPermutation {
        SignedPermutation { target: (0..dim).collect(), sign: vec![1; dim] }
    }

    pub fn new(target: Vec<usize>, sign: Vec<i8>) -> SignedPermutation {
        assert_eq!(target.len(), sign.len());
        let mut seen = vec![false; target.len()];
        for &t in &target {
            assert!(!seen[t], "not a permutation: duplicate row {t}");
            seen[t] = true;
        }
        assert!(sign.iter().all(|&s| s == 1 || s == -1));
        SignedPermutation { target, sign }
    }

    pub fn from_map<F: Fn(usize) -> usize>(dim: usize, f: F) -> SignedPermutation {
        SignedPermutation::new((0..dim).map(f).collect(), vec![1; dim])
    }

    pub fn dim(&self) -> usize {
        self.target.len()
    }

    pub fn target(&self, rho: usize) -> usize {
        self.target[rho]
    }

    pub fn sign(&self, rho: usize) -> i8 {
        self.sign[rho]
    }

    pub fn is_nonnegative(&self) -> bool {
        self.sign.iter().all(|&s| s == 1)
    }

    /// Matrix product `self * other` (apply `other` first).
    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        assert_eq!(self.dim(), other.dim());
        let target = other.target.iter().map(|&mid| self.target[mid]).collect();
        let sign = other
            .target
            .iter()
            .zip(&other.sign)
            .map(|(&mid, &s)| s * self.sign[mid])
            .collect();
        SignedPermutation { target, sign }
    }

    pub fn inverse(&self) -> SignedPermutation {
        let dim = self.dim();
        let mut target = vec![0; dim];
        let mut sign = vec![1i8; dim];
        for rho in 0..dim {
            target[self.target[rho]] = rho;
            sign[self.target[rho]] = self.sign[rho];
        }
        SignedPermutation { target, sign }
    }

    /// Disjoint cycles of the underlying index map, each with the product of
    /// entry signs around it. Cycle order and rotation are deterministic
    /// (smallest member first).
    pub fn cycles(&self) -> Vec<Cycle> {
        let dim = self.dim();
        let mut visited = vec![false; dim];
        let mut cycles = Vec::new();
        for start in 0..dim {
            if visited[start] {
                continue;
            }
            let mut members = Vec::new();
            let mut sign_product = 1i8;
            let mut current = start;
            loop {
                visited[current] = true;
                members.push(current);
                sign_product *= self.sign[current];
                current = self.target[current];
                if current == start {
                    break;
                }
            }
            cycles.push(Cycle { members, sign_product });
        }
        cycles
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = self.dim();
        let mut m = DMatrix::zeros(dim, dim);
        for rho in 0..dim {
            m[(self.target[rho], rho)] = Complex64::new(self.sign[rho] as f64, 0.0);
        }
        m
    }

    /// `P^T P = 1` by construction; kept as an explicit integer check.
    pub fn orthogonality_holds(&self) -> bool {
        let id = self.inverse().compose(self);
        id.target.iter().enumerate().all(|(i, &t)| t == i) && id.is_nonnegative()
    }
}

/// One cycle of a signed permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub members: Vec<usize>,
    pub sign_product: i8,
}

/// A step evolution operator in one of two storage forms.
#[derive(Debug, Clone)]
pub enum StepForm {
    Permutation(SignedPermutation),
    Dense(DMatrix<Complex64>),
}

#[derive(Debug, Clone)]
pub struct StepOperator {
    pub factor: Factor,
    pub form: StepForm,
}

/// Default cap on dense state-space dimension (`4 M_x <= 16`).
pub const DEFAULT_DIM_CAP: usize = 1 << 16;

impl StepOperator {
    pub fn dim(&self) -> usize {
        match &self.form {
            StepForm::Permutation(p) => p.dim(),
            StepForm::Dense(m) => m.nrows(),
        }
    }

    pub fn permutation(&self) -> Result<&SignedPermutation, CoreError> {
        match &self.form {
            StepForm::Permutation(p) => Ok(p),
            StepForm::Dense(_) => Err(CoreError::NotPermutationForm),
        }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        match &self.form {
            StepForm::Permutation(p) => p.to_dense(),
            StepForm::Dense(m) => m.clone(),
        }
    }

    /// Exactly one nonzero (+1) entry per row and column.
    pub fn is_unique_jump(&self) -> bool {
        match &self.form {
            StepForm::Permutation(p) => p.is_nonnegative(),
            StepForm::Dense(_) => false,
        }
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &StepOperator, factor: Factor) -> StepOperator {
        let form = match (&self.form, &other.form) {
            (StepForm::Permutation(a), StepForm::Permutation(b)) => {
                StepForm::Permutation(a.compose(b))
            }
            _ => StepForm::Dense(self.to_dense() * other.to_dense()),
        };
        StepOperator { factor, form }
    }

    /// Apply to a real wave function; permutation form is an index relabeling.
    pub fn apply(&self, q: &WaveFunction) -> Result<WaveFunction, CoreError> {
        match &self.form {
            StepForm::Permutation(p) => {
                if p.dim() != q.len() {
                    return Err(CoreError::DimensionMismatch { left: p.dim(), right: q.len() });
                }
                let mut out = vec![0.0; q.len()];
                for rho in 0..p.dim() {
                    out[p.target(rho)] = p.sign(rho) as f64 * q.amplitude(rho);
                }
                Ok(WaveFunction::from_components_unchecked(q.spec, out, q.time + 1))
            }
            StepForm::Dense(_) => Err(CoreError::NotPermutationForm),
        }
    }

    /// Apply to a complex state vector.
    pub fn apply_state(&self, v: &StateVector) -> Result<StateVector, CoreError> {
        if self.dim() != v.len() {
            return Err(CoreError::DimensionMismatch { left: self.dim(), right: v.len() });
        }
        match &self.form {
            StepForm::Permutation(p) => {
                let mut out = vec![Complex64::default(); v.len()];
                for rho in 0..p.dim() {
                    out[p.target(rho)] = p.sign(rho) as f64 * v.amplitude(rho);
                }
                Ok(StateVector::new(out))
            }
            StepForm::Dense(m) => {
                let x = nalgebra::DVector::from_column_slice(v.as_slice());
                Ok(StateVector::new((m * x).data.into()))
            }
        }
    }
}

fn permutation_from_rule(
    spec: &LatticeSpec,
    cap: usize,
    rule: impl Fn(&BitConfig, &LatticeSpec) -> BitConfig,
) -> Result<SignedPermutation, CoreError> {
    let dim = spec
        .dimension()
        .filter(|&d| d <= cap)
        .ok_or(CoreError::BudgetExceeded { dim: usize::MAX, cap })?;
    if dim > cap {
        return Err(CoreError::BudgetExceeded { dim, cap });
    }
    let target = (0..dim)
        .map(|rho| {
            let c = BitConfig::from_index(rho as u128, spec).expect("in range");
            rule(&c, spec).index() as usize
        })
        .collect();
    Ok(SignedPermutation::new(target, vec![1; dim]))
}

/// Build the step evolution operator for the requested factorization:
/// `S_{tau,rho} = 1` iff `tau` is the automaton image of `rho`.
pub fn build_step_operator(spec: &LatticeSpec, which: Factor) -> Result<StepOperator, CoreError> {
    build_step_operator_capped(spec, which, DEFAULT_DIM_CAP)
}

pub fn build_step_operator_capped(
    spec: &LatticeSpec,
    which: Factor,
    cap: usize,
) -> Result<StepOperator, CoreError> {
    let rule = match which {
        Factor::Full => automaton_step,
        Factor::Free => free_step,
        Factor::Int | Factor::Site => interaction_step,
    };
    let perm = permutation_from_rule(spec, cap, rule)?;
    Ok(StepOperator { factor: which, form: StepForm::Permutation(perm) })
}

/// One-site translation `x -> x + 1 (mod M_x)` as a permutation operator.
pub fn build_translation(spec: &LatticeSpec) -> Result<StepOperator, CoreError> {
    let perm = permutation_from_rule(spec, DEFAULT_DIM_CAP, |c, _| c.translated(1))?;
    Ok(StepOperator { factor: Factor::Full, form: StepForm::Permutation(perm) })
}

/// Max-norm of `S T - T S`; exactly zero for the automaton.
pub fn translation_commutator(spec: &LatticeSpec) -> Result<f64, CoreError> {
    let s = build_step_operator(spec, Factor::Full)?;
    let t = build_translation(spec)?;
    let st = s.compose(&t, Factor::Full);
    let ts = t.compose(&s, Factor::Full);
    let (a, b) = (st.permutation()?, ts.permutation()?);
    let mut max = 0.0f64;
    for rho in 0..a.dim() {
        if a.target(rho) == b.target(rho) {
            let diff = (a.sign(rho) - b.sign(rho)).abs() as f64;
            max = max.max(diff);
        } else {
            max = max.max(1.0);
        }
    }
    Ok(max)
}

/// Check that a permutation commutes with every charge class (block structure).
pub fn charges_commute(spec: &LatticeSpec, op: &StepOperator) -> Result<bool, CoreError> {
    let p = op.permutation()?;
    for rho in 0..p.dim() {
        let c = BitConfig::from_index(rho as u128, spec)?;
        let t = BitConfig::from_index(p.target(rho) as u128, spec)?;
        for kind in ChargeKind::ALL {
            if c.charge(kind) != t.charge(kind) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
