//! Hermitian generators extracted from step operators, and continuous-time
//! evolution.
//!
//! For a unique-jump operator the extraction is exact: each cycle of the
//! permutation diagonalizes in its Fourier modes, so `H = (i/eps) log S` comes
//! out with exact eigenphases. Dense unitaries go through the
//! eigendecomposition in `numerics`. Eigenphases live in `(-pi, pi]`; a phase
//! at the branch point is retained as `+pi` and reported.

use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::CoreError;
use crate::lattice::{LatticeSpec, Mover, Species};
use crate::numerics::{
    hermitian_eigen, hermiticity_defect, max_abs, principal_phase, unitary_eigen,
};
use crate::step_operator::{SignedPermutation, StepForm, StepOperator};
use crate::tol::{BRANCH_CUT_WINDOW, HERMITICITY};
use crate::wavefunction::{StateVector, WaveFunction};

/// Dense Hermitian generator with cached spectral data.
///
/// The stored phases are `eps * h_k` (dimensionless eigenphases); the matrix
/// is `H` itself.
#[derive(Debug)]
pub struct Hamiltonian {
    pub epsilon: f64,
    matrix: DMatrix<Complex64>,
    spectral: OnceLock<(Vec<f64>, DMatrix<Complex64>)>,
    /// Eigenmodes whose phase sits at the branch point `+pi`.
    pub branch_modes: Vec<usize>,
}

impl Clone for Hamiltonian {
    fn clone(&self) -> Self {
        let spectral = OnceLock::new();
        if let Some(data) = self.spectral.get() {
            let _ = spectral.set(data.clone());
        }
        Hamiltonian {
            epsilon: self.epsilon,
            matrix: self.matrix.clone(),
            spectral,
            branch_modes: self.branch_modes.clone(),
        }
    }
}

impl Hamiltonian {
    /// Wrap an explicitly Hermitian matrix.
    pub fn from_matrix(matrix: DMatrix<Complex64>, epsilon: f64) -> Result<Hamiltonian, CoreError> {
        let defect = hermiticity_defect(&matrix);
        if defect > HERMITICITY {
            return Err(CoreError::NonUnitary(defect));
        }
        Ok(Hamiltonian {
            epsilon,
            matrix,
            spectral: OnceLock::new(),
            branch_modes: Vec::new(),
        })
    }

    /// `H = (i/eps) log S` for a signed permutation, via its cycles.
    pub fn from_permutation(p: &SignedPermutation, epsilon: f64) -> Hamiltonian {
        let dim = p.dim();
        let mut phases = vec![0.0f64; dim];
        let mut vectors: DMatrix<Complex64> = DMatrix::zeros(dim, dim);
        let mut mode = 0;
        for cycle in p.cycles() {
            let len = cycle.members.len();
            // gauge away the per-edge signs: the closing weight is the sign product
            let mut gauge = vec![1.0f64; len];
            for j in 1..len {
                gauge[j] = gauge[j - 1] * p.sign(cycle.members[j - 1]) as f64;
            }
            let offset = if cycle.sign_product == 1 { 0.0 } else { 1.0 };
            let norm = 1.0 / (len as f64).sqrt();
            for k in 0..len {
                // eigenvalue of S on this cycle: exp(i theta), theta = (2k + offset) pi / len
                let mut theta = (2.0 * k as f64 + offset) * PI / len as f64;
                if theta > PI + 1e-15 {
                    theta -= 2.0 * PI;
                }
                // S = exp(-i eps H) => eps h = -theta, folded so -pi -> +pi
                let eps_h = if theta >= PI - 1e-15 { PI } else { -theta };
                phases[mode] = eps_h;
                for (j, &member) in cycle.members.iter().enumerate() {
                    let amp = Complex64::from_polar(norm, -theta * j as f64);
                    vectors[(member, mode)] = amp * gauge[j];
                }
                mode += 1;
            }
        }
        let branch_modes = branch_report(&phases);
        let matrix = assemble_from_phases(&phases, &vectors, epsilon);
        let spectral = OnceLock::new();
        let _ = spectral.set((phases, vectors));
        Hamiltonian { epsilon, matrix, spectral, branch_modes }
    }

    /// `H = (i/eps) log U` for a dense unitary.
    pub fn from_unitary(u: &DMatrix<Complex64>, epsilon: f64) -> Result<Hamiltonian, CoreError> {
        let eig = unitary_eigen(u)?;
        // U = exp(i theta) on each mode; eps h = -theta folded to (-pi, pi]
        let phases: Vec<f64> = eig
            .phases
            .iter()
            .map(|&theta| if theta >= PI - 1e-15 { PI } else { -theta })
            .collect();
        let branch_modes = branch_report(&phases);
        let matrix = assemble_from_phases(&phases, &eig.vectors, epsilon);
        let spectral = OnceLock::new();
        let _ = spectral.set((phases, eig.vectors));
        Ok(Hamiltonian { epsilon, matrix, spectral, branch_modes })
    }

    pub fn from_step(op: &StepOperator, epsilon: f64) -> Result<Hamiltonian, CoreError> {
        match &op.form {
            StepForm::Permutation(p) => Ok(Hamiltonian::from_permutation(p, epsilon)),
            StepForm::Dense(m) => Hamiltonian::from_unitary(m, epsilon),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.matrix)
    }

    /// Dimensionless eigenphases `eps * h_k` and eigenvectors.
    pub fn spectral(&self) -> &(Vec<f64>, DMatrix<Complex64>) {
        self.spectral.get_or_init(|| {
            let (values, vectors) = hermitian_eigen(&self.matrix);
            let phases = values.iter().map(|&v| v * self.epsilon).collect();
            (phases, vectors)
        })
    }

    /// `exp(-i t H)` as a dense matrix.
    pub fn evolution_operator(&self, t: f64) -> DMatrix<Complex64> {
        let (phases, vectors) = self.spectral();
        let diag = DVector::from_iterator(
            phases.len(),
            phases.iter().map(|&p| Complex64::from_polar(1.0, -t * p / self.epsilon)),
        );
        vectors * DMatrix::from_diagonal(&diag) * vectors.adjoint()
    }

    /// `exp(-i t H) v` through the spectral decomposition.
    pub fn evolve_state(&self, v: &StateVector, t: f64) -> Result<StateVector, CoreError> {
        if v.len() != self.dim() {
            return Err(CoreError::DimensionMismatch { left: v.len(), right: self.dim() });
        }
        let (phases, vectors) = self.spectral();
        let x = DVector::from_column_slice(v.as_slice());
        let mut coeffs = vectors.adjoint() * x;
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c *= Complex64::from_polar(1.0, -t * phases[k] / self.epsilon);
        }
        let out = vectors * coeffs;
        Ok(StateVector::new(out.data.into()))
    }

    /// Solve the continuous evolution from a real wave function.
    pub fn evolve(&self, q: &WaveFunction, t: f64) -> Result<StateVector, CoreError> {
        self.evolve_state(&q.to_state_vector(), t)
    }

    /// Max-norm of `exp(-i eps H) - S`.
    pub fn exp_roundtrip_defect(&self, op: &StepOperator) -> f64 {
        max_abs(&(self.evolution_operator(self.epsilon) - op.to_dense()))
    }

    pub fn add(&self, other: &Hamiltonian) -> Result<Hamiltonian, CoreError> {
        if self.dim() != other.dim() {
            return Err(CoreError::DimensionMismatch { left: self.dim(), right: other.dim() });
        }
        Hamiltonian::from_matrix(&self.matrix + &other.matrix, self.epsilon)
    }
}

fn assemble_from_phases(
    phases: &[f64],
    vectors: &DMatrix<Complex64>,
    epsilon: f64,
) -> DMatrix<Complex64> {
    let diag = DVector::from_iterator(
        phases.len(),
        phases.iter().map(|&p| Complex64::new(p / epsilon, 0.0)),
    );
    let m = vectors * DMatrix::from_diagonal(&diag) * vectors.adjoint();
    // the spectral synthesis is Hermitian up to rounding; symmetrize it away
    let sym = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    sym
}

fn branch_report(phases: &[f64]) -> Vec<usize> {
    phases
        .iter()
        .enumerate()
        .filter(|(_, &p)| (p - PI).abs() < BRANCH_CUT_WINDOW)
        .map(|(k, _)| k)
        .collect()
}

/// Splitting defect: `(i/(lambda eps)) log(exp(-i lambda eps H_int) exp(-i lambda eps H_free))
///  - H_free - H_int`, principal branch.
pub fn delta_h(
    h_int: &Hamiltonian,
    h_free: &Hamiltonian,
    lambda: f64,
) -> Result<Hamiltonian, CoreError> {
    if h_int.dim() != h_free.dim() {
        return Err(CoreError::DimensionMismatch { left: h_int.dim(), right: h_free.dim() });
    }
    let eps = h_free.epsilon;
    let step = lambda * eps;
    let u = h_int.evolution_operator(step) * h_free.evolution_operator(step);
    let h_eff = Hamiltonian::from_unitary(&u, step)?;
    let delta = h_eff.matrix() - h_free.matrix() - h_int.matrix();
    let mut out = Hamiltonian::from_matrix(delta, eps)?;
    out.branch_modes = h_eff.branch_modes.clone();
    Ok(out)
}

/// Exact one-particle eigenphases of the transport operator for one species:
/// `-2 pi k / M_x` for right movers, `+2 pi k / M_x` for left movers,
/// folded into the principal branch.
pub fn free_spectrum(spec: &LatticeSpec, species: Species) -> Vec<f64> {
    let m = spec.m_x as f64;
    (0..spec.m_x)
        .map(|k| {
            let raw = 2.0 * PI * k as f64 / m;
            let signed = match species.mover {
                Mover::Right => -raw,
                Mover::Left => raw,
            };
            principal_phase(Complex64::from_polar(1.0, signed))
        })
        .collect()
}

/// One-particle block of the transport step for one species: the cyclic
/// shift permutation on `M_x` positions.
pub fn one_particle_shift(spec: &LatticeSpec, species: Species) -> SignedPermutation {
    let m = spec.m_x;
    SignedPermutation::from_map(m, |x| match species.mover {
        Mover::Right => (x + 1) % m,
        Mover::Left => (x + m - 1) % m,
    })
}
