//! Real wave functions over configuration space and complex state vectors.
//!
//! The automaton's probabilistic state is carried by a real unit vector `q`
//! with `p_tau = q_tau^2`; continuous-time evolution produces complex vectors,
//! kept as a separate type.

use num_complex::Complex64;

use crate::automaton::Ensemble;
use crate::error::CoreError;
use crate::lattice::LatticeSpec;
use crate::tol::WAVEFUNCTION_NORM;

/// Real unit vector of dimension `2^(4 M_x)`, stamped with a time in units
/// of the step size.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    pub spec: LatticeSpec,
    q: Vec<f64>,
    pub time: i64,
}

impl WaveFunction {
    pub fn new(spec: LatticeSpec, q: Vec<f64>, time: i64) -> Result<WaveFunction, CoreError> {
        let dim = spec.dimension().ok_or(CoreError::BudgetExceeded {
            dim: usize::MAX,
            cap: usize::MAX,
        })?;
        if q.len() != dim {
            return Err(CoreError::DimensionMismatch { left: q.len(), right: dim });
        }
        let norm: f64 = q.iter().map(|v| v * v).sum();
        if (norm - 1.0).abs() > WAVEFUNCTION_NORM {
            return Err(CoreError::NotNormalized(norm));
        }
        Ok(WaveFunction { spec, q, time })
    }

    pub(crate) fn from_components_unchecked(
        spec: LatticeSpec,
        q: Vec<f64>,
        time: i64,
    ) -> WaveFunction {
        WaveFunction { spec, q, time }
    }

    /// `q_tau = +sqrt(p_tau)` (nonnegative branch).
    pub fn from_ensemble(e: &Ensemble) -> WaveFunction {
        let dim = e.spec.dimension().expect("wave functions need 4*M_x < usize bits");
        let mut q = vec![0.0; dim];
        for (tau, p) in e.iter() {
            q[tau as usize] = p.sqrt();
        }
        WaveFunction { spec: e.spec, q, time: 0 }
    }

    /// Delta wave function concentrated on one configuration.
    pub fn delta(spec: LatticeSpec, tau: usize) -> WaveFunction {
        let dim = spec.dimension().expect("in range");
        let mut q = vec![0.0; dim];
        q[tau] = 1.0;
        WaveFunction { spec, q, time: 0 }
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn amplitude(&self, tau: usize) -> f64 {
        self.q[tau]
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.q
    }

    pub fn norm_sq(&self) -> f64 {
        self.q.iter().map(|v| v * v).sum()
    }

    /// `p_tau = q_tau^2` as a dense vector.
    pub fn probabilities(&self) -> Vec<f64> {
        self.q.iter().map(|v| v * v).collect()
    }

    /// Recover the sparse ensemble (nonzero probabilities only).
    pub fn to_ensemble(&self) -> Result<Ensemble, CoreError> {
        let entries = self
            .q
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(|(tau, &v)| (tau as u128, v * v))
            .collect();
        Ensemble::new(self.spec, entries)
    }

    pub fn to_state_vector(&self) -> StateVector {
        StateVector::new(self.q.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }
}

/// Complex state vector used by continuous-time evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    v: Vec<Complex64>,
}

impl StateVector {
    pub fn new(v: Vec<Complex64>) -> StateVector {
        StateVector { v }
    }

    pub fn zeros(dim: usize) -> StateVector {
        StateVector { v: vec![Complex64::default(); dim] }
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    pub fn amplitude(&self, i: usize) -> Complex64 {
        self.v[i]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.v
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.v
    }

    pub fn norm(&self) -> f64 {
        self.v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.v.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn distance(&self, other: &StateVector) -> f64 {
        assert_eq!(self.len(), other.len());
        self.v
            .iter()
            .zip(&other.v)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Distance after removing a global phase (aligns the phases first).
    pub fn distance_up_to_phase(&self, other: &StateVector) -> f64 {
        let overlap: Complex64 =
            self.v.iter().zip(&other.v).map(|(a, b)| a.conj() * b).sum();
        if overlap.norm() == 0.0 {
            return self.distance(other);
        }
        let phase = overlap / overlap.norm();
        let rotated: Vec<Complex64> = other.v.iter().map(|z| z * phase.conj()).collect();
        self.distance(&StateVector::new(rotated))
    }

    pub fn scale(&mut self, factor: Complex64) {
        for z in &mut self.v {
            *z *= factor;
        }
    }

    pub fn normalized(mut self) -> StateVector {
        let n = self.norm();
        if n > 0.0 {
            self.scale(Complex64::new(1.0 / n, 0.0));
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{automaton_step, ensemble_step};
    use crate::lattice::BitConfig;
    use crate::step_operator::{build_step_operator, Factor};

    #[test]
    fn point_mass_gives_delta() {
        let spec = LatticeSpec::new(1).unwrap();
        let c = BitConfig::from_index(9, &spec).unwrap();
        let e = Ensemble::point_mass(spec, &c);
        let q = WaveFunction::from_ensemble(&e);
        for tau in 0..16 {
            let expected = if tau == 9 { 1.0 } else { 0.0 };
            assert_eq!(q.amplitude(tau), expected);
        }
    }

    #[test]
    fn two_point_ensemble_has_equal_amplitudes() {
        let spec = LatticeSpec::new(1).unwrap();
        let e = Ensemble::new(spec, vec![(3, 0.5), (12, 0.5)]).unwrap();
        let q = WaveFunction::from_ensemble(&e);
        assert!((q.amplitude(3) - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((q.amplitude(12) - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((q.norm_sq() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn probabilities_roundtrip_ensemble() {
        let spec = LatticeSpec::new(2).unwrap();
        let e = Ensemble::new(spec, vec![(9, 0.25), (130, 0.75)]).unwrap();
        let back = WaveFunction::from_ensemble(&e).to_ensemble().unwrap();
        for (tau, p) in e.iter() {
            assert!((back.probability(tau) - p).abs() < 1e-15);
        }
    }

    #[test]
    fn delta_steps_like_the_automaton() {
        let spec = LatticeSpec::new(2).unwrap();
        let s = build_step_operator(&spec, Factor::Full).unwrap();
        let c = BitConfig::from_index(0b1001_0010, &spec).unwrap();
        let q = WaveFunction::delta(spec, c.index() as usize);
        let stepped = s.apply(&q).unwrap();
        let image = automaton_step(&c, &spec).index() as usize;
        assert_eq!(stepped.amplitude(image), 1.0);
        assert_eq!(stepped.time, 1);
    }

    #[test]
    fn evolution_square_commutes() {
        let spec = LatticeSpec::new(2).unwrap();
        let s = build_step_operator(&spec, Factor::Full).unwrap();
        let e = Ensemble::new(spec, vec![(7, 0.1), (9, 0.4), (200, 0.5)]).unwrap();
        let mut q = WaveFunction::from_ensemble(&e);
        let mut e_now = e;
        for _ in 0..25 {
            q = s.apply(&q).unwrap();
            e_now = ensemble_step(&e_now);
        }
        let p = q.probabilities();
        for (tau, prob) in p.iter().enumerate() {
            assert!((prob - e_now.probability(tau as u128)).abs() < 1e-12);
        }
    }

    #[test]
    fn repeated_application_preserves_norm() {
        let spec = LatticeSpec::new(1).unwrap();
        let s = build_step_operator(&spec, Factor::Full).unwrap();
        let e = Ensemble::new(spec, vec![(9, 0.5), (5, 0.25), (15, 0.25)]).unwrap();
        let mut q = WaveFunction::from_ensemble(&e);
        for _ in 0..1000 {
            q = s.apply(&q).unwrap();
        }
        assert!((q.norm_sq() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn norm_validation() {
        let spec = LatticeSpec::new(1).unwrap();
        assert!(WaveFunction::new(spec, vec![0.5; 16], 0).is_err());
        let mut q = vec![0.0; 16];
        q[3] = 1.0;
        assert!(WaveFunction::new(spec, q, 0).is_ok());
    }

    #[test]
    fn phase_alignment_distance() {
        let a = StateVector::new(vec![Complex64::new(1.0, 0.0), Complex64::default()]);
        let mut b = a.clone();
        b.scale(Complex64::from_polar(1.0, 0.7));
        assert!(a.distance(&b) > 0.1);
        assert!(a.distance_up_to_phase(&b) < 1e-15);
    }
}
