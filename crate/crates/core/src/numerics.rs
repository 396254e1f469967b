//! Dense eigendecomposition helpers and a Chebyshev propagator.
//!
//! Unitary matrices are diagonalized through their commuting Hermitian and
//! anti-Hermitian parts: diagonalize `(U + U^H)/2`, then rediagonalize the
//! other part inside each degenerate cluster. Matrix logarithms take
//! eigenphases in the principal branch `(-pi, pi]`, with `-pi` deterministically
//! folded to `+pi`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::CoreError;
use crate::sparse::SparseMatrix;
use crate::wavefunction::StateVector;

/// Fold a phase into `(-pi, pi]`, mapping the branch point to `+pi`.
pub fn principal_phase(z: Complex64) -> f64 {
    let theta = z.im.atan2(z.re);
    if theta <= -std::f64::consts::PI + 1e-12 {
        std::f64::consts::PI
    } else {
        theta
    }
}

/// Largest entry magnitude of a dense matrix.
pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn frobenius(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn hermiticity_defect(m: &DMatrix<Complex64>) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn unitarity_defect(m: &DMatrix<Complex64>) -> f64 {
    let id = DMatrix::identity(m.nrows(), m.ncols());
    max_abs(&(m.adjoint() * m - id))
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = nalgebra::SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(m.nrows(), m.ncols());
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// `f(H)` for Hermitian `H` through its spectral decomposition.
pub fn hermitian_function(
    m: &DMatrix<Complex64>,
    f: impl Fn(f64) -> Complex64,
) -> DMatrix<Complex64> {
    let (values, vectors) = hermitian_eigen(m);
    let diag = DVector::from_iterator(values.len(), values.iter().map(|&v| f(v)));
    &vectors * DMatrix::from_diagonal(&diag) * vectors.adjoint()
}

/// `exp(-i t H)` for Hermitian `H`.
pub fn hermitian_evolution(m: &DMatrix<Complex64>, t: f64) -> DMatrix<Complex64> {
    hermitian_function(m, |v| Complex64::from_polar(1.0, -t * v))
}

/// Spectral data of a unitary matrix.
pub struct UnitaryEigen {
    pub phases: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
}

impl UnitaryEigen {
    /// Rebuild the unitary from its spectral data.
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let diag = DVector::from_iterator(
            self.phases.len(),
            self.phases.iter().map(|&p| Complex64::from_polar(1.0, p)),
        );
        &self.vectors * DMatrix::from_diagonal(&diag) * self.vectors.adjoint()
    }
}

/// Diagonalize a unitary matrix. Fails if the input is not unitary or if no
/// clustering tolerance yields a faithful reconstruction.
pub fn unitary_eigen(u: &DMatrix<Complex64>) -> Result<UnitaryEigen, CoreError> {
    let defect = unitarity_defect(u);
    if defect > 1e-8 {
        return Err(CoreError::NonUnitary(defect));
    }
    let re_part = (u + u.adjoint()) * Complex64::new(0.5, 0.0);
    let im_part = (u - u.adjoint()) * Complex64::new(0.0, -0.5);

    for cluster_tol in [1e-8, 1e-6, 1e-4] {
        let (values, mut vectors) = hermitian_eigen(&re_part);
        // rotate inside each near-degenerate block of the real part so the
        // imaginary part is diagonal there too
        let mut start = 0;
        while start < values.len() {
            let mut end = start + 1;
            while end < values.len() && values[end] - values[end - 1] < cluster_tol {
                end += 1;
            }
            if end - start > 1 {
                let block = vectors.columns(start, end - start).into_owned();
                let sub = block.adjoint() * &im_part * &block;
                let (_, w) = hermitian_eigen(&sub);
                let rotated = block * w;
                for (offset, col) in (start..end).enumerate() {
                    vectors.set_column(col, &rotated.column(offset));
                }
            }
            start = end;
        }
        let phases: Vec<f64> = (0..values.len())
            .map(|j| {
                let v = vectors.column(j);
                let uv = u * v;
                principal_phase(v.dotc(&uv))
            })
            .collect();
        let result = UnitaryEigen { phases, vectors };
        if max_abs(&(result.reconstruct() - u)) < 1e-9 {
            return Ok(result);
        }
    }
    Err(CoreError::NonUnitary(defect))
}

/// Principal matrix logarithm of a unitary, divided by `-i`:
/// returns Hermitian `H` with `U = exp(i H)` and eigenvalues in `(-pi, pi]`.
pub fn unitary_log(u: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>, CoreError> {
    let eig = unitary_eigen(u)?;
    let diag = DVector::from_iterator(
        eig.phases.len(),
        eig.phases.iter().map(|&p| Complex64::new(p, 0.0)),
    );
    Ok(&eig.vectors * DMatrix::from_diagonal(&diag) * eig.vectors.adjoint())
}

/// Bessel functions `J_0(a) ... J_{k_max}(a)` for `a >= 0` by downward
/// recurrence with final normalization.
pub fn bessel_j_sequence(a: f64, k_max: usize) -> Vec<f64> {
    assert!(a >= 0.0);
    if a < 1e-280 {
        let mut out = vec![0.0; k_max + 1];
        out[0] = 1.0;
        return out;
    }
    let start = k_max + 16 + (1.5 * a) as usize + (10.0 * (a + 1.0).cbrt()) as usize;
    let mut j = vec![0.0f64; start + 2];
    j[start + 1] = 0.0;
    j[start] = 1e-280;
    for k in (1..=start).rev() {
        j[k - 1] = (2.0 * k as f64 / a) * j[k] - j[k + 1];
        if j[k - 1].abs() > 1e250 {
            for v in j[k - 1..].iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    let mut norm = j[0];
    let mut m = 2;
    while m <= start {
        norm += 2.0 * j[m];
        m += 2;
    }
    j.truncate(k_max + 1);
    for v in &mut j {
        *v /= norm;
    }
    j
}

/// `exp(-i t H) v` for Hermitian sparse `H` by Chebyshev expansion.
///
/// `H` is rescaled by its row-sum bound so the polynomial argument stays in
/// `[-1, 1]`; the coefficient tail is kept until it falls below 1e-16.
pub fn expm_multiply(h: &SparseMatrix, v: &StateVector, t: f64) -> StateVector {
    let dim = h.ncols();
    assert_eq!(dim, v.len());
    let scale = h.row_sum_bound();
    if scale == 0.0 || t == 0.0 {
        return v.clone();
    }
    let a = t * scale;
    let (a_abs, phase) = if a >= 0.0 {
        (a, Complex64::new(0.0, -1.0))
    } else {
        (-a, Complex64::new(0.0, 1.0))
    };
    let k_budget = (a_abs + 12.0 * (a_abs + 1.0).cbrt() + 40.0) as usize;
    let coeff = bessel_j_sequence(a_abs, k_budget);
    let k_max = (1..=k_budget)
        .rev()
        .find(|&k| coeff[k].abs() > 1e-17)
        .unwrap_or(1);

    let inv = Complex64::new(1.0 / scale, 0.0);
    let mul = |w: &[Complex64]| -> Vec<Complex64> {
        h.matvec(w).into_iter().map(|z| z * inv).collect()
    };

    let mut w_prev: Vec<Complex64> = v.as_slice().to_vec();
    let mut w_curr = mul(&w_prev);
    let mut result: Vec<Complex64> =
        w_prev.iter().map(|z| z * Complex64::new(coeff[0], 0.0)).collect();
    let mut phase_k = phase;
    for (r, w) in result.iter_mut().zip(&w_curr) {
        *r += 2.0 * coeff[1] * phase_k * w;
    }
    for k in 2..=k_max {
        phase_k *= phase;
        let mut w_next = mul(&w_curr);
        for (n, p) in w_next.iter_mut().zip(&w_prev) {
            *n = 2.0 * *n - p;
        }
        let c = 2.0 * coeff[k];
        for (r, w) in result.iter_mut().zip(&w_next) {
            *r += c * phase_k * w;
        }
        w_prev = w_curr;
        w_curr = w_next;
    }
    StateVector::new(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn principal_phase_branch() {
        assert_eq!(principal_phase(c(-1.0, 0.0)), std::f64::consts::PI);
        assert_eq!(principal_phase(c(-1.0, -1e-20)), std::f64::consts::PI);
        assert!((principal_phase(c(0.0, 1.0)) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((principal_phase(c(0.0, -1.0)) + std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn hermitian_eigen_sorted() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(-1.0, 0.0)]);
        let (values, vectors) = hermitian_eigen(&m);
        assert!(values[0] <= values[1]);
        let recon = &vectors
            * DMatrix::from_diagonal(&DVector::from_iterator(
                2,
                values.iter().map(|&v| c(v, 0.0)),
            ))
            * vectors.adjoint();
        assert!(max_abs(&(recon - m)) < 1e-12);
    }

    #[test]
    fn unitary_eigen_handles_permutations_and_degeneracy() {
        // 4x4 permutation with two 2-cycles: eigenvalues +1, +1, -1, -1
        let mut u = DMatrix::zeros(4, 4);
        u[(1, 0)] = c(1.0, 0.0);
        u[(0, 1)] = c(1.0, 0.0);
        u[(3, 2)] = c(1.0, 0.0);
        u[(2, 3)] = c(1.0, 0.0);
        let eig = unitary_eigen(&u).unwrap();
        let mut phases = eig.phases.clone();
        phases.sort_by(f64::total_cmp);
        assert!(phases[0].abs() < 1e-10);
        assert!(phases[1].abs() < 1e-10);
        assert!((phases[2] - std::f64::consts::PI).abs() < 1e-10);
        assert!((phases[3] - std::f64::consts::PI).abs() < 1e-10);
        assert!(max_abs(&(eig.reconstruct() - &u)) < 1e-10);
    }

    #[test]
    fn unitary_log_roundtrip() {
        // random-ish small unitary built from a Hermitian generator
        let h = DMatrix::from_row_slice(
            3,
            3,
            &[
                c(0.3, 0.0), c(0.1, 0.2), c(0.0, -0.4),
                c(0.1, -0.2), c(-0.5, 0.0), c(0.2, 0.0),
                c(0.0, 0.4), c(0.2, 0.0), c(1.1, 0.0),
            ],
        );
        let u = hermitian_evolution(&h, 1.0);
        let logu = unitary_log(&u).unwrap();
        let rebuilt = hermitian_function(&logu, |p| Complex64::from_polar(1.0, p));
        assert!(max_abs(&(rebuilt - &u)) < 1e-11);
        // generator recovered up to sign convention: exp(i logu) = u = exp(-i h)
        assert!(max_abs(&(logu + h)) < 1e-10);
    }

    #[test]
    fn non_unitary_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(unitary_eigen(&m).is_err());
    }

    #[test]
    fn bessel_matches_reference_values() {
        // J_0(1) and J_1(1) to 15 digits (Abramowitz & Stegun)
        let j = bessel_j_sequence(1.0, 4);
        assert!((j[0] - 0.765_197_686_557_966_6).abs() < 1e-14);
        assert!((j[1] - 0.440_050_585_744_933_5).abs() < 1e-14);
        let j = bessel_j_sequence(10.0, 12);
        assert!((j[0] + 0.245_935_764_451_348_3).abs() < 1e-13);
    }

    #[test]
    fn chebyshev_propagator_matches_dense() {
        // Hermitian 6x6 with a few off-diagonal couplings
        let triplets = vec![
            (0, 1, c(0.5, 0.2)),
            (1, 0, c(0.5, -0.2)),
            (2, 3, c(-0.3, 0.0)),
            (3, 2, c(-0.3, 0.0)),
            (4, 4, c(0.9, 0.0)),
            (5, 0, c(0.0, 0.7)),
            (0, 5, c(0.0, -0.7)),
        ];
        let h = SparseMatrix::from_triplets(6, 6, triplets);
        let mut v0 = vec![Complex64::default(); 6];
        v0[0] = c(0.6, 0.0);
        v0[3] = c(0.0, 0.8);
        let v = StateVector::new(v0);
        for t in [0.3, 2.0, -7.5] {
            let fast = expm_multiply(&h, &v, t);
            let dense = hermitian_evolution(&h.to_dense(), t);
            let x = nalgebra::DVector::from_column_slice(v.as_slice());
            let exact = StateVector::new((dense * x).data.into());
            assert!(fast.distance(&exact) < 1e-12, "t = {t}");
        }
    }
}
