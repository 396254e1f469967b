//! Minimal complex sparse matrices (CSR) for operator algebra at desk scale.

use nalgebra::DMatrix;
use num_complex::Complex64;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Compressed sparse row matrix over complex doubles.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<Complex64>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> SparseMatrix {
        SparseMatrix {
            nrows,
            ncols,
            row_ptr: vec![0; nrows + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(dim: usize) -> SparseMatrix {
        let triplets: Vec<_> =
            (0..dim).map(|i| (i, i, Complex64::new(1.0, 0.0))).collect();
        SparseMatrix::from_triplets(dim, dim, triplets)
    }

    /// Build from (row, col, value) entries; duplicates are summed, entries
    /// below 1e-300 in magnitude are dropped.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        mut triplets: Vec<(usize, usize, Complex64)>,
    ) -> SparseMatrix {
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; nrows + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<Complex64> = Vec::with_capacity(triplets.len());
        let mut rows = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            debug_assert!(r < nrows && c < ncols);
            if let (Some(&last_r), Some(&last_c)) = (rows.last(), col_idx.last()) {
                if last_r == r && last_c == c {
                    *values.last_mut().unwrap() += v;
                    continue;
                }
            }
            rows.push(r);
            col_idx.push(c);
            values.push(v);
        }
        // drop merged-to-zero entries
        let mut keep_cols = Vec::with_capacity(col_idx.len());
        let mut keep_vals = Vec::with_capacity(values.len());
        for i in 0..values.len() {
            if values[i].norm() > 1e-300 {
                row_ptr[rows[i] + 1] += 1;
                keep_cols.push(col_idx[i]);
                keep_vals.push(values[i]);
            }
        }
        for r in 0..nrows {
            row_ptr[r + 1] += row_ptr[r];
        }
        SparseMatrix { nrows, ncols, row_ptr, col_idx: keep_cols, values: keep_vals }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn triplets(&self) -> Vec<(usize, usize, Complex64)> {
        let mut out = Vec::with_capacity(self.nnz());
        for r in 0..self.nrows {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                out.push((r, self.col_idx[k], self.values[k]));
            }
        }
        out
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        for k in self.row_ptr[row]..self.row_ptr[row + 1] {
            if self.col_idx[k] == col {
                return self.values[k];
            }
        }
        Complex64::default()
    }

    pub fn scale(&self, factor: Complex64) -> SparseMatrix {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= factor;
        }
        out
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut triplets = self.triplets();
        triplets.extend(other.triplets());
        SparseMatrix::from_triplets(self.nrows, self.ncols, triplets)
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> SparseMatrix {
        let triplets = self
            .triplets()
            .into_iter()
            .map(|(r, c, v)| (c, r, v.conj()))
            .collect();
        SparseMatrix::from_triplets(self.ncols, self.nrows, triplets)
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.nrows);
        let mut triplets = Vec::new();
        let mut scratch: Vec<Complex64> = vec![Complex64::default(); other.ncols];
        let mut touched: Vec<usize> = Vec::new();
        for r in 0..self.nrows {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let mid = self.col_idx[k];
                let left = self.values[k];
                for j in other.row_ptr[mid]..other.row_ptr[mid + 1] {
                    let c = other.col_idx[j];
                    if scratch[c] == Complex64::default() {
                        touched.push(c);
                    }
                    scratch[c] += left * other.values[j];
                }
            }
            for &c in &touched {
                if scratch[c].norm() > 1e-300 {
                    triplets.push((r, c, scratch[c]));
                }
                scratch[c] = Complex64::default();
            }
            touched.clear();
        }
        SparseMatrix::from_triplets(self.nrows, other.ncols, triplets)
    }

    /// `{A, B} = AB + BA`.
    pub fn anticommutator(&self, other: &SparseMatrix) -> SparseMatrix {
        self.matmul(other).add(&other.matmul(self))
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &SparseMatrix) -> SparseMatrix {
        self.matmul(other).sub(&other.matmul(self))
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.ncols);
        #[cfg(feature = "parallel")]
        {
            if self.nrows >= 2048 {
                return self.matvec_par(v);
            }
        }
        self.matvec_seq(v)
    }

    pub fn matvec_seq(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); self.nrows];
        for r in 0..self.nrows {
            let mut acc = Complex64::default();
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[k] * v[self.col_idx[k]];
            }
            out[r] = acc;
        }
        out
    }

    #[cfg(feature = "parallel")]
    pub fn matvec_par(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.nrows)
            .into_par_iter()
            .map(|r| {
                let mut acc = Complex64::default();
                for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                    acc += self.values[k] * v[self.col_idx[k]];
                }
                acc
            })
            .collect()
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.triplets() {
            m[(r, c)] += v;
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Row-sum bound on the spectral norm (Gershgorin-style).
    pub fn row_sum_bound(&self) -> f64 {
        (0..self.nrows)
            .map(|r| {
                (self.row_ptr[r]..self.row_ptr[r + 1])
                    .map(|k| self.values[k].norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// Largest entry magnitude of `self - other`.
    pub fn max_diff(&self, other: &SparseMatrix) -> f64 {
        self.sub(other).max_abs()
    }

    /// Export as `row col re im` lines (sorted, exact formatting).
    pub fn to_triplet_text(&self) -> String {
        let mut out = String::new();
        for (r, c, v) in self.triplets() {
            out.push_str(&format!("{} {} {:.17e} {:.17e}\n", r, c, v.re, v.im));
        }
        out
    }
}
