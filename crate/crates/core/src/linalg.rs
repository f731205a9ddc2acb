//! Dense helpers on `f64` slices plus the Gram-matrix spectral norm.

use crate::error::{Error, Result};

pub const POWER_ITERATION_CAP: usize = 100_000;
pub const POWER_ITERATION_TOL: f64 = 1e-10;

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    norm_sq(a).sqrt()
}

/// `y += alpha * x`
#[inline]
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Pairwise (cascade) summation. The result depends only on the order of
/// `values`, never on how they were produced.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        values.iter().sum()
    } else {
        let mid = values.len() / 2;
        pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
    }
}

/// Row-major `N x d` matrix of features.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_row_major(rows, cols, vec![0.0; rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// `Y^T Y`, a `cols x cols` symmetric matrix.
    pub fn gram(&self) -> Matrix {
        let d = self.cols;
        let mut g = vec![0.0; d * d];
        for i in 0..self.rows {
            let r = self.row(i);
            for a in 0..d {
                let ra = r[a];
                if ra == 0.0 {
                    continue;
                }
                for b in a..d {
                    g[a * d + b] += ra * r[b];
                }
            }
        }
        for a in 0..d {
            for b in 0..a {
                g[a * d + b] = g[b * d + a];
            }
        }
        Matrix::from_row_major(d, d, g)
    }

    pub fn mul_vec(&self, v: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = dot(self.row(i), v);
        }
    }
}

/// Largest eigenvalue of `Y^T Y` by power iteration on the `d x d` Gram matrix.
///
/// Starts from the normalised all-ones vector and stops once the eigen-residual
/// `||G v - rho v||` drops below `tol * rho`; for symmetric `G` this bounds the
/// distance from the Rayleigh quotient `rho` to an eigenvalue.
pub fn spectral_norm_gram(features: &Matrix, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("power iteration tolerance {tol} must be positive")));
    }
    let gram = features.gram();
    let d = gram.rows();
    let mut v = vec![1.0 / (d as f64).sqrt(); d];
    let mut w = vec![0.0; d];
    let mut estimate = 0.0;
    for _ in 0..POWER_ITERATION_CAP {
        gram.mul_vec(&v, &mut w);
        let rayleigh = dot(&v, &w);
        let wn = norm(&w);
        if wn == 0.0 {
            return Ok(0.0);
        }
        let residual = v
            .iter()
            .zip(&w)
            .map(|(vi, wi)| (wi - rayleigh * vi).powi(2))
            .sum::<f64>()
            .sqrt();
        estimate = rayleigh;
        if residual <= tol * rayleigh.abs() {
            return Ok(rayleigh);
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / wn;
        }
    }
    Err(Error::PowerIteration {
        iterations: POWER_ITERATION_CAP,
        estimate,
    })
}
