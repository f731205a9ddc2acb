//! Finite-sum objectives `F = (1/N) sum_i f_i`.

mod gaussian;
mod logistic;

use std::sync::atomic::{AtomicU64, Ordering};

pub use gaussian::GaussianMeanObjective;
pub use logistic::{logreg_constants, sigmoid, softplus, LogRegConstants, LogRegObjective};

use crate::batching::{Batch, ScheduleState, Strategy};
use crate::error::{Error, Result};
use crate::linalg::norm_sq;
use crate::rng::RngStream;

pub trait Objective: Sync {
    /// Number of components `N`.
    fn len(&self) -> usize;

    fn dim(&self) -> usize;

    fn component_value(&self, i: usize, x: &[f64]) -> f64;

    /// `out += scale * grad f_i(x)`
    fn add_component_gradient(&self, i: usize, x: &[f64], scale: f64, out: &mut [f64]);

    /// `out += scale * sum_{i in indices} grad f_i(x)`
    fn add_batch_gradient(&self, indices: &[usize], x: &[f64], scale: f64, out: &mut [f64]) {
        for &i in indices {
            self.add_component_gradient(i, x, scale, out);
        }
    }

    /// Lipschitz constant of `grad F`.
    fn smoothness(&self) -> f64;

    /// Strong convexity modulus of `F` (a lower bound is acceptable).
    fn strong_convexity(&self) -> f64;

    fn value(&self, x: &[f64]) -> f64 {
        let n = self.len();
        (0..n).map(|i| self.component_value(i, x)).sum::<f64>() / n as f64
    }

    fn component_gradient(&self, i: usize, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.dim()];
        self.add_component_gradient(i, x, 1.0, &mut g);
        g
    }

    fn full_gradient_into(&self, x: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        let n = self.len();
        let all: Vec<usize> = (0..n).collect();
        self.add_batch_gradient(&all, x, 1.0 / n as f64, out);
    }

    fn full_gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.dim()];
        self.full_gradient_into(x, &mut g);
        g
    }
}

impl<T: Objective + ?Sized> Objective for &T {
    fn len(&self) -> usize {
        (**self).len()
    }
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn component_value(&self, i: usize, x: &[f64]) -> f64 {
        (**self).component_value(i, x)
    }
    fn add_component_gradient(&self, i: usize, x: &[f64], scale: f64, out: &mut [f64]) {
        (**self).add_component_gradient(i, x, scale, out)
    }
    fn add_batch_gradient(&self, indices: &[usize], x: &[f64], scale: f64, out: &mut [f64]) {
        (**self).add_batch_gradient(indices, x, scale, out)
    }
    fn smoothness(&self) -> f64 {
        (**self).smoothness()
    }
    fn strong_convexity(&self) -> f64 {
        (**self).strong_convexity()
    }
}

/// Writes the weighted minibatch gradient
/// `weight * (1/|B|) sum_{j in B} grad f_j(x)` into `out`.
///
/// For a full batch this is the usual `(1/n) sum_j grad f_j`; for the short
/// final batch of a ragged epoch with proportional weighting it is
/// `(1/n) sum_j grad f_j` over the `n_R < n` entries.
pub fn stochastic_gradient_into<O: Objective + ?Sized>(
    obj: &O,
    batch: &Batch<'_>,
    x: &[f64],
    out: &mut [f64],
) -> Result<()> {
    if batch.indices.is_empty() {
        return Err(Error::EmptyBatch);
    }
    out.fill(0.0);
    obj.add_batch_gradient(batch.indices, x, batch.weight / batch.indices.len() as f64, out);
    Ok(())
}

pub fn stochastic_gradient<O: Objective + ?Sized>(obj: &O, batch: &Batch<'_>, x: &[f64]) -> Result<Vec<f64>> {
    let mut g = vec![0.0; obj.dim()];
    stochastic_gradient_into(obj, batch, x, &mut g)?;
    Ok(g)
}

/// Monte-Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

/// Estimates `sigma_*^2 = E ||grad f_omega(x_star)||^2` over `reps` fresh
/// Robbins-Monro batches of size `batch_size`.
pub fn sigma_star_sq<O: Objective + ?Sized>(
    obj: &O,
    x_star: &[f64],
    batch_size: usize,
    reps: usize,
    rng: &mut RngStream,
) -> Result<Estimate> {
    if reps == 0 {
        return Err(Error::Config("sigma_star_sq needs reps >= 1".into()));
    }
    let mut schedule = ScheduleState::new(Strategy::RobbinsMonro, obj.len(), batch_size)?;
    let mut g = vec![0.0; obj.dim()];
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..reps {
        let batch = schedule.next_batch(rng);
        stochastic_gradient_into(obj, &batch, x_star, &mut g)?;
        let s = norm_sq(&g);
        sum += s;
        sum_sq += s * s;
    }
    let n = reps as f64;
    let mean = sum / n;
    let var = if reps > 1 {
        ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(Estimate {
        mean,
        stderr: (var / n).sqrt(),
    })
}

/// Wraps an objective and counts component-gradient evaluations.
#[derive(Debug)]
pub struct CountingObjective<O> {
    inner: O,
    evaluations: AtomicU64,
}

impl<O: Objective> CountingObjective<O> {
    pub fn new(inner: O) -> Self {
        Self {
            inner,
            evaluations: AtomicU64::new(0),
        }
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.evaluations.store(0, Ordering::Relaxed);
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }
}

impl<O: Objective> Objective for CountingObjective<O> {
    fn len(&self) -> usize {
        self.inner.len()
    }
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn component_value(&self, i: usize, x: &[f64]) -> f64 {
        self.inner.component_value(i, x)
    }
    fn add_component_gradient(&self, i: usize, x: &[f64], scale: f64, out: &mut [f64]) {
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        self.inner.add_component_gradient(i, x, scale, out)
    }
    fn add_batch_gradient(&self, indices: &[usize], x: &[f64], scale: f64, out: &mut [f64]) {
        self.evaluations.fetch_add(indices.len() as u64, Ordering::Relaxed);
        self.inner.add_batch_gradient(indices, x, scale, out)
    }
    fn smoothness(&self) -> f64 {
        self.inner.smoothness()
    }
    fn strong_convexity(&self) -> f64 {
        self.inner.strong_convexity()
    }
}
