use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::run::realization_stream;
use crate::analytic::{Dynamics, Flow2x2};
use crate::batching::{ScheduleState, Strategy};
use crate::error::{Error, Result};
use crate::linalg::pairwise_sum;
use crate::objectives::{Estimate, GaussianMeanObjective, Objective};
use crate::optimizers::{OptimizerKind, OptimizerState, Stepper};
use crate::rng::RngStream;

/// Scalar model problem in rescaled units: unit curvature, `N = R n`
/// observations standardised so that one batch mean has variance 1 and the
/// minimizer is 0.
#[derive(Debug, Clone)]
pub struct ModelProblem {
    objective: GaussianMeanObjective,
    batch_size: usize,
    batches: usize,
}

impl ModelProblem {
    pub fn standardized(batches: usize, batch_size: usize, seed: u64) -> Result<Self> {
        if batches < 2 || batch_size == 0 {
            return Err(Error::Config(format!(
                "model problem needs >= 2 batches of size >= 1 (got {batches} x {batch_size})"
            )));
        }
        let n = batches * batch_size;
        let mut rng = RngStream::new(seed, u64::MAX - 1);
        let mut y: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let mean = pairwise_sum(&y) / n as f64;
        y.iter_mut().for_each(|v| *v -= mean);
        let v = Self::batch_mean_variance_of(&y, batch_size);
        let scale = v.sqrt().recip();
        y.iter_mut().for_each(|t| *t *= scale);
        Self::from_observations(y, batch_size)
    }

    pub fn from_observations(y: Vec<f64>, batch_size: usize) -> Result<Self> {
        if batch_size == 0 || y.len() % batch_size != 0 || y.len() / batch_size < 2 {
            return Err(Error::Config(format!(
                "{} observations do not split into >= 2 batches of {batch_size}",
                y.len()
            )));
        }
        let batches = y.len() / batch_size;
        Ok(Self {
            objective: GaussianMeanObjective::unit_curvature(y)?,
            batch_size,
            batches,
        })
    }

    fn batch_mean_variance_of(y: &[f64], n: usize) -> f64 {
        let total = y.len() as f64;
        let mean = pairwise_sum(y) / total;
        let dev: Vec<f64> = y.iter().map(|v| (v - mean) * (v - mean)).collect();
        let pop_var = pairwise_sum(&dev) / total;
        pop_var / n as f64 * (total - n as f64) / (total - 1.0)
    }

    /// Variance of the mean of `n` observations drawn without replacement.
    pub fn batch_mean_variance(&self) -> f64 {
        Self::batch_mean_variance_of(self.objective.observations(), self.batch_size)
    }

    pub fn batches_per_epoch(&self) -> usize {
        self.batches
    }

    pub fn objective(&self) -> &GaussianMeanObjective {
        &self.objective
    }

    pub fn minimizer(&self) -> f64 {
        self.objective.minimizer()
    }

    /// Iterations before sampling: at least `8 / (rate h)` where `rate` is the
    /// slowest decay rate of the noiseless dynamics, rounded up to whole
    /// sampling periods.
    pub fn burn_in(&self, dynamics: Dynamics, strategy: Strategy, h: f64, gamma: f64) -> u64 {
        let rate = match dynamics {
            Dynamics::FirstOrder => 1.0,
            Dynamics::Momentum if gamma < 2.0 => 0.5 * gamma,
            Dynamics::Momentum => 0.5 * gamma - (0.25 * gamma * gamma - 1.0).sqrt(),
        };
        let period = (self.batches * strategy.epochs_per_period()) as u64;
        let raw = (8.0 / (rate * h)).ceil() as u64;
        raw.div_ceil(period) * period
    }

    /// Monte-Carlo estimate of the stationary `E (x - X*)^2` sampled at a
    /// period boundary, starting every realization at `X*` at rest.
    /// First-order dynamics run the library's SGD step; momentum dynamics
    /// apply the exact damped flow driven by the batch mean.
    pub fn simulate(
        &self,
        dynamics: Dynamics,
        strategy: Strategy,
        h: f64,
        gamma: f64,
        realizations: usize,
        seed: u64,
    ) -> Result<Estimate> {
        if realizations < 2 {
            return Err(Error::Config("need at least two realizations".into()));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Domain(format!("stepsize {h} must be positive")));
        }
        let flow = match dynamics {
            Dynamics::FirstOrder => None,
            Dynamics::Momentum => Some(Flow2x2::new(gamma)?),
        };
        let steps = self.burn_in(dynamics, strategy, h, gamma);
        let x_star = self.minimizer();
        let squared: Vec<f64> = (0..realizations)
            .into_par_iter()
            .map(|r| {
                let mut rng = realization_stream(seed, 0, r);
                let mut batches = ScheduleState::new(strategy, self.objective.len(), self.batch_size)?;
                let x = match &flow {
                    None => self.run_first_order(&mut batches, &mut rng, h, steps, x_star),
                    Some(f) => self.run_exact_flow(&mut batches, &mut rng, f, h, steps, x_star),
                };
                if !x.is_finite() {
                    return Err(Error::Divergence { h, iteration: steps });
                }
                Ok((x - x_star) * (x - x_star))
            })
            .collect::<Result<_>>()?;
        let n = squared.len() as f64;
        let mean = pairwise_sum(&squared) / n;
        let dev: Vec<f64> = squared.iter().map(|s| (s - mean) * (s - mean)).collect();
        let var = pairwise_sum(&dev) / (n - 1.0);
        Ok(Estimate {
            mean,
            stderr: (var / n).sqrt(),
        })
    }

    fn run_first_order(&self, batches: &mut ScheduleState, rng: &mut RngStream, h: f64, steps: u64, x0: f64) -> f64 {
        let mut stepper = Stepper::new(OptimizerKind::Sgd, 1);
        let mut state = OptimizerState::at_rest(vec![x0]);
        for _ in 0..steps {
            let batch = batches.next_batch(rng);
            let scale = batch.weight / batch.indices.len() as f64;
            stepper.step(&mut state, h, |x, g| {
                g[0] = 0.0;
                self.objective.add_batch_gradient(batch.indices, x, scale, g);
            });
        }
        state.x[0]
    }

    fn run_exact_flow(
        &self,
        batches: &mut ScheduleState,
        rng: &mut RngStream,
        flow: &Flow2x2,
        h: f64,
        steps: u64,
        x0: f64,
    ) -> f64 {
        let e = flow.at(h);
        let d = flow.minus_identity(h);
        let y = self.objective.observations();
        let (mut x, mut v) = (x0, 0.0);
        for _ in 0..steps {
            let batch = batches.next_batch(rng);
            let y_hat = batch.indices.iter().map(|&i| y[i]).sum::<f64>() / batch.indices.len() as f64;
            // z <- e^{hA} z + (I - e^{hA}) (y_hat, 0)
            let nx = e[0][0] * x + e[0][1] * v - d[0][0] * y_hat;
            let nv = e[1][0] * x + e[1][1] * v - d[1][0] * y_hat;
            x = nx;
            v = nv;
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::sgd_rm_mse;

    #[test]
    fn standardised_population() {
        let m = ModelProblem::standardized(8, 2, 3).unwrap();
        assert!((m.batch_mean_variance() - 1.0).abs() < 1e-12);
        assert!(m.minimizer().abs() < 1e-14);
        assert_eq!(m.batches_per_epoch(), 8);
    }

    #[test]
    fn burn_in_is_whole_periods() {
        let m = ModelProblem::standardized(4, 2, 0).unwrap();
        let k = m.burn_in(Dynamics::Momentum, Strategy::SymmetricMinibatch, 0.02, 1.0);
        assert_eq!(k % 8, 0);
        assert!(k as f64 >= 8.0 / (0.5 * 0.02));
    }

    #[test]
    fn sgd_rm_agrees_with_closed_form() {
        let m = ModelProblem::standardized(8, 2, 1).unwrap();
        let est = m.simulate(Dynamics::FirstOrder, Strategy::RobbinsMonro, 0.05, 0.0, 20_000, 9).unwrap();
        let want = sgd_rm_mse(0.05, 1.0).unwrap();
        assert!((est.mean - want).abs() <= 4.0 * est.stderr, "{est:?} vs {want}");
    }
}
