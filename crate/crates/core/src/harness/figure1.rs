use super::config::{EpochRule, Experiment, ExperimentConfig, ObjectiveSpec};
use super::sweep::SweepResult;
use crate::batching::Strategy;
use crate::error::Result;
use crate::optimizers::OptimizerKind;

pub const FIGURE1_SIGMA_SQ: [f64; 5] = [2.5, 1.5, 0.05, 0.15, 0.1];

/// Friction for the variable-variance experiment. The component curvatures
/// `N / sigma_i^2` span 2 to 100.
pub const FIGURE1_GAMMA: f64 = 5.0;

/// Eight points per decade over `[3e-6, 3e-4]`: small enough that the
/// deterministic `O(h^2)` offset dominates the `O(h^{5/2})` fluctuation.
pub fn figure1_h_grid() -> Vec<f64> {
    let mut g: Vec<f64> = (0..=16).map(|j| 3e-4 * 10f64.powf(-j as f64 / 8.0)).collect();
    g.reverse();
    g
}

/// Constant vector with the same harmonic mean, so `F` keeps its curvature.
pub fn figure1_control_sigma_sq() -> Vec<f64> {
    let mean_inv = FIGURE1_SIGMA_SQ.iter().map(|s| 1.0 / s).sum::<f64>() / FIGURE1_SIGMA_SQ.len() as f64;
    vec![1.0 / mean_inv; FIGURE1_SIGMA_SQ.len()]
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure1Options {
    pub sigma_sq: Vec<f64>,
    pub strategy: Strategy,
    pub gamma: f64,
    pub h_grid: Vec<f64>,
    pub realizations: usize,
    pub seed: u64,
}

impl Default for Figure1Options {
    fn default() -> Self {
        Self {
            sigma_sq: FIGURE1_SIGMA_SQ.to_vec(),
            strategy: Strategy::SymmetricMinibatch,
            gamma: FIGURE1_GAMMA,
            h_grid: figure1_h_grid(),
            realizations: 100,
            seed: 0,
        }
    }
}

/// Observations `1..=5`, one observation per batch, explicit-Euler momentum.
pub fn figure1_config(opts: &Figure1Options) -> ExperimentConfig {
    let y = (1..=opts.sigma_sq.len()).map(|i| i as f64).collect();
    let mut c = ExperimentConfig::new(
        ObjectiveSpec::Gaussian {
            y,
            sigma_sq: opts.sigma_sq.clone(),
        },
        OptimizerKind::EulerMomentum { gamma: opts.gamma },
        opts.strategy,
        1,
    );
    c.h_grid = opts.h_grid.clone();
    c.realizations = opts.realizations;
    c.seed = opts.seed;
    c.epochs = EpochRule::Formula;
    c
}

pub fn figure1_experiment() -> Result<SweepResult> {
    Experiment::prepare(figure1_config(&Figure1Options::default()))?.bias_sweep()
}
