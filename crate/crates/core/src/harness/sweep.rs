use std::time::Instant;

use rayon::prelude::*;

use super::config::Experiment;
use super::fit::{fit_order, OrderFit};
use super::run::{realization_stream, simulate_realization, RunSettings};
use crate::error::{Error, Result};
use crate::linalg::{dist_sq, pairwise_sum};
use crate::objectives::Objective;
use crate::optimizers::{OptimizerState, StepsizeSchedule};
use crate::rng::RngStream;

/// `2 ceil(max(5/h, 500) / 2)`, always even.
pub fn epochs_for(h: f64) -> u64 {
    let base = (5.0 / h).max(500.0);
    2 * (base / 2.0).ceil() as u64
}

/// Eight points per decade from `h_max = 1/(2 r sqrt(l))` down to
/// `h_max / 256`, ascending.
pub fn default_h_grid(r: usize, l: f64) -> Vec<f64> {
    let h_max = 1.0 / (2.0 * r as f64 * l.sqrt());
    let last = (8.0 * 256f64.log10()).floor() as i32;
    let mut grid: Vec<f64> = (0..=last).map(|j| h_max * 10f64.powf(-j as f64 / 8.0)).collect();
    grid.reverse();
    grid
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub h: f64,
    /// `+inf` when the row diverged.
    pub rmse: f64,
    pub stderr: f64,
    pub epochs: u64,
    pub wallclock_s: f64,
    pub diverged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Sorted by `h` ascending.
    pub rows: Vec<SweepRow>,
    /// `None` when fewer than three rows are usable.
    pub fit: Option<OrderFit>,
    pub metadata: Vec<(String, String)>,
}

impl SweepResult {
    pub fn slope(&self) -> Option<f64> {
        self.fit.map(|f| f.slope)
    }

    pub fn any_diverged(&self) -> bool {
        self.rows.iter().any(|r| r.diverged)
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub(crate) fn from_rows(mut rows: Vec<SweepRow>, mut metadata: Vec<(String, String)>) -> Self {
        rows.sort_by(|a, b| a.h.total_cmp(&b.h));
        let points: Vec<(f64, f64)> = rows.iter().filter(|r| !r.diverged).map(|r| (r.h, r.rmse)).collect();
        let fit = fit_order(&points).ok();
        match fit {
            Some(f) => {
                metadata.push(("slope".into(), format!("{:?}", f.slope)));
                metadata.push(("intercept".into(), format!("{:?}", f.intercept)));
            }
            None => metadata.push(("slope".into(), "undefined".into())),
        }
        Self { rows, fit, metadata }
    }
}

/// Root mean square and its delta-method standard error from squared errors.
pub(crate) fn rmse_with_stderr(squared: &[f64]) -> (f64, f64) {
    let n = squared.len() as f64;
    let mse = pairwise_sum(squared) / n;
    let dev: Vec<f64> = squared.iter().map(|s| (s - mse) * (s - mse)).collect();
    let var = if squared.len() > 1 { pairwise_sum(&dev) / (n - 1.0) } else { 0.0 };
    let rmse = mse.sqrt();
    let stderr = if rmse > 0.0 { (var / n).sqrt() / (2.0 * rmse) } else { 0.0 };
    (rmse, stderr)
}

impl Experiment {
    pub(crate) fn run_settings(&self, schedule: StepsizeSchedule, epochs: u64) -> RunSettings {
        let c = self.config();
        RunSettings {
            optimizer: c.optimizer,
            strategy: c.strategy,
            batch_size: c.batch_size,
            weighting: c.weighting,
            schedule,
            epochs,
            conjugate_strang: c.conjugate_strang,
        }
    }

    /// One constant-stepsize run of `epochs_for(h)` epochs.
    pub fn run_realization(&self, h: f64, stream: RngStream) -> Result<OptimizerState> {
        let settings = self.run_settings(StepsizeSchedule::Constant { h }, self.epochs_for(h));
        simulate_realization(self.problem(), &self.start_point(), &settings, stream)
    }

    fn sweep_row(&self, grid_index: usize, h: f64) -> Result<SweepRow> {
        let started = Instant::now();
        let epochs = self.epochs_for(h);
        let settings = self.run_settings(StepsizeSchedule::Constant { h }, epochs);
        let start = self.start_point();
        let seed = self.config().seed;
        let x_star = self.x_star();
        let outcome: Result<Vec<f64>> = (0..self.config().realizations)
            .into_par_iter()
            .map(|r| {
                let state = simulate_realization(self.problem(), &start, &settings, realization_stream(seed, grid_index, r))?;
                Ok(dist_sq(&state.x, x_star))
            })
            .collect();
        let wallclock_s = started.elapsed().as_secs_f64();
        match outcome {
            Ok(squared) => {
                let (rmse, stderr) = rmse_with_stderr(&squared);
                Ok(SweepRow { h, rmse, stderr, epochs, wallclock_s, diverged: false })
            }
            Err(Error::Divergence { .. }) => Ok(SweepRow {
                h,
                rmse: f64::INFINITY,
                stderr: f64::NAN,
                epochs,
                wallclock_s,
                diverged: true,
            }),
            Err(e) => Err(e),
        }
    }

    /// Error of the final iterate over the stepsize grid, with a log-log fit.
    pub fn bias_sweep(&self) -> Result<SweepResult> {
        let grid = self.h_grid();
        let rows = grid
            .iter()
            .enumerate()
            .map(|(i, &h)| self.sweep_row(i, h))
            .collect::<Result<Vec<_>>>()?;
        let mut meta = self.metadata();
        meta.push((
            "h_grid".into(),
            grid.iter().map(|h| format!("{h:?}")).collect::<Vec<_>>().join(" "),
        ));
        meta.push(("x_star".into(), format!("{:?}", self.x_star())));
        meta.push(("dim".into(), self.problem().dim().to_string()));
        Ok(SweepResult::from_rows(rows, meta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epoch_formula() {
        assert_eq!(epochs_for(0.1), 500);
        assert_eq!(epochs_for(0.01), 500);
        assert_eq!(epochs_for(0.003), 1668);
        assert_eq!(epochs_for(1e-3), 5000);
        for h in [0.0017, 0.0041, 1e-4] {
            assert_eq!(epochs_for(h) % 2, 0);
            assert!(epochs_for(h) as f64 >= 5.0 / h);
        }
    }

    #[test]
    fn default_grid_shape() {
        let g = default_h_grid(8, 1.0);
        assert_eq!(g.len(), 20);
        assert!((g[19] - 1.0 / 16.0).abs() < 1e-15);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(g[0] >= g[19] / 256.0);
    }

    #[test]
    fn rmse_and_stderr() {
        let (r, se) = rmse_with_stderr(&[1.0, 1.0, 1.0]);
        assert_eq!((r, se), (1.0, 0.0));
        let (r, se) = rmse_with_stderr(&[0.0, 4.0]);
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
        // sd of {0, 4} is 2*sqrt(2); se(mse) = 2; delta method 2 / (2 sqrt 2)
        assert!((se - 1.0 / 2f64.sqrt()).abs() < 1e-15);
    }
}
