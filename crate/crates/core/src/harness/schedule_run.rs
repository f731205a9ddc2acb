use rayon::prelude::*;

use super::config::{EpochRule, Experiment};
use super::run::{realization_stream, simulate_with_observer};
use super::sweep::rmse_with_stderr;
use crate::error::{Error, Result};
use crate::linalg::dist_sq;
use crate::optimizers::StepsizeSchedule;

pub const DEFAULT_SCHEDULE_EPOCHS: u64 = 200;

/// RMSE over realizations at every epoch boundary, epoch 0 included.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleTrajectory {
    pub epochs: Vec<u64>,
    pub rmse: Vec<f64>,
    pub stderr: Vec<f64>,
    /// Stepsize used by the first iteration after each boundary.
    pub stepsize: Vec<f64>,
    pub metadata: Vec<(String, String)>,
}

impl ScheduleTrajectory {
    pub fn final_rmse(&self) -> f64 {
        *self.rmse.last().expect("trajectory has at least the initial point")
    }
}

impl Experiment {
    /// The configured schedule, or the warm-up/decay schedule with `l = L`
    /// for SGD and `l = sqrt(L)` for momentum methods (whose effective
    /// gradient step is `h^2`) and `delta = 1/3`.
    pub fn effective_schedule(&self) -> StepsizeSchedule {
        use crate::objectives::Objective;
        self.config().schedule.unwrap_or_else(|| {
            let l = self.problem().smoothness();
            StepsizeSchedule::WarmupDecay {
                l: if self.config().optimizer.has_momentum() { l.sqrt() } else { l },
                delta: 1.0 / 3.0,
                r: self.batches_per_epoch(),
            }
        })
    }

    pub fn schedule_epochs(&self) -> u64 {
        match self.config().epochs {
            EpochRule::Fixed(e) => e,
            EpochRule::Formula => DEFAULT_SCHEDULE_EPOCHS,
        }
    }

    pub fn schedule_run(&self) -> Result<ScheduleTrajectory> {
        let schedule = self.effective_schedule();
        schedule.validate()?;
        let epochs = self.schedule_epochs();
        if self.config().strategy == crate::batching::Strategy::SymmetricMinibatch && epochs % 2 == 1 {
            return Err(Error::Config(format!(
                "symmetric minibatching needs an even epoch count, got {epochs}"
            )));
        }
        let settings = self.run_settings(schedule, epochs);
        let start = self.start_point();
        let x_star = self.x_star();
        let seed = self.config().seed;
        let per_realization: Vec<Vec<f64>> = (0..self.config().realizations)
            .into_par_iter()
            .map(|r| {
                let mut errors = Vec::with_capacity(epochs as usize + 1);
                simulate_with_observer(self.problem(), &start, &settings, realization_stream(seed, 0, r), |_, s| {
                    errors.push(dist_sq(&s.x, x_star))
                })?;
                Ok(errors)
            })
            .collect::<Result<_>>()?;
        let per_epoch = self.batches_per_epoch() as u64;
        let mut traj = ScheduleTrajectory {
            epochs: Vec::new(),
            rmse: Vec::new(),
            stderr: Vec::new(),
            stepsize: Vec::new(),
            metadata: self.metadata(),
        };
        traj.metadata.push(("schedule".into(), format!("{schedule:?}")));
        let mut column = vec![0.0; per_realization.len()];
        for e in 0..=epochs {
            for (c, errs) in column.iter_mut().zip(&per_realization) {
                *c = errs[e as usize];
            }
            let (rmse, se) = rmse_with_stderr(&column);
            traj.epochs.push(e);
            traj.rmse.push(rmse);
            traj.stderr.push(se);
            traj.stepsize.push(schedule.stepsize_at(e * per_epoch));
        }
        Ok(traj)
    }
}
