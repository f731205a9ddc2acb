use crate::batching::{RaggedWeighting, ScheduleState, Strategy};
use crate::error::{Error, Result};
use crate::objectives::Objective;
use crate::optimizers::{phi_a, OptimizerKind, OptimizerState, Stepper, StepsizeSchedule};
use crate::rng::RngStream;

/// Everything a single realization needs besides the objective.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub optimizer: OptimizerKind,
    pub strategy: Strategy,
    pub batch_size: usize,
    pub weighting: RaggedWeighting,
    pub schedule: StepsizeSchedule,
    pub epochs: u64,
    pub conjugate_strang: bool,
}

/// Stream `grid_index * 2^32 + realization` of `seed`.
pub fn realization_stream(seed: u64, grid_index: usize, realization: usize) -> RngStream {
    RngStream::new(seed, ((grid_index as u64) << 32) | realization as u64)
}

/// Runs `settings.epochs` epochs from `start` with zero momentum.
pub fn simulate_realization<O: Objective + ?Sized>(
    obj: &O,
    start: &[f64],
    settings: &RunSettings,
    stream: RngStream,
) -> Result<OptimizerState> {
    simulate_with_observer(obj, start, settings, stream, |_, _| {})
}

/// As [`simulate_realization`], calling `observe(epoch, state)` before the
/// first epoch and after every epoch.
pub(crate) fn simulate_with_observer<O, F>(
    obj: &O,
    start: &[f64],
    settings: &RunSettings,
    mut rng: RngStream,
    mut observe: F,
) -> Result<OptimizerState>
where
    O: Objective + ?Sized,
    F: FnMut(u64, &OptimizerState),
{
    if start.len() != obj.dim() {
        return Err(Error::Config(format!(
            "start point has dimension {}, objective has {}",
            start.len(),
            obj.dim()
        )));
    }
    let mut batches = ScheduleState::new(settings.strategy, obj.len(), settings.batch_size)?
        .with_weighting(settings.weighting);
    let per_epoch = batches.batches_per_epoch();
    let mut stepper = Stepper::new(settings.optimizer, obj.dim());
    let mut state = OptimizerState::at_rest(start.to_vec());
    let conjugate = settings.conjugate_strang && matches!(settings.optimizer, OptimizerKind::Strang { .. });
    if conjugate {
        phi_a(&mut state, 0.5 * settings.schedule.stepsize_at(0));
    }
    observe(0, &state);
    let mut h = settings.schedule.stepsize_at(0);
    for epoch in 1..=settings.epochs {
        for _ in 0..per_epoch {
            h = settings.schedule.stepsize_at(state.k);
            let batch = batches.next_batch(&mut rng);
            let scale = batch.weight / batch.indices.len() as f64;
            stepper.step(&mut state, h, |x, g| {
                g.fill(0.0);
                obj.add_batch_gradient(batch.indices, x, scale, g);
            });
        }
        if !state.is_finite() {
            return Err(Error::Divergence { h, iteration: state.k });
        }
        observe(epoch, &state);
    }
    if conjugate {
        phi_a(&mut state, -0.5 * h);
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{CountingObjective, GaussianMeanObjective};

    fn settings(optimizer: OptimizerKind, strategy: Strategy, h: f64, epochs: u64) -> RunSettings {
        RunSettings {
            optimizer,
            strategy,
            batch_size: 2,
            weighting: RaggedWeighting::Proportional,
            schedule: StepsizeSchedule::Constant { h },
            epochs,
            conjugate_strang: false,
        }
    }

    #[test]
    fn noiseless_problem_stays_at_minimizer() {
        let obj = GaussianMeanObjective::constant_variance(vec![1.5, 1.5, 1.5, 1.5], 2.0).unwrap();
        for opt in [OptimizerKind::Sgd, OptimizerKind::HeavyBall { gamma: 1.0 }, OptimizerKind::Strang { gamma: 1.0 }] {
            let s = simulate_realization(&obj, &[1.5], &settings(opt, Strategy::RobbinsMonro, 0.1, 10), RngStream::new(0, 0))
                .unwrap();
            assert!((s.x[0] - 1.5).abs() < 1e-15);
        }
    }

    #[test]
    fn deterministic_per_stream() {
        let obj = GaussianMeanObjective::unit_curvature(vec![0.3, -1.0, 2.0, 0.1, 0.7, -0.4]).unwrap();
        let st = settings(OptimizerKind::Nesterov { gamma: 0.5 }, Strategy::SymmetricMinibatch, 0.05, 20);
        let a = simulate_realization(&obj, &[0.0], &st, realization_stream(4, 1, 2)).unwrap();
        let b = simulate_realization(&obj, &[0.0], &st, realization_stream(4, 1, 2)).unwrap();
        let c = simulate_realization(&obj, &[0.0], &st, realization_stream(4, 1, 3)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn divergence_is_reported() {
        let obj = GaussianMeanObjective::unit_curvature(vec![0.3, -1.0, 2.0, 0.1]).unwrap();
        let err = simulate_realization(&obj, &[0.0], &settings(OptimizerKind::Sgd, Strategy::RandomReshuffling, 3.0, 2000), RngStream::new(0, 0))
            .unwrap_err();
        assert!(matches!(err, Error::Divergence { h, .. } if h == 3.0));
    }

    #[test]
    fn one_gradient_per_iteration() {
        let obj = CountingObjective::new(GaussianMeanObjective::unit_curvature(vec![0.0; 8]).unwrap());
        let st = settings(OptimizerKind::Strang { gamma: 1.0 }, Strategy::RandomReshuffling, 0.1, 3);
        simulate_realization(&obj, &[1.0], &st, RngStream::new(0, 0)).unwrap();
        assert_eq!(obj.evaluations(), 3 * 8);
    }
}
