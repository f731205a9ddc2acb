//! Shared fixtures for the benchmarks.

use sgsplit::dataset::generate_simdata;
use sgsplit::harness::{Experiment, ExperimentConfig, ObjectiveSpec};
use sgsplit::{LogRegObjective, OptimizerKind, RngStream, Strategy};

/// The desk-scale logistic problem: 1024 points in 10 dimensions.
pub fn simdata_objective() -> LogRegObjective {
    let ds = generate_simdata(1024, 10, &mut RngStream::new(0, 0)).expect("valid sizes");
    LogRegObjective::with_default_ridge(ds).expect("non-empty data")
}

/// A two-point sweep on the 16-observation Gaussian problem.
pub fn small_sweep(optimizer: OptimizerKind, strategy: Strategy) -> Experiment {
    let y: Vec<f64> = (0..16).map(|i| ((i * 7) % 16) as f64 / 4.0 - 2.0).collect();
    let mut c = ExperimentConfig::new(
        ObjectiveSpec::Gaussian {
            sigma_sq: vec![16.0; 16],
            y,
        },
        optimizer,
        strategy,
        2,
    );
    c.realizations = 8;
    c.h_grid = vec![0.02, 0.04];
    Experiment::prepare(c).expect("valid configuration")
}
