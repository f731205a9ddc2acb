//! Experiment driver: minimizers, Monte-Carlo bias sweeps, decreasing-stepsize
//! runs, order fits, model-problem simulation and CSV output.

mod config;
mod csv_out;
mod figure1;
mod fit;
mod minimizer;
mod model_problem;
mod run;
mod schedule_run;
mod sweep;

pub use config::{
    DataSource, EpochRule, Experiment, ExperimentConfig, ObjectiveSpec, Problem, StartPoint,
    SIMDATA_STREAM,
};
pub use csv_out::{read_sweep_csv, write_csv, write_trajectory_csv};
pub use figure1::{
    figure1_config, figure1_control_sigma_sq, figure1_experiment, figure1_h_grid, Figure1Options,
    FIGURE1_GAMMA, FIGURE1_SIGMA_SQ,
};
pub use fit::{fit_order, OrderFit};
pub use minimizer::{compute_minimizer, Minimizer};
pub use model_problem::ModelProblem;
pub use run::{realization_stream, simulate_realization, RunSettings};
pub use schedule_run::ScheduleTrajectory;
pub use sweep::{default_h_grid, epochs_for, SweepResult, SweepRow};
