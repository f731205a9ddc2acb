//! Stochastic-gradient and momentum splitting integrators with random,
//! reshuffled and symmetric minibatching, closed-form stepsize-bias
//! predictions, and a Monte-Carlo experiment harness.

pub mod analytic;
pub mod batching;
pub mod dataset;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod objectives;
pub mod optimizers;
pub mod rng;

pub use batching::{Batch, RaggedWeighting, ScheduleState, Strategy};
pub use dataset::Dataset;
pub use error::{Error, Result};
pub use objectives::{GaussianMeanObjective, LogRegObjective, Objective};
pub use optimizers::{OptimizerKind, OptimizerState, StepsizeSchedule};
pub use rng::RngStream;
