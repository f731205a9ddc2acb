use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: line {line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}: file contains no data rows")]
    EmptyDataset(PathBuf),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cannot sample {requested} distinct indices from {available}")]
    Size { requested: usize, available: usize },

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("friction gamma = {0} is too close to critical damping (gamma = 2)")]
    DegenerateDamping(f64),

    #[error("iteration matrix is not contractive (spectral radius {0})")]
    NonContractive(f64),

    #[error("power iteration did not converge after {iterations} iterations (last estimate {estimate})")]
    PowerIteration { iterations: usize, estimate: f64 },

    #[error("minimiser search stopped after {iterations} iterations with gradient norm {grad_norm:e}")]
    Minimizer { iterations: usize, grad_norm: f64 },

    #[error("non-finite iterate at h = {h:e}, iteration {iteration}")]
    Divergence { h: f64, iteration: u64 },

    #[error("stochastic gradient requested for an empty batch")]
    EmptyBatch,

    #[error("order fit needs at least 3 points with positive values: {0}")]
    Fit(String),
}
