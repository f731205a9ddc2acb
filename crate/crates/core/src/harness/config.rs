use std::path::PathBuf;
use std::sync::Arc;

use super::minimizer::compute_minimizer;
use super::sweep::{default_h_grid, epochs_for};
use crate::batching::{RaggedWeighting, Strategy};
use crate::dataset::{generate_simdata, load_dataset_csv};
use crate::error::{Error, Result};
use crate::objectives::{GaussianMeanObjective, LogRegObjective, Objective};
use crate::optimizers::{OptimizerKind, StepsizeSchedule};
use crate::rng::RngStream;

/// Stream id reserved for synthetic data generation, far from the
/// realization streams.
pub const SIMDATA_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Csv(PathBuf),
    SimData { n: usize, d: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum ObjectiveSpec {
    /// Ridge logistic regression; `lambda: None` selects `L / sqrt(N)`.
    Logistic { source: DataSource, lambda: Option<f64> },
    Gaussian { y: Vec<f64>, sigma_sq: Vec<f64> },
}

impl ObjectiveSpec {
    pub fn simdata(n: usize, d: usize, seed: u64) -> Self {
        Self::Logistic {
            source: DataSource::SimData { n, d, seed },
            lambda: None,
        }
    }

    pub fn build(&self) -> Result<Problem> {
        match self {
            Self::Logistic { source, lambda } => {
                let dataset = match source {
                    DataSource::Csv(path) => load_dataset_csv(path)?,
                    DataSource::SimData { n, d, seed } => {
                        generate_simdata(*n, *d, &mut RngStream::new(*seed, SIMDATA_STREAM))?
                    }
                };
                let obj = match lambda {
                    Some(l) => LogRegObjective::new(dataset, *l)?,
                    None => LogRegObjective::with_default_ridge(dataset)?,
                };
                if !(obj.lambda() > 0.0) {
                    return Err(Error::Config("logistic objective needs a positive ridge term".into()));
                }
                Ok(Problem::Logistic(obj))
            }
            Self::Gaussian { y, sigma_sq } => Ok(Problem::Gaussian(GaussianMeanObjective::new(
                y.clone(),
                sigma_sq.clone(),
            )?)),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Logistic { source, lambda } => {
                let src = match source {
                    DataSource::Csv(p) => format!("csv:{}", p.display()),
                    DataSource::SimData { n, d, seed } => format!("simdata(n={n},d={d},seed={seed})"),
                };
                match lambda {
                    Some(l) => format!("logistic[{src},lambda={l:?}]"),
                    None => format!("logistic[{src},lambda=default]"),
                }
            }
            Self::Gaussian { y, sigma_sq } => format!("gaussian[y={y:?},sigma_sq={sigma_sq:?}]"),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Problem {
    Logistic(LogRegObjective),
    Gaussian(GaussianMeanObjective),
}

impl Objective for Problem {
    fn len(&self) -> usize {
        match self {
            Self::Logistic(o) => o.len(),
            Self::Gaussian(o) => o.len(),
        }
    }
    fn dim(&self) -> usize {
        match self {
            Self::Logistic(o) => o.dim(),
            Self::Gaussian(o) => o.dim(),
        }
    }
    fn component_value(&self, i: usize, x: &[f64]) -> f64 {
        match self {
            Self::Logistic(o) => o.component_value(i, x),
            Self::Gaussian(o) => o.component_value(i, x),
        }
    }
    fn add_component_gradient(&self, i: usize, x: &[f64], scale: f64, out: &mut [f64]) {
        match self {
            Self::Logistic(o) => o.add_component_gradient(i, x, scale, out),
            Self::Gaussian(o) => o.add_component_gradient(i, x, scale, out),
        }
    }
    fn add_batch_gradient(&self, indices: &[usize], x: &[f64], scale: f64, out: &mut [f64]) {
        match self {
            Self::Logistic(o) => o.add_batch_gradient(indices, x, scale, out),
            Self::Gaussian(o) => o.add_batch_gradient(indices, x, scale, out),
        }
    }
    fn smoothness(&self) -> f64 {
        match self {
            Self::Logistic(o) => o.smoothness(),
            Self::Gaussian(o) => o.smoothness(),
        }
    }
    fn strong_convexity(&self) -> f64 {
        match self {
            Self::Logistic(o) => o.strong_convexity(),
            Self::Gaussian(o) => o.strong_convexity(),
        }
    }
}

/// Number of epochs per run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpochRule {
    /// `2 ceil(max(5/h, 500) / 2)`
    Formula,
    Fixed(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum StartPoint {
    Minimizer,
    Origin,
    Point(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub objective: ObjectiveSpec,
    pub optimizer: OptimizerKind,
    pub strategy: Strategy,
    pub batch_size: usize,
    pub weighting: RaggedWeighting,
    pub seed: u64,
    pub realizations: usize,
    /// Empty selects [`default_h_grid`].
    pub h_grid: Vec<f64>,
    pub epochs: EpochRule,
    /// Used by schedule runs only.
    pub schedule: Option<StepsizeSchedule>,
    pub start: StartPoint,
    /// Wrap Strang runs in the half-drift change of coordinates.
    pub conjugate_strang: bool,
}

impl ExperimentConfig {
    pub fn new(objective: ObjectiveSpec, optimizer: OptimizerKind, strategy: Strategy, batch_size: usize) -> Self {
        Self {
            objective,
            optimizer,
            strategy,
            batch_size,
            weighting: RaggedWeighting::Proportional,
            seed: 0,
            realizations: 100,
            h_grid: Vec::new(),
            epochs: EpochRule::Formula,
            schedule: None,
            start: StartPoint::Minimizer,
            conjugate_strang: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.optimizer.validate()?;
        if self.realizations == 0 {
            return Err(Error::Config("need at least one realization".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::Config("batch size must be positive".into()));
        }
        if let Some(bad) = self.h_grid.iter().find(|h| !(**h > 0.0 && h.is_finite())) {
            return Err(Error::Config(format!("stepsize {bad} in grid is not positive")));
        }
        if let EpochRule::Fixed(e) = self.epochs {
            if e == 0 {
                return Err(Error::Config("epoch count must be positive".into()));
            }
            if self.strategy == Strategy::SymmetricMinibatch && e % 2 == 1 {
                return Err(Error::Config(format!(
                    "symmetric minibatching needs an even epoch count, got {e}"
                )));
            }
        }
        if let Some(s) = &self.schedule {
            s.validate()?;
        }
        Ok(())
    }
}

/// A validated configuration with its objective built and minimizer computed.
#[derive(Debug, Clone)]
pub struct Experiment {
    config: ExperimentConfig,
    problem: Arc<Problem>,
    x_star: Arc<Vec<f64>>,
    f_star: f64,
}

impl Experiment {
    pub fn prepare(config: ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let problem = config.objective.build()?;
        Self::check_batch(&config, &problem)?;
        let m = compute_minimizer(&problem, None)?;
        Ok(Self {
            config,
            problem: Arc::new(problem),
            x_star: Arc::new(m.x),
            f_star: m.value,
        })
    }

    fn check_batch(config: &ExperimentConfig, problem: &Problem) -> Result<()> {
        if config.batch_size > problem.len() {
            return Err(Error::Size {
                requested: config.batch_size,
                available: problem.len(),
            });
        }
        if let StartPoint::Point(p) = &config.start {
            if p.len() != problem.dim() {
                return Err(Error::Config(format!(
                    "start point has dimension {}, objective has {}",
                    p.len(),
                    problem.dim()
                )));
            }
        }
        Ok(())
    }

    /// Same objective and minimizer with a modified configuration.
    pub fn variant_with<F: FnOnce(&mut ExperimentConfig)>(&self, edit: F) -> Result<Self> {
        let mut config = self.config.clone();
        edit(&mut config);
        if config.objective != self.config.objective {
            return Err(Error::Config("a variant cannot change the objective".into()));
        }
        config.validate()?;
        Self::check_batch(&config, &self.problem)?;
        Ok(Self {
            config,
            problem: Arc::clone(&self.problem),
            x_star: Arc::clone(&self.x_star),
            f_star: self.f_star,
        })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.config
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn x_star(&self) -> &[f64] {
        &self.x_star
    }

    pub fn f_star(&self) -> f64 {
        self.f_star
    }

    pub fn batches_per_epoch(&self) -> usize {
        self.problem.len().div_ceil(self.config.batch_size)
    }

    /// The configured grid, or the default one, sorted ascending.
    pub fn h_grid(&self) -> Vec<f64> {
        let mut grid = if self.config.h_grid.is_empty() {
            default_h_grid(self.batches_per_epoch(), self.problem.smoothness())
        } else {
            self.config.h_grid.clone()
        };
        grid.sort_by(f64::total_cmp);
        grid
    }

    pub fn epochs_for(&self, h: f64) -> u64 {
        match self.config.epochs {
            EpochRule::Formula => epochs_for(h),
            EpochRule::Fixed(e) => e,
        }
    }

    pub fn start_point(&self) -> Vec<f64> {
        match &self.config.start {
            StartPoint::Minimizer => self.x_star.to_vec(),
            StartPoint::Origin => vec![0.0; self.problem.dim()],
            StartPoint::Point(p) => p.clone(),
        }
    }

    /// Key/value pairs echoing the configuration for output files.
    pub fn metadata(&self) -> Vec<(String, String)> {
        let c = &self.config;
        let mut meta = vec![
            ("version".into(), format!("sgsplit {}", env!("CARGO_PKG_VERSION"))),
            ("objective".into(), c.objective.describe()),
            ("optimizer".into(), c.optimizer.short_name().into()),
            (
                "gamma".into(),
                c.optimizer.gamma().map_or("none".into(), |g| format!("{g:?}")),
            ),
            ("strategy".into(), c.strategy.short_name().into()),
            ("batch_size".into(), c.batch_size.to_string()),
            ("batches_per_epoch".into(), self.batches_per_epoch().to_string()),
            ("weighting".into(), format!("{:?}", c.weighting).to_lowercase()),
            ("seed".into(), c.seed.to_string()),
            ("realizations".into(), c.realizations.to_string()),
            (
                "epochs".into(),
                match c.epochs {
                    EpochRule::Formula => "formula".into(),
                    EpochRule::Fixed(e) => e.to_string(),
                },
            ),
            ("start".into(), format!("{:?}", c.start).to_lowercase()),
            ("conjugate_strang".into(), c.conjugate_strang.to_string()),
            ("smoothness".into(), format!("{:?}", self.problem.smoothness())),
            ("f_star".into(), format!("{:?}", self.f_star)),
        ];
        if let Some(s) = &c.schedule {
            meta.push(("schedule".into(), format!("{s:?}")));
        }
        meta
    }
}
