//! Command-line driver for bias sweeps, schedule runs and model-problem checks.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sgsplit::analytic::{Dynamics, ModelParams};
use sgsplit::harness::{
    compute_minimizer, figure1_config, figure1_control_sigma_sq, write_csv, write_trajectory_csv,
    DataSource, EpochRule, Experiment, ExperimentConfig, Figure1Options, ModelProblem, ObjectiveSpec,
    StartPoint, SweepResult, FIGURE1_SIGMA_SQ,
};
use sgsplit::objectives::Objective;
use sgsplit::{Error, OptimizerKind, StepsizeSchedule, Strategy};

const EXIT_CONFIG: u8 = 2;
const EXIT_DIVERGED: u8 = 3;

#[derive(Parser)]
#[command(name = "sgsplit", version, about = "Minibatch splitting experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Final-iterate RMSE over a stepsize grid, started at the minimizer.
    BiasSweep(Common),
    /// Error per epoch under the warm-up/decay stepsize schedule.
    Schedule(Common),
    /// Closed-form MSE table for the scalar model problem, checked by simulation.
    ModelProblem(Common),
    /// Variable-variance model problem with explicit-Euler momentum.
    Figure1 {
        #[command(flatten)]
        common: Common,
        /// Use a constant variance with the same harmonic mean.
        #[arg(long)]
        control: bool,
    },
    /// Full-gradient minimizer of the objective.
    Minimize(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Logreg,
    Gaussian,
    Simdata,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, value_enum, default_value = "simdata")]
    objective: ObjectiveArg,
    /// CSV of features and a trailing 0/1 label (logreg).
    #[arg(long)]
    data: Option<PathBuf>,
    /// sgd, hb, nag, strang or euler.
    #[arg(long, default_value = "hb")]
    optimizer: String,
    #[arg(long, default_value = "sms")]
    strategy: String,
    /// Batch size; defaults to N/8.
    #[arg(long)]
    n: Option<usize>,
    /// Friction; defaults to sqrt(L).
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Realizations per stepsize (default 100; 100000 for model-problem).
    #[arg(long)]
    reps: Option<usize>,
    /// Comma-separated stepsizes.
    #[arg(long, value_delimiter = ',')]
    hgrid: Option<Vec<f64>>,
    /// Decay rate of the schedule.
    #[arg(long, default_value_t = 1.0 / 3.0)]
    delta: f64,
    #[arg(long)]
    epochs: Option<u64>,
    /// Output file, or a directory to receive `<optimizer>_<strategy>.csv`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// SimData size.
    #[arg(long, default_value_t = 1024)]
    sim_n: usize,
    #[arg(long, default_value_t = 10)]
    sim_d: usize,
    /// Ridge coefficient; defaults to L/sqrt(N).
    #[arg(long)]
    lambda: Option<f64>,
    /// Gaussian observations (default: 16 standardised draws).
    #[arg(long, value_delimiter = ',')]
    y: Option<Vec<f64>>,
    /// Gaussian variances (default: N for every observation).
    #[arg(long, value_delimiter = ',')]
    sigma_sq: Option<Vec<f64>>,
}

impl Common {
    fn objective_spec(&self) -> Result<ObjectiveSpec, Error> {
        match self.objective {
            ObjectiveArg::Simdata => Ok(ObjectiveSpec::Logistic {
                source: DataSource::SimData {
                    n: self.sim_n,
                    d: self.sim_d,
                    seed: self.seed,
                },
                lambda: self.lambda,
            }),
            ObjectiveArg::Logreg => {
                let path = self
                    .data
                    .clone()
                    .ok_or_else(|| Error::Config("--objective logreg needs --data PATH".into()))?;
                Ok(ObjectiveSpec::Logistic {
                    source: DataSource::Csv(path),
                    lambda: self.lambda,
                })
            }
            ObjectiveArg::Gaussian => {
                let y = match &self.y {
                    Some(y) => y.clone(),
                    None => ModelProblem::standardized(8, 2, self.seed)?.objective().observations().to_vec(),
                };
                let sigma_sq = match &self.sigma_sq {
                    Some(s) => s.clone(),
                    None => vec![y.len() as f64; y.len()],
                };
                Ok(ObjectiveSpec::Gaussian { y, sigma_sq })
            }
        }
    }

    fn strategy(&self) -> Result<Strategy, Error> {
        self.strategy.parse()
    }

    /// Builds the experiment, filling friction and batch size defaults from
    /// the objective.
    fn experiment(&self) -> Result<Experiment, Error> {
        let spec = self.objective_spec()?;
        let problem = spec.build()?;
        let gamma = self.gamma.unwrap_or_else(|| problem.smoothness().sqrt());
        let optimizer = OptimizerKind::from_name(&self.optimizer, gamma)?;
        let n = self.n.unwrap_or_else(|| (problem.len() / 8).max(1));
        let mut config = ExperimentConfig::new(spec, optimizer, self.strategy()?, n);
        config.seed = self.seed;
        config.realizations = self.reps.unwrap_or(100);
        if let Some(g) = &self.hgrid {
            config.h_grid = g.clone();
        }
        if let Some(e) = self.epochs {
            config.epochs = EpochRule::Fixed(e);
        }
        Experiment::prepare(config)
    }
}

fn output_path(out: &Path, stem: &str) -> PathBuf {
    if out.extension().is_some_and(|e| e == "csv") {
        out.to_path_buf()
    } else {
        out.join(format!("{stem}.csv"))
    }
}

fn ensure_parent(path: &Path) -> Result<(), Error> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => return Ok(()),
    };
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })
}

fn print_sweep(label: &str, result: &SweepResult) {
    println!("# {label}");
    println!("{:>14} {:>14} {:>12} {:>8} {:>10}", "h", "rmse", "stderr", "epochs", "seconds");
    for r in &result.rows {
        let flag = if r.diverged { "  diverged" } else { "" };
        println!(
            "{:>14.6e} {:>14.6e} {:>12.3e} {:>8} {:>10.3}{flag}",
            r.h, r.rmse, r.stderr, r.epochs, r.wallclock_s
        );
    }
    match result.fit {
        Some(f) => println!("slope {:.4}  intercept {:.4}", f.slope, f.intercept),
        None => println!("slope undefined (fewer than 3 usable points)"),
    }
}

/// Returns true if any row diverged.
fn emit_sweep(common: &Common, stem: &str, result: &SweepResult) -> Result<bool, Error> {
    print_sweep(stem, result);
    if let Some(out) = &common.out {
        let path = output_path(out, stem);
        ensure_parent(&path)?;
        write_csv(result, &path)?;
        println!("wrote {}", path.display());
    }
    Ok(result.any_diverged())
}

fn bias_sweep(common: &Common) -> Result<bool, Error> {
    let exp = common.experiment()?;
    let c = exp.config();
    let stem = format!("{}_{}", c.optimizer.short_name(), c.strategy.short_name());
    let result = exp.bias_sweep()?;
    emit_sweep(common, &stem, &result)
}

fn schedule(common: &Common) -> Result<bool, Error> {
    let base = common.experiment()?;
    let l = base.problem().smoothness();
    let momentum = base.config().optimizer.has_momentum();
    let r = base.batches_per_epoch();
    let exp = base.variant_with(|c| {
        c.start = StartPoint::Origin;
        c.schedule = Some(StepsizeSchedule::WarmupDecay {
            l: if momentum { l.sqrt() } else { l },
            delta: common.delta,
            r,
        });
        if common.epochs.is_none() {
            c.epochs = EpochRule::Fixed(200);
        }
    })?;
    let traj = exp.schedule_run()?;
    println!("{:>6} {:>14} {:>12} {:>12}", "epoch", "rmse", "stderr", "stepsize");
    for i in 0..traj.epochs.len() {
        println!(
            "{:>6} {:>14.6e} {:>12.3e} {:>12.5e}",
            traj.epochs[i], traj.rmse[i], traj.stderr[i], traj.stepsize[i]
        );
    }
    if let Some(out) = &common.out {
        let c = exp.config();
        let path = output_path(out, &format!("schedule_{}_{}", c.optimizer.short_name(), c.strategy.short_name()));
        ensure_parent(&path)?;
        write_trajectory_csv(&traj, &path)?;
        println!("wrote {}", path.display());
    }
    Ok(false)
}

fn model_problem(common: &Common) -> Result<bool, Error> {
    let gamma = common.gamma.unwrap_or(1.0);
    let reps = common.reps.unwrap_or(100_000);
    let hs = common.hgrid.clone().unwrap_or_else(|| vec![0.05, 0.02]);
    println!(
        "{:>10} {:>6} {:>8} {:>3} {:>14} {:>14} {:>12} {:>8}",
        "dynamics", "strat", "h", "R", "analytic", "simulated", "stderr", "z"
    );
    for dynamics in [Dynamics::FirstOrder, Dynamics::Momentum] {
        for strategy in [Strategy::RobbinsMonro, Strategy::RandomReshuffling, Strategy::SymmetricMinibatch] {
            let r = if strategy == Strategy::SymmetricMinibatch { 4 } else { 8 };
            let problem = ModelProblem::standardized(r, 2, common.seed)?;
            for &h in &hs {
                let params = ModelParams { h, v: problem.batch_mean_variance(), r, gamma };
                let want = params.mse(dynamics, strategy)?;
                let est = problem.simulate(dynamics, strategy, h, gamma, reps, common.seed)?;
                let name = match dynamics {
                    Dynamics::FirstOrder => "sgd",
                    Dynamics::Momentum => "momentum",
                };
                println!(
                    "{:>10} {:>6} {:>8} {:>3} {:>14.6e} {:>14.6e} {:>12.3e} {:>8.2}",
                    name,
                    strategy.short_name(),
                    h,
                    r,
                    want,
                    est.mean,
                    est.stderr,
                    (est.mean - want) / est.stderr
                );
            }
        }
    }
    Ok(false)
}

fn figure1(common: &Common, control: bool) -> Result<bool, Error> {
    let mut opts = Figure1Options {
        sigma_sq: if control { figure1_control_sigma_sq() } else { FIGURE1_SIGMA_SQ.to_vec() },
        strategy: common.strategy()?,
        seed: common.seed,
        ..Figure1Options::default()
    };
    if let Some(g) = common.gamma {
        opts.gamma = g;
    }
    if let Some(r) = common.reps {
        opts.realizations = r;
    }
    if let Some(g) = &common.hgrid {
        opts.h_grid = g.clone();
    }
    let result = Experiment::prepare(figure1_config(&opts))?.bias_sweep()?;
    let stem = format!(
        "figure1_{}_{}",
        if control { "control" } else { "variable" },
        opts.strategy.short_name()
    );
    emit_sweep(common, &stem, &result)
}

fn minimize(common: &Common) -> Result<bool, Error> {
    let problem = common.objective_spec()?.build()?;
    let m = compute_minimizer(&problem, None)?;
    println!("x_star = {:?}", m.x);
    println!("f_star = {:?}", m.value);
    println!("grad_norm = {:e}", m.grad_norm);
    println!("iterations = {}", m.iterations);
    println!("L = {:?}, mu = {:?}", problem.smoothness(), problem.strong_convexity());
    Ok(false)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::BiasSweep(c) => bias_sweep(c),
        Command::Schedule(c) => schedule(c),
        Command::ModelProblem(c) => model_problem(c),
        Command::Figure1 { common, control } => figure1(common, *control),
        Command::Minimize(c) => minimize(c),
    };
    match outcome {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("error: at least one stepsize diverged");
            ExitCode::from(EXIT_DIVERGED)
        }
        Err(e @ Error::Divergence { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_DIVERGED)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}
