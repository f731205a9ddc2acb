//! Closed-form stationary mean-squared error of the scalar Gaussian model
//! problem in rescaled units (unit curvature), for plain and momentum
//! dynamics under each sampling strategy.
//!
//! Parameters: `h` is the rescaled stepsize, `v` the variance of one batch
//! mean, `r` the number of batches per epoch and `gamma` the rescaled
//! friction. Momentum results describe the exact damped flow driven by the
//! batch mean, sampled at period boundaries.

mod first_order;
mod flow;
mod momentum;
mod stationary;

pub use first_order::{sgd_rm_mse, sgd_rr_mse, sgd_sms_mse};
pub use flow::{exact_flow, exact_flow_minus_identity, Flow2x2, Mat2};
pub use momentum::{msgd_rm_mse, msgd_rr_mse};
pub use stationary::{epoch_noise_covariance, msgd_mse_by_lyapunov, msgd_sms_mse, solve_discrete_lyapunov};

use crate::batching::Strategy;
use crate::error::{Error, Result};

/// Distance from `gamma = 2` below which the flow is treated as degenerate.
pub const DEGENERATE_DAMPING_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dynamics {
    /// `x <- (1 - h) x + h y_batch`
    FirstOrder,
    /// Exact damped flow over each step.
    Momentum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub h: f64,
    pub v: f64,
    pub r: usize,
    pub gamma: f64,
}

impl ModelParams {
    /// Stationary MSE for a strategy with a closed form (RM, RR, SMS).
    pub fn mse(&self, dynamics: Dynamics, strategy: Strategy) -> Result<f64> {
        let ModelParams { h, v, r, gamma } = *self;
        match (dynamics, strategy) {
            (Dynamics::FirstOrder, Strategy::RobbinsMonro) => sgd_rm_mse(h, v),
            (Dynamics::FirstOrder, Strategy::RandomReshuffling) => sgd_rr_mse(h, v, r),
            (Dynamics::FirstOrder, Strategy::SymmetricMinibatch) => sgd_sms_mse(h, v, r),
            (Dynamics::Momentum, Strategy::RobbinsMonro) => msgd_rm_mse(h, v, gamma),
            (Dynamics::Momentum, Strategy::RandomReshuffling) => msgd_rr_mse(h, v, gamma, r),
            (Dynamics::Momentum, Strategy::SymmetricMinibatch) => msgd_sms_mse(h, v, gamma, r),
            (_, s) => Err(Error::Domain(format!("no closed form for strategy {s}"))),
        }
    }

    /// Leading small-`h` term of [`ModelParams::mse`].
    pub fn leading_term(&self, dynamics: Dynamics, strategy: Strategy) -> Result<f64> {
        let ModelParams { h, v, r, gamma } = *self;
        let r = r as f64;
        let sms = r * (r + 1.0) * (2.0 * r - 1.0) * (2.0 * r + 1.0) / 180.0;
        Ok(match (dynamics, strategy) {
            (Dynamics::FirstOrder, Strategy::RobbinsMonro) => v * h / 2.0,
            (Dynamics::FirstOrder, Strategy::RandomReshuffling) => v * h.powi(3) * r * (r + 1.0) / 24.0,
            (Dynamics::FirstOrder, Strategy::SymmetricMinibatch) => v * h.powi(5) * sms,
            (Dynamics::Momentum, Strategy::RobbinsMonro) => v * h / (2.0 * gamma),
            (Dynamics::Momentum, Strategy::RandomReshuffling) => v * r * (r + 1.0) * h.powi(3) / (24.0 * gamma),
            (Dynamics::Momentum, Strategy::SymmetricMinibatch) => {
                v * h.powi(5) * sms * (gamma * gamma + 1.0) / gamma
            }
            (_, s) => return Err(Error::Domain(format!("no closed form for strategy {s}"))),
        })
    }
}

fn check_first_order(h: f64, v: f64) -> Result<()> {
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::Domain(format!("stepsize {h} outside (0, 1)")));
    }
    check_variance(v)
}

fn check_variance(v: f64) -> Result<()> {
    if !(v >= 0.0 && v.is_finite()) {
        return Err(Error::Domain(format!("variance {v} must be finite and >= 0")));
    }
    Ok(())
}

fn check_batches(r: usize) -> Result<()> {
    if r < 2 {
        return Err(Error::Domain(format!("need at least 2 batches per epoch, got {r}")));
    }
    Ok(())
}

fn check_momentum(h: f64, v: f64, gamma: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Domain(format!("stepsize {h} must be positive")));
    }
    check_variance(v)?;
    check_gamma(gamma)
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::Domain(format!("friction {gamma} must be positive")));
    }
    if (gamma - 2.0).abs() < DEGENERATE_DAMPING_TOL {
        return Err(Error::DegenerateDamping(gamma));
    }
    Ok(())
}
