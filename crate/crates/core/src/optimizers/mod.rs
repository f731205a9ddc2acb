//! Single-step update maps for SGD and the damped-momentum family, stepsize
//! schedules, and the Lyapunov monitor.
//!
//! All maps take `g = grad f` and apply the minus sign themselves.

mod lyapunov;
mod schedule;
mod steps;

use std::fmt;
use std::str::FromStr;

pub use lyapunov::{lyapunov, lyapunov_gamma_h};
pub use schedule::StepsizeSchedule;
pub use steps::{
    euler_momentum_step, hb_step, nag_step, phi_a, phi_b, sgd_step, strang_step, Stepper,
};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerState {
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub k: u64,
}

impl OptimizerState {
    /// Position `x` with zero momentum.
    pub fn at_rest(x: Vec<f64>) -> Self {
        let v = vec![0.0; x.len()];
        Self { x, v, k: 0 }
    }

    pub fn new(x: Vec<f64>, v: Vec<f64>) -> Self {
        assert_eq!(x.len(), v.len(), "position and momentum dimensions differ");
        Self { x, v, k: 0 }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().chain(&self.v).all(|a| a.is_finite())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OptimizerKind {
    Sgd,
    /// Lie-Trotter splitting: kick then drift.
    HeavyBall { gamma: f64 },
    /// Heavy ball with the gradient taken at the look-ahead point.
    Nesterov { gamma: f64 },
    /// Half drift, kick, half drift.
    Strang { gamma: f64 },
    /// Explicit Euler on the damped second-order system.
    EulerMomentum { gamma: f64 },
}

impl OptimizerKind {
    pub const NAMES: [&'static str; 5] = ["sgd", "hb", "nag", "strang", "euler"];

    /// Builds a kind from its short name; `gamma` is ignored for SGD.
    pub fn from_name(name: &str, gamma: f64) -> Result<Self> {
        let kind = match name.to_ascii_lowercase().as_str() {
            "sgd" => Self::Sgd,
            "hb" | "heavy-ball" => Self::HeavyBall { gamma },
            "nag" | "nesterov" => Self::Nesterov { gamma },
            "strang" | "strang-hb" => Self::Strang { gamma },
            "euler" | "euler-momentum" => Self::EulerMomentum { gamma },
            other => return Err(Error::Config(format!("unknown optimizer `{other}`"))),
        };
        kind.validate()?;
        Ok(kind)
    }

    pub fn short_name(&self) -> &'static str {
        match self {
            Self::Sgd => "sgd",
            Self::HeavyBall { .. } => "hb",
            Self::Nesterov { .. } => "nag",
            Self::Strang { .. } => "strang",
            Self::EulerMomentum { .. } => "euler",
        }
    }

    pub fn gamma(&self) -> Option<f64> {
        match *self {
            Self::Sgd => None,
            Self::HeavyBall { gamma }
            | Self::Nesterov { gamma }
            | Self::Strang { gamma }
            | Self::EulerMomentum { gamma } => Some(gamma),
        }
    }

    pub fn has_momentum(&self) -> bool {
        self.gamma().is_some()
    }

    pub fn validate(&self) -> Result<()> {
        match self.gamma() {
            Some(g) if !(g > 0.0 && g.is_finite()) => {
                Err(Error::Config(format!("friction must be positive and finite, got {g}")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for OptimizerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.gamma() {
            Some(g) => write!(f, "{}(gamma={g})", self.short_name()),
            None => f.write_str(self.short_name()),
        }
    }
}

impl FromStr for OptimizerKind {
    type Err = Error;

    /// Accepts `sgd`, or a momentum name with an optional `:gamma` suffix
    /// (friction defaults to 1).
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some((name, g)) => {
                let gamma = g
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad friction `{g}`")))?;
                Self::from_name(name.trim(), gamma)
            }
            None => Self::from_name(s.trim(), 1.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_kinds() {
        assert_eq!("sgd".parse::<OptimizerKind>().unwrap(), OptimizerKind::Sgd);
        assert_eq!(
            "HB:0.5".parse::<OptimizerKind>().unwrap(),
            OptimizerKind::HeavyBall { gamma: 0.5 }
        );
        assert_eq!(
            "strang".parse::<OptimizerKind>().unwrap(),
            OptimizerKind::Strang { gamma: 1.0 }
        );
        assert!("nag:0".parse::<OptimizerKind>().is_err());
        assert!("nag:-1".parse::<OptimizerKind>().is_err());
        assert!("adam".parse::<OptimizerKind>().is_err());
    }

    #[test]
    fn state_constructors() {
        let s = OptimizerState::at_rest(vec![1.0, 2.0]);
        assert_eq!(s.v, vec![0.0, 0.0]);
        assert!(s.is_finite());
        let bad = OptimizerState::new(vec![f64::NAN], vec![0.0]);
        assert!(!bad.is_finite());
    }
}
