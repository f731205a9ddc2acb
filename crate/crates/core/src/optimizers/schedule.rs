use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepsizeSchedule {
    Constant { h: f64 },
    /// `h_k = 1 / (l (1 + delta max(0, k - 20 r) / r))`: constant `1/l` for
    /// the first 20 epochs of `r` iterations, then harmonic decay.
    WarmupDecay { l: f64, delta: f64, r: usize },
}

impl StepsizeSchedule {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Constant { h } if !(h > 0.0 && h.is_finite()) => {
                Err(Error::Config(format!("stepsize must be positive, got {h}")))
            }
            Self::WarmupDecay { l, delta, r } if !(l > 0.0 && l.is_finite()) || !(delta >= 0.0) || r == 0 => {
                Err(Error::Config(format!(
                    "decreasing schedule needs l > 0, delta >= 0, r >= 1 (got {l}, {delta}, {r})"
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn stepsize_at(&self, k: u64) -> f64 {
        match *self {
            Self::Constant { h } => h,
            Self::WarmupDecay { l, delta, r } => {
                let r = r as f64;
                let excess = (k as f64 - 20.0 * r).max(0.0);
                1.0 / (l * (1.0 + delta * excess / r))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let s = StepsizeSchedule::WarmupDecay { l: 2.0, delta: 1.0 / 3.0, r: 8 };
        for k in [0, 1, 100, 160] {
            assert_eq!(s.stepsize_at(k), 0.5);
        }
        let s = StepsizeSchedule::WarmupDecay { l: 1.0, delta: 1.0 / 3.0, r: 8 };
        assert!((s.stepsize_at(168) - 0.75).abs() < 1e-15);
        let c = StepsizeSchedule::Constant { h: 0.01 };
        assert_eq!(c.stepsize_at(0), 0.01);
        assert_eq!(c.stepsize_at(u64::MAX), 0.01);
    }

    #[test]
    fn non_increasing_and_positive() {
        let s = StepsizeSchedule::WarmupDecay { l: 0.3, delta: 1.0 / 7.0, r: 8 };
        let mut prev = f64::INFINITY;
        for k in 0..20_000 {
            let h = s.stepsize_at(k);
            assert!(h > 0.0 && h <= prev);
            prev = h;
        }
    }

    #[test]
    fn validation() {
        assert!(StepsizeSchedule::Constant { h: 0.0 }.validate().is_err());
        assert!(StepsizeSchedule::WarmupDecay { l: 1.0, delta: 0.1, r: 0 }.validate().is_err());
        assert!(StepsizeSchedule::WarmupDecay { l: 1.0, delta: 0.1, r: 8 }.validate().is_ok());
    }
}
