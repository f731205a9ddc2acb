use crate::dataset::Dataset;
use crate::error::Result;
use crate::linalg::{dot, norm_sq, spectral_norm_gram};

/// Logistic function, stable for arguments of either sign.
#[inline]
pub fn sigmoid(t: f64) -> f64 {
    let e = (-t.abs()).exp();
    if t >= 0.0 {
        1.0 / (1.0 + e)
    } else {
        e / (1.0 + e)
    }
}

/// `log(1 + exp(t))` without overflow.
#[inline]
pub fn softplus(t: f64) -> f64 {
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRegConstants {
    /// `||Y^T Y||_2 / (4N)`
    pub smoothness: f64,
    /// Ridge coefficient `L / sqrt(N)`.
    pub lambda: f64,
}

pub fn logreg_constants(dataset: &Dataset, tol: f64) -> Result<LogRegConstants> {
    let n = dataset.len() as f64;
    let top = spectral_norm_gram(dataset.features(), tol)?;
    let smoothness = top / (4.0 * n);
    Ok(LogRegConstants {
        smoothness,
        lambda: smoothness / n.sqrt(),
    })
}

/// Ridge-regularised logistic regression. Every component carries the ridge
/// term: `f_i(x) = lambda/2 ||x||^2 - z_i x.y_i + log(1 + exp(x.y_i))`.
#[derive(Debug, Clone)]
pub struct LogRegObjective {
    dataset: Dataset,
    lambda: f64,
    data_smoothness: f64,
}

impl LogRegObjective {
    pub fn new(dataset: Dataset, lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0) {
            return Err(crate::error::Error::Config(format!("ridge coefficient {lambda} must be >= 0")));
        }
        let data_smoothness = logreg_constants(&dataset, crate::linalg::POWER_ITERATION_TOL)?.smoothness;
        Ok(Self {
            dataset,
            lambda,
            data_smoothness,
        })
    }

    /// Uses `lambda = L / sqrt(N)` with `L = ||Y^T Y||_2 / 4N`.
    pub fn with_default_ridge(dataset: Dataset) -> Result<Self> {
        let c = logreg_constants(&dataset, crate::linalg::POWER_ITERATION_TOL)?;
        Ok(Self {
            dataset,
            lambda: c.lambda,
            data_smoothness: c.smoothness,
        })
    }

    pub fn dataset(&self) -> &Dataset {
        &self.dataset
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `||Y^T Y||_2 / 4N`, the smoothness of the unregularised loss.
    pub fn data_smoothness(&self) -> f64 {
        self.data_smoothness
    }
}

impl super::Objective for LogRegObjective {
    fn len(&self) -> usize {
        self.dataset.len()
    }

    fn dim(&self) -> usize {
        self.dataset.dim()
    }

    fn component_value(&self, i: usize, x: &[f64]) -> f64 {
        let t = dot(x, self.dataset.row(i));
        0.5 * self.lambda * norm_sq(x) - self.dataset.label(i) * t + softplus(t)
    }

    #[inline]
    fn add_component_gradient(&self, i: usize, x: &[f64], scale: f64, out: &mut [f64]) {
        let row = self.dataset.row(i);
        let r = scale * (sigmoid(dot(x, row)) - self.dataset.label(i));
        let ridge = scale * self.lambda;
        for ((o, xi), yi) in out.iter_mut().zip(x).zip(row) {
            *o += ridge * xi + r * yi;
        }
    }

    fn add_batch_gradient(&self, indices: &[usize], x: &[f64], scale: f64, out: &mut [f64]) {
        let ridge = scale * self.lambda * indices.len() as f64;
        for (o, xi) in out.iter_mut().zip(x) {
            *o += ridge * xi;
        }
        for &i in indices {
            let row = self.dataset.row(i);
            let r = scale * (sigmoid(dot(x, row)) - self.dataset.label(i));
            for (o, yi) in out.iter_mut().zip(row) {
                *o += r * yi;
            }
        }
    }

    fn smoothness(&self) -> f64 {
        self.data_smoothness + self.lambda
    }

    fn strong_convexity(&self) -> f64 {
        self.lambda
    }
}

#[cfg(test)]
mod tests {
    use super::super::Objective;
    use super::*;
    use crate::dataset::generate_simdata;
    use crate::linalg::Matrix;
    use crate::rng::RngStream;
    use rand::Rng;

    #[test]
    fn sigmoid_and_softplus_are_stable() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert!((sigmoid(700.0) - 1.0).abs() < 1e-15);
        assert!(sigmoid(-700.0) > 0.0 && sigmoid(-700.0) < 1e-300);
        assert!((softplus(700.0) - 700.0).abs() < 1e-12);
        assert!(softplus(-700.0) >= 0.0 && softplus(-700.0) < 1e-300);
        assert!((softplus(0.0) - 2f64.ln()).abs() < 1e-15);
        for t in [-30.0, -1.0, 0.3, 5.0, 30.0] {
            assert!((softplus(t) - (1.0 + f64::exp(t)).ln()).abs() < 1e-12);
            assert!((sigmoid(t) - 1.0 / (1.0 + f64::exp(-t))).abs() < 1e-15);
        }
    }

    #[test]
    fn constants_by_hand() {
        let ds = Dataset::new(Matrix::from_row_major(2, 1, vec![2.0, 0.0]), vec![1.0, 0.0]).unwrap();
        let c = logreg_constants(&ds, 1e-12).unwrap();
        assert!((c.smoothness - 0.5).abs() < 1e-12);
        assert!((c.lambda - 0.5 / 2f64.sqrt()).abs() < 1e-12);

        let zeros = Dataset::new(Matrix::zeros(3, 2), vec![1.0, 0.0, 1.0]).unwrap();
        let c = logreg_constants(&zeros, 1e-12).unwrap();
        assert_eq!((c.smoothness, c.lambda), (0.0, 0.0));
    }

    #[test]
    fn gradient_at_origin() {
        let ds = generate_simdata(5, 3, &mut RngStream::new(1, 0)).unwrap();
        let obj = LogRegObjective::new(ds.clone(), 0.0).unwrap();
        for i in 0..5 {
            let g = obj.component_gradient(i, &[0.0; 3]);
            for (gj, yj) in g.iter().zip(ds.row(i)) {
                assert!((gj - (0.5 - ds.label(i)) * yj).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn component_gradient_matches_finite_differences() {
        let ds = generate_simdata(30, 4, &mut RngStream::new(2, 0)).unwrap();
        let obj = LogRegObjective::with_default_ridge(ds).unwrap();
        let mut rng = RngStream::new(2, 1);
        let step = 1e-6;
        for _ in 0..100 {
            let i = rng.index(30);
            let x: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
            let g = obj.component_gradient(i, &x);
            for k in 0..4 {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[k] += step;
                xm[k] -= step;
                let fd = (obj.component_value(i, &xp) - obj.component_value(i, &xm)) / (2.0 * step);
                assert!((fd - g[k]).abs() <= 1e-5 * g[k].abs().max(1.0), "{fd} vs {}", g[k]);
            }
        }
    }
}
