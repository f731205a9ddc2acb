use crate::error::{Error, Result};

/// Scalar Gaussian-mean model problem with
/// `f_i(x) = (N / 2) sigma_i^{-2} (x - y_i)^2`, so that
/// `F(x) = (1/2) sum_i sigma_i^{-2} (x - y_i)^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMeanObjective {
    y: Vec<f64>,
    sigma_sq: Vec<f64>,
    // N * sigma_i^{-2}
    curvature: Vec<f64>,
}

impl GaussianMeanObjective {
    pub fn new(y: Vec<f64>, sigma_sq: Vec<f64>) -> Result<Self> {
        if y.is_empty() || y.len() != sigma_sq.len() {
            return Err(Error::Config(format!(
                "model problem needs matching non-empty y ({}) and sigma^2 ({})",
                y.len(),
                sigma_sq.len()
            )));
        }
        if sigma_sq.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
            return Err(Error::Config("every sigma^2 must be positive and finite".into()));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("observations must be finite".into()));
        }
        let n = y.len() as f64;
        let curvature = sigma_sq.iter().map(|s| n / s).collect();
        Ok(Self { y, sigma_sq, curvature })
    }

    pub fn constant_variance(y: Vec<f64>, sigma_sq: f64) -> Result<Self> {
        let n = y.len();
        Self::new(y, vec![sigma_sq; n])
    }

    /// Constant `sigma^2 = N`, which makes every component gradient `x - y_i`
    /// and leaves stepsizes and friction in the rescaled units of the
    /// analytic formulas.
    pub fn unit_curvature(y: Vec<f64>) -> Result<Self> {
        let n = y.len() as f64;
        Self::constant_variance(y, n)
    }

    pub fn observations(&self) -> &[f64] {
        &self.y
    }

    pub fn variances(&self) -> &[f64] {
        &self.sigma_sq
    }

    /// `N sigma_i^{-2}`, the Hessian of component `i`.
    pub fn component_curvature(&self, i: usize) -> f64 {
        self.curvature[i]
    }

    /// The `sigma^{-2}`-weighted mean of the observations.
    pub fn minimizer(&self) -> f64 {
        let (num, den) = self
            .y
            .iter()
            .zip(&self.sigma_sq)
            .fold((0.0, 0.0), |(num, den), (y, s)| (num + y / s, den + 1.0 / s));
        num / den
    }

    /// Mean component curvature, which is the (constant) Hessian of `F`.
    pub fn hessian(&self) -> f64 {
        self.curvature.iter().sum::<f64>() / self.curvature.len() as f64
    }
}

impl super::Objective for GaussianMeanObjective {
    fn len(&self) -> usize {
        self.y.len()
    }

    fn dim(&self) -> usize {
        1
    }

    fn component_value(&self, i: usize, x: &[f64]) -> f64 {
        let r = x[0] - self.y[i];
        0.5 * self.curvature[i] * r * r
    }

    #[inline]
    fn add_component_gradient(&self, i: usize, x: &[f64], scale: f64, out: &mut [f64]) {
        out[0] += scale * self.curvature[i] * (x[0] - self.y[i]);
    }

    fn smoothness(&self) -> f64 {
        self.hessian()
    }

    fn strong_convexity(&self) -> f64 {
        self.hessian()
    }
}
