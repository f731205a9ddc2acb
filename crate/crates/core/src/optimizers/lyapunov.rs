use crate::linalg::{dot, norm_sq};
use crate::objectives::Objective;

/// `(1 - eta) / (h eta)` with `eta = e^{-gamma h}`, i.e. `expm1(gamma h) / h`.
pub fn lyapunov_gamma_h(gamma: f64, h: f64) -> f64 {
    (gamma * h).exp_m1() / h
}

/// `F(x) - f_star + (g^2/4)|e|^2 + (g/2)<e, v> + |v|^2/2` with `e = x - x_star`
/// and `g = lyapunov_gamma_h(gamma, h)`.
pub fn lyapunov<O: Objective + ?Sized>(
    x: &[f64],
    v: &[f64],
    obj: &O,
    x_star: &[f64],
    f_star: f64,
    gamma: f64,
    h: f64,
) -> f64 {
    let gh = lyapunov_gamma_h(gamma, h);
    let e: Vec<f64> = x.iter().zip(x_star).map(|(a, b)| a - b).collect();
    obj.value(x) - f_star + 0.25 * gh * gh * norm_sq(&e) + 0.5 * gh * dot(&e, v) + 0.5 * norm_sq(v)
}
