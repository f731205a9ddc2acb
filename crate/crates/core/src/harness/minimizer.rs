use crate::error::{Error, Result};
use crate::linalg::norm;
use crate::objectives::Objective;

pub const MINIMIZER_ITERATION_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Minimizer {
    pub x: Vec<f64>,
    pub value: f64,
    pub grad_norm: f64,
    pub iterations: u64,
}

/// Full-gradient Nesterov from the origin with stepsize `1/sqrt(L)` (so the
/// effective gradient step `h^2` is `1/L`) and friction `sqrt(mu)`, run until
/// `||grad F|| <= tol`. The default tolerance is
/// `1e-13 max(1, ||grad F(0)||)`.
pub fn compute_minimizer<O: Objective + ?Sized>(obj: &O, tol: Option<f64>) -> Result<Minimizer> {
    let d = obj.dim();
    let l = obj.smoothness();
    let mu = obj.strong_convexity();
    if !(mu > 0.0) || !(l >= mu) || !l.is_finite() {
        return Err(Error::Config(format!(
            "minimizer needs a strongly convex objective (L = {l}, mu = {mu})"
        )));
    }
    let mut x = vec![0.0; d];
    let mut v = vec![0.0; d];
    let mut y = vec![0.0; d];
    let mut g = vec![0.0; d];
    obj.full_gradient_into(&x, &mut g);
    let tol = tol.unwrap_or(1e-13 * norm(&g).max(1.0));
    let h = 1.0 / l.sqrt();
    let eta = (-mu.sqrt() * h).exp();
    for it in 0..MINIMIZER_ITERATION_CAP {
        obj.full_gradient_into(&x, &mut g);
        let gn = norm(&g);
        if gn <= tol {
            return Ok(Minimizer {
                value: obj.value(&x),
                x,
                grad_norm: gn,
                iterations: it,
            });
        }
        for ((yi, xi), vi) in y.iter_mut().zip(&x).zip(&v) {
            *yi = xi + h * eta * vi;
        }
        obj.full_gradient_into(&y, &mut g);
        for ((xi, vi), gi) in x.iter_mut().zip(v.iter_mut()).zip(&g) {
            *vi = eta * *vi - h * gi;
            *xi += h * *vi;
        }
    }
    obj.full_gradient_into(&x, &mut g);
    Err(Error::Minimizer {
        iterations: MINIMIZER_ITERATION_CAP as usize,
        grad_norm: norm(&g),
    })
}
