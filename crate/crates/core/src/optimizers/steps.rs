use super::{OptimizerKind, OptimizerState};

/// `x <- x - h g`.
pub fn sgd_step(state: &mut OptimizerState, g: &[f64], h: f64) {
    for (x, gi) in state.x.iter_mut().zip(g) {
        *x -= h * gi;
    }
    state.k += 1;
}

#[inline]
fn kick_drift(x: &mut [f64], v: &mut [f64], g: &[f64], h: f64, eta: f64) {
    for ((xi, vi), gi) in x.iter_mut().zip(v.iter_mut()).zip(g) {
        *vi = eta * *vi - h * gi;
        *xi += h * *vi;
    }
}

#[inline]
fn drift(x: &mut [f64], v: &[f64], h: f64) {
    for (xi, vi) in x.iter_mut().zip(v) {
        *xi += h * vi;
    }
}

#[inline]
fn kick(v: &mut [f64], g: &[f64], h: f64, eta: f64) {
    for (vi, gi) in v.iter_mut().zip(g) {
        *vi = eta * *vi - h * gi;
    }
}

/// Heavy ball with `g` evaluated at the current `x`:
/// `v <- e^{-gamma h} v - h g`, `x <- x + h v`.
pub fn hb_step(state: &mut OptimizerState, g: &[f64], h: f64, gamma: f64) {
    kick_drift(&mut state.x, &mut state.v, g, h, (-gamma * h).exp());
    state.k += 1;
}

/// Heavy ball with the gradient taken at `x + h e^{-gamma h} v`.
pub fn nag_step<G>(state: &mut OptimizerState, mut grad_fn: G, h: f64, gamma: f64)
where
    G: FnMut(&[f64]) -> Vec<f64>,
{
    let eta = (-gamma * h).exp();
    let y: Vec<f64> = state.x.iter().zip(&state.v).map(|(x, v)| x + h * eta * v).collect();
    let g = grad_fn(&y);
    kick_drift(&mut state.x, &mut state.v, &g, h, eta);
    state.k += 1;
}

/// Drift `(x, v) -> (x + h v, v)`. Any sign of `h` is allowed.
pub fn phi_a(state: &mut OptimizerState, h: f64) {
    drift(&mut state.x, &state.v, h);
}

/// Kick `(x, v) -> (x, e^{-gamma h} v - h g)` with `g` taken at the current `x`.
pub fn phi_b(state: &mut OptimizerState, g: &[f64], h: f64, gamma: f64) {
    kick(&mut state.v, g, h, (-gamma * h).exp());
}

/// Half drift, kick with the gradient at the half-drifted position, half drift.
pub fn strang_step<G>(state: &mut OptimizerState, mut grad_fn: G, h: f64, gamma: f64)
where
    G: FnMut(&[f64]) -> Vec<f64>,
{
    phi_a(state, 0.5 * h);
    let g = grad_fn(&state.x);
    phi_b(state, &g, h, gamma);
    phi_a(state, 0.5 * h);
    state.k += 1;
}

/// Explicit Euler: `x <- x + h v`, `v <- v - gamma h v - h g` with both
/// right-hand sides at the old state.
pub fn euler_momentum_step(state: &mut OptimizerState, g: &[f64], h: f64, gamma: f64) {
    for ((xi, vi), gi) in state.x.iter_mut().zip(state.v.iter_mut()).zip(g) {
        let v_old = *vi;
        *vi = v_old - gamma * h * v_old - h * gi;
        *xi += h * v_old;
    }
    state.k += 1;
}

/// Allocation-free driver for any [`OptimizerKind`]. The gradient callback
/// writes `grad f_batch(point)` into its second argument.
#[derive(Debug, Clone)]
pub struct Stepper {
    kind: OptimizerKind,
    g: Vec<f64>,
    y: Vec<f64>,
    cached_h: f64,
    cached_eta: f64,
}

impl Stepper {
    pub fn new(kind: OptimizerKind, dim: usize) -> Self {
        Self {
            kind,
            g: vec![0.0; dim],
            y: vec![0.0; dim],
            cached_h: f64::NAN,
            cached_eta: f64::NAN,
        }
    }

    pub fn kind(&self) -> OptimizerKind {
        self.kind
    }

    fn eta(&mut self, h: f64, gamma: f64) -> f64 {
        if h != self.cached_h {
            self.cached_h = h;
            self.cached_eta = (-gamma * h).exp();
        }
        self.cached_eta
    }

    /// Advances one iteration, calling `grad` exactly once.
    pub fn step<G>(&mut self, state: &mut OptimizerState, h: f64, mut grad: G)
    where
        G: FnMut(&[f64], &mut [f64]),
    {
        match self.kind {
            OptimizerKind::Sgd => {
                grad(&state.x, &mut self.g);
                for (x, gi) in state.x.iter_mut().zip(&self.g) {
                    *x -= h * gi;
                }
            }
            OptimizerKind::HeavyBall { gamma } => {
                let eta = self.eta(h, gamma);
                grad(&state.x, &mut self.g);
                kick_drift(&mut state.x, &mut state.v, &self.g, h, eta);
            }
            OptimizerKind::Nesterov { gamma } => {
                let eta = self.eta(h, gamma);
                for ((y, x), v) in self.y.iter_mut().zip(&state.x).zip(&state.v) {
                    *y = x + h * eta * v;
                }
                grad(&self.y, &mut self.g);
                kick_drift(&mut state.x, &mut state.v, &self.g, h, eta);
            }
            OptimizerKind::Strang { gamma } => {
                let eta = self.eta(h, gamma);
                drift(&mut state.x, &state.v, 0.5 * h);
                grad(&state.x, &mut self.g);
                kick(&mut state.v, &self.g, h, eta);
                drift(&mut state.x, &state.v, 0.5 * h);
            }
            OptimizerKind::EulerMomentum { gamma } => {
                grad(&state.x, &mut self.g);
                for ((xi, vi), gi) in state.x.iter_mut().zip(state.v.iter_mut()).zip(&self.g) {
                    let v_old = *vi;
                    *vi = v_old - gamma * h * v_old - h * gi;
                    *xi += h * v_old;
                }
            }
        }
        state.k += 1;
    }
}
