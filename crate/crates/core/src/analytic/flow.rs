use num_complex::Complex64;

use super::check_gamma;
use crate::error::Result;

pub type Mat2 = [[f64; 2]; 2];

#[cfg(test)]
pub(crate) const IDENTITY: Mat2 = [[1.0, 0.0], [0.0, 1.0]];

pub(crate) fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

pub(crate) fn transpose(a: &Mat2) -> Mat2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

pub(crate) fn mul_vec(a: &Mat2, x: [f64; 2]) -> [f64; 2] {
    [a[0][0] * x[0] + a[0][1] * x[1], a[1][0] * x[0] + a[1][1] * x[1]]
}

/// `a b a^T`
pub(crate) fn congruence(a: &Mat2, b: &Mat2) -> Mat2 {
    mul(&mul(a, b), &transpose(a))
}

pub(crate) fn frobenius(a: &Mat2) -> f64 {
    a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

/// Flow of `x' = v, v' = -x - gamma v`, i.e. `e^{tA}` with
/// `A = [[0, 1], [-1, -gamma]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flow2x2 {
    gamma: f64,
    /// `sqrt(|gamma^2/4 - 1|)`
    freq: f64,
    underdamped: bool,
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
}

impl Flow2x2 {
    pub fn new(gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        let disc = gamma * gamma / 4.0 - 1.0;
        let freq = disc.abs().sqrt();
        let underdamped = disc < 0.0;
        let root = if underdamped {
            Complex64::new(0.0, freq)
        } else {
            Complex64::new(freq, 0.0)
        };
        let centre = Complex64::new(-gamma / 2.0, 0.0);
        Ok(Self {
            gamma,
            freq,
            underdamped,
            lambda_plus: centre + root,
            lambda_minus: centre - root,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `(c, s, c - 1)` with `e^{tA} = e^{-gamma t/2} [c I + s (A + gamma/2 I)]`.
    fn parts(&self, t: f64) -> (f64, f64, f64) {
        let w = self.freq;
        if self.underdamped {
            let half = (0.5 * w * t).sin();
            ((w * t).cos(), (w * t).sin() / w, -2.0 * half * half)
        } else if w == 0.0 {
            (1.0, t, 0.0)
        } else {
            let half = (0.5 * w * t).sinh();
            ((w * t).cosh(), (w * t).sinh() / w, 2.0 * half * half)
        }
    }

    pub fn at(&self, t: f64) -> Mat2 {
        let (c, s, _) = self.parts(t);
        let damp = (-0.5 * self.gamma * t).exp();
        let g2 = 0.5 * self.gamma;
        [
            [damp * (c + g2 * s), damp * s],
            [-damp * s, damp * (c - g2 * s)],
        ]
    }

    /// `e^{tA} - I` without cancellation in the diagonal.
    pub fn minus_identity(&self, t: f64) -> Mat2 {
        let (c, s, c_minus_one) = self.parts(t);
        let a = -0.5 * self.gamma * t;
        let damp = a.exp();
        let diag = if self.underdamped || self.freq == 0.0 {
            a.exp_m1() * c + c_minus_one
        } else {
            // both real exponents share a sign, so the halves add without cancelling
            let slow = -1.0 / (0.5 * self.gamma + self.freq);
            let fast = -0.5 * self.gamma - self.freq;
            0.5 * ((slow * t).exp_m1() + (fast * t).exp_m1())
        };
        let g2 = 0.5 * self.gamma;
        [
            [diag + damp * g2 * s, damp * s],
            [-damp * s, diag - damp * g2 * s],
        ]
    }
}

/// `e^{tA}` as a real 2x2 matrix.
pub fn exact_flow(t: f64, gamma: f64) -> Result<Mat2> {
    Ok(Flow2x2::new(gamma)?.at(t))
}

pub fn exact_flow_minus_identity(t: f64, gamma: f64) -> Result<Mat2> {
    Ok(Flow2x2::new(gamma)?.minus_identity(t))
}
