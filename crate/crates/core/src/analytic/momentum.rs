//! Momentum closed forms written in the eigenvalues `lambda_+-` of the flow
//! generator. Each `(1 - e^{z})^2 / (1 - e^{2z})` is evaluated as
//! `-tanh(z/2)` and each `(1 - e^{a})(1 - e^{b}) / (1 - e^{a+b})` through
//! `expm1`, which keeps the expressions accurate as `h -> 0`.

use num_complex::Complex64;

use super::flow::Flow2x2;
use super::{check_batches, check_momentum};
use crate::error::{Error, Result};

fn expm1(z: Complex64) -> Complex64 {
    let half = (0.5 * z.im).sin();
    let e = z.re.exp();
    Complex64::new(z.re.exp_m1() * z.im.cos() - 2.0 * half * half, e * z.im.sin())
}

/// `(1 - e^{s lambda})^2 / (1 - e^{2 s lambda})`
fn square_ratio(s: f64, lambda: Complex64) -> Complex64 {
    -(0.5 * s * lambda).tanh()
}

/// `(1 - e^{s lambda_+})(1 - e^{s lambda_-}) / (1 - e^{-gamma s})`
fn cross_ratio(flow: &Flow2x2, s: f64) -> Complex64 {
    expm1(flow.lambda_plus * s) * expm1(flow.lambda_minus * s) / -(-flow.gamma() * s).exp_m1()
}

/// Sums complex terms that must add up to a real number and checks that the
/// imaginary part vanishes to roundoff.
fn real_sum(terms: &[Complex64]) -> Result<f64> {
    let total: Complex64 = terms.iter().sum();
    let magnitude: f64 = terms.iter().map(|t| t.norm()).sum();
    if total.im.abs() > 1e-10 * total.re.abs() + 64.0 * f64::EPSILON * magnitude {
        return Err(Error::Domain(format!(
            "closed form has non-negligible imaginary part {} (real part {})",
            total.im, total.re
        )));
    }
    Ok(total.re)
}

pub fn msgd_rm_mse(h: f64, v: f64, gamma: f64) -> Result<f64> {
    check_momentum(h, v, gamma)?;
    let f = Flow2x2::new(gamma)?;
    let (lp, lm) = (f.lambda_plus, f.lambda_minus);
    let bracket = real_sum(&[
        lm * lm * square_ratio(h, lp),
        -2.0 * cross_ratio(&f, h),
        lp * lp * square_ratio(h, lm),
    ])?;
    Ok(v * bracket / (gamma * gamma - 4.0))
}

pub fn msgd_rr_mse(h: f64, v: f64, gamma: f64, r: usize) -> Result<f64> {
    check_momentum(h, v, gamma)?;
    check_batches(r)?;
    let f = Flow2x2::new(gamma)?;
    let (lp, lm) = (f.lambda_plus, f.lambda_minus);
    let rf = r as f64;
    let rh = rf * h;
    let bracket = real_sum(&[
        rf * lm * lm * square_ratio(h, lp),
        -lm * lm * square_ratio(rh, lp),
        -2.0 * rf * cross_ratio(&f, h),
        2.0 * cross_ratio(&f, rh),
        rf * lp * lp * square_ratio(h, lm),
        -lp * lp * square_ratio(rh, lm),
    ])?;
    Ok(v * bracket / ((rf - 1.0) * (gamma * gamma - 4.0)))
}
