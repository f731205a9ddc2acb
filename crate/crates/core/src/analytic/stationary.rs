//! Stationary covariance of the period-sampled momentum recursion
//! `z <- M z + noise` via the discrete Lyapunov equation `X = M X M^T + Q`.

use super::flow::{congruence, frobenius, mul_vec, Flow2x2, Mat2};
use super::{check_batches, check_momentum};
use crate::batching::Strategy;
use crate::error::{Error, Result};

fn spectral_radius(m: &Mat2) -> f64 {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = 0.25 * tr * tr - det;
    if disc >= 0.0 {
        (0.5 * tr).abs() + disc.sqrt()
    } else {
        det.sqrt()
    }
}

/// Solves `X = M X M^T + Q` given `D = M - I`.
fn solve_with_offset(m: &Mat2, d: &Mat2, q: &Mat2) -> Result<Mat2> {
    let rho = spectral_radius(m);
    if !(rho < 1.0) {
        return Err(Error::NonContractive(rho));
    }
    // Row-major vec: (I - M kron M) vec X = vec Q, and
    // delta_ik delta_jl - M_ik M_jl = -(D_ik delta_jl + delta_ik D_jl + D_ik D_jl).
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let mut k = [[0.0; 5]; 4];
    for i in 0..2 {
        for j in 0..2 {
            let row = 2 * i + j;
            for kk in 0..2 {
                for l in 0..2 {
                    k[row][2 * kk + l] =
                        -(d[i][kk] * delta(j, l) + delta(i, kk) * d[j][l] + d[i][kk] * d[j][l]);
                }
            }
            k[row][4] = q[i][j];
        }
    }
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&a, &b| k[a][col].abs().total_cmp(&k[b][col].abs()))
            .unwrap_or(col);
        k.swap(col, pivot);
        let p = k[col][col];
        if p == 0.0 {
            return Err(Error::NonContractive(rho));
        }
        for row in col + 1..4 {
            let f = k[row][col] / p;
            for c in col..5 {
                k[row][c] -= f * k[col][c];
            }
        }
    }
    let mut x = [0.0; 4];
    for row in (0..4).rev() {
        let tail: f64 = (row + 1..4).map(|c| k[row][c] * x[c]).sum();
        x[row] = (k[row][4] - tail) / k[row][row];
    }
    Ok([[x[0], x[1]], [x[2], x[3]]])
}

/// Solves `X = M X M^T + Q`; errors if `M` is not contractive.
pub fn solve_discrete_lyapunov(m: &Mat2, q: &Mat2) -> Result<Mat2> {
    let d = [[m[0][0] - 1.0, m[0][1]], [m[1][0], m[1][1] - 1.0]];
    solve_with_offset(m, &d, q)
}

/// Per-period transition `M`, `M - I` and noise covariance `Q` for the exact
/// flow driven by batch means of variance `v`.
struct PeriodNoise {
    transition: Mat2,
    offset: Mat2,
    covariance: Mat2,
}

fn period_noise(strategy: Strategy, h: f64, v: f64, gamma: f64, r: usize) -> Result<PeriodNoise> {
    let flow = Flow2x2::new(gamma)?;
    let step_offset = flow.minus_identity(h);
    let e1 = [1.0, 0.0];
    let column = |t: f64| mul_vec(&flow.at(t), e1);
    let weights: Vec<[f64; 2]> = match strategy {
        Strategy::RobbinsMonro => {
            let u = mul_vec(&step_offset, e1);
            return Ok(PeriodNoise {
                transition: flow.at(h),
                offset: step_offset,
                covariance: [[v * u[0] * u[0], v * u[0] * u[1]], [v * u[1] * u[0], v * u[1] * u[1]]],
            });
        }
        Strategy::RandomReshuffling => (0..r).map(|j| column((r - 1 - j) as f64 * h)).collect(),
        Strategy::SymmetricMinibatch => (0..r)
            .map(|j| {
                let a = column((2 * r - 1 - j) as f64 * h);
                let b = column(j as f64 * h);
                [a[0] + b[0], a[1] + b[1]]
            })
            .collect(),
        other => return Err(Error::Domain(format!("no stationary recursion for strategy {other}"))),
    };
    let period = (r * strategy.epochs_per_period()) as f64 * h;
    // V/(R-1) [R sum p p^T - (sum p)(sum p)^T] = V R/(R-1) sum (p - mean)(p - mean)^T
    let rf = r as f64;
    let mean = weights.iter().fold([0.0, 0.0], |acc, p| [acc[0] + p[0] / rf, acc[1] + p[1] / rf]);
    let mut c = [[0.0; 2]; 2];
    for p in &weights {
        let dp = [p[0] - mean[0], p[1] - mean[1]];
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] += dp[i] * dp[j];
            }
        }
    }
    let scale = v * rf / (rf - 1.0);
    for row in c.iter_mut() {
        for x in row.iter_mut() {
            *x *= scale;
        }
    }
    Ok(PeriodNoise {
        transition: flow.at(period),
        offset: flow.minus_identity(period),
        covariance: congruence(&step_offset, &c),
    })
}

/// Covariance of the noise injected over one sampling period (one step for
/// RM, one epoch for RR, two mirrored epochs for SMS).
pub fn epoch_noise_covariance(strategy: Strategy, h: f64, v: f64, gamma: f64, r: usize) -> Result<Mat2> {
    check_momentum(h, v, gamma)?;
    check_batches(r)?;
    Ok(period_noise(strategy, h, v, gamma, r)?.covariance)
}

/// Stationary position variance of the exact-flow recursion for RM, RR or
/// SMS, solved through the Lyapunov equation.
pub fn msgd_mse_by_lyapunov(strategy: Strategy, h: f64, v: f64, gamma: f64, r: usize) -> Result<f64> {
    check_momentum(h, v, gamma)?;
    check_batches(r)?;
    let p = period_noise(strategy, h, v, gamma, r)?;
    if frobenius(&p.covariance) == 0.0 {
        return Ok(0.0);
    }
    Ok(solve_with_offset(&p.transition, &p.offset, &p.covariance)?[0][0])
}

pub fn msgd_sms_mse(h: f64, v: f64, gamma: f64, r: usize) -> Result<f64> {
    msgd_mse_by_lyapunov(Strategy::SymmetricMinibatch, h, v, gamma, r)
}
