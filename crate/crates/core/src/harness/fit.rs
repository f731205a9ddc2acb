use crate::error::{Error, Result};

/// Least-squares line `log rmse = slope log h + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderFit {
    pub slope: f64,
    pub intercept: f64,
}

pub fn fit_order(points: &[(f64, f64)]) -> Result<OrderFit> {
    if points.len() < 3 {
        return Err(Error::Fit(format!("need at least 3 points, got {}", points.len())));
    }
    if let Some(&(h, e)) = points.iter().find(|(h, e)| !(*h > 0.0 && *e > 0.0 && h.is_finite() && e.is_finite())) {
        return Err(Error::Fit(format!("point ({h}, {e}) is not positive and finite")));
    }
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(sx, sy), (h, e)| (sx + h.ln(), sy + e.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (h, e) in points {
        let dx = h.ln() - mx;
        sxx += dx * dx;
        sxy += dx * (e.ln() - my);
    }
    if sxx == 0.0 {
        return Err(Error::Fit("all stepsizes are equal".into()));
    }
    let slope = sxy / sxx;
    Ok(OrderFit {
        slope,
        intercept: my - slope * mx,
    })
}
