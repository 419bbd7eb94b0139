use serde::{Deserialize, Serialize};

use super::IterationRecord;

/// Trajectories shorter than this get no exponent fit.
pub const MIN_FIT_LEN: usize = 10;

/// Cumulative `Σ‖z_i‖` series with a power-law fit `cum ≈ c·t^κ` of its tail.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthCurve {
    pub points: Vec<(usize, f64)>,
    /// Exponent fitted over the second half of the points.
    pub kappa: Option<f64>,
}

impl GrowthCurve {
    /// Exponents fitted separately over the first and second halves.
    pub fn half_exponents(&self) -> Option<(f64, f64)> {
        if self.points.len() < MIN_FIT_LEN {
            return None;
        }
        let mid = self.points.len() / 2;
        Some((
            fit_growth_exponent(&self.points[..mid])?,
            fit_growth_exponent(&self.points[mid..])?,
        ))
    }
}

pub fn growth_curve(trajectory: &[IterationRecord]) -> GrowthCurve {
    let points: Vec<(usize, f64)> = trajectory.iter().map(|r| (r.t, r.cum_z_norm)).collect();
    let kappa = if points.len() < MIN_FIT_LEN {
        None
    } else {
        fit_growth_exponent(&points[points.len() / 2..])
    };
    GrowthCurve { points, kappa }
}

/// Least-squares slope of `ln cum` against `ln t`, ignoring points with
/// `t = 0` or `cum ≤ 0`. `None` with fewer than two usable points or no
/// spread in `t`.
pub fn fit_growth_exponent(points: &[(usize, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(t, c)| *t > 0 && *c > 0.0)
        .map(|&(t, c)| ((t as f64).ln(), c.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}
