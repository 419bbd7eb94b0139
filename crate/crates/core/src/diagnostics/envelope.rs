use serde::{Deserialize, Serialize};

use super::stats::{mean, std_error};
use super::{common_length, IterationRecord};
use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::optim::OptimizerConfig;

/// Constant of the variance recursion's Hessian-Lipschitz term.
pub const LEMMA1_C: f64 = 1944.0;

/// Minimum number of seeds for the Monte-Carlo expectation checks.
pub const MIN_ENVELOPE_SEEDS: usize = 100;

/// Monte-Carlo slack, in standard errors, for the one-sided envelope check.
const ENVELOPE_SLACK: f64 = 3.0;
/// Two-sided slack for the exact quadratic recursion.
const RECURSION_SLACK: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePoint {
    /// Record index of `e_{t+1}` in the trajectories.
    pub index: usize,
    /// Across-seed mean of `e²_{t+1}`.
    pub mean_err_sq: f64,
    /// `(1 − β/2)·mean(e²_t) + 2β²σ_m² + C·L_H²·α⁴·β^{4a−3}·mean(‖z_t‖²)`.
    pub envelope: f64,
    /// `envelope + slack − mean_err_sq`; negative means a violation.
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeReport {
    pub points: Vec<EnvelopePoint>,
    pub violation_count: usize,
    pub seeds_used: usize,
    /// True when `L_H = 0`, where the recursion for the observable error is
    /// exact and a violation is a genuine failure. Otherwise the check is
    /// advisory: `e_t` only lower-bounds the quantity the envelope controls.
    pub hard: bool,
}

fn check_seeds(n: usize) -> Result<()> {
    if n < MIN_ENVELOPE_SEEDS {
        return Err(Error::InsufficientSeeds {
            required: MIN_ENVELOPE_SEEDS,
            got: n,
        });
    }
    Ok(())
}

/// Squared floor below which differences are attributed to rounding.
fn rounding_floor(trajectories: &[Vec<IterationRecord>]) -> f64 {
    let scale = trajectories
        .iter()
        .flatten()
        .map(|r| r.z_norm.max(r.grad_norm))
        .fold(0.0, f64::max);
    (1e-12 * scale).powi(2)
}

/// Compares the across-seed mean of `e²_{t+1} = ‖z_{t+1} − ∇F(w_{t+1})‖²`
/// against the variance recursion
///
/// ```text
/// (1 − β/2)·E[e²_t] + 2β²σ_m² + C·L_H²·α⁴·β^{4a−3}·E[‖z_t‖²],   C = 1944
/// ```
///
/// at every consecutive pair of records, allowing 3 standard errors of the
/// per-seed difference.
pub fn lemma1_envelope_check(
    trajectories: &[Vec<IterationRecord>],
    config: &OptimizerConfig,
    objective: &dyn Objective,
    sigma_m: f64,
) -> Result<EnvelopeReport> {
    check_seeds(trajectories.len())?;
    let len = common_length(trajectories)?;
    let lh = objective
        .constants()
        .hessian_lipschitz
        .ok_or(Error::UnknownConstant("hessian_lipschitz"))?;
    let (alpha, beta, a) = (config.alpha, config.beta, config.a);
    let drift = LEMMA1_C * lh * lh * alpha.powi(4) * beta.powf(4.0 * a - 3.0);
    let contraction = 1.0 - beta / 2.0;
    let noise = 2.0 * beta * beta * sigma_m * sigma_m;
    let floor = rounding_floor(trajectories);

    let mut points = Vec::with_capacity(len.saturating_sub(1));
    let mut diffs = Vec::with_capacity(trajectories.len());
    let mut next_sq = Vec::with_capacity(trajectories.len());
    for index in 1..len {
        diffs.clear();
        next_sq.clear();
        let mut prev_sq = 0.0;
        let mut z_sq = 0.0;
        for traj in trajectories {
            let (prev, next) = (&traj[index - 1], &traj[index]);
            let e_next = next.est_error * next.est_error;
            let e_prev = prev.est_error * prev.est_error;
            let zz = prev.z_norm * prev.z_norm;
            next_sq.push(e_next);
            diffs.push(e_next - contraction * e_prev - drift * zz);
            prev_sq += e_prev;
            z_sq += zz;
        }
        let n = trajectories.len() as f64;
        let mean_err_sq = mean(&next_sq);
        let envelope = contraction * prev_sq / n + noise + drift * z_sq / n;
        let slack = ENVELOPE_SLACK * std_error(&diffs) + floor;
        points.push(EnvelopePoint {
            index,
            mean_err_sq,
            envelope,
            margin: envelope + slack - mean_err_sq,
        });
    }
    let violation_count = points.iter().filter(|p| p.margin < 0.0).count();
    Ok(EnvelopeReport {
        points,
        violation_count,
        seeds_used: trajectories.len(),
        hard: lh == 0.0,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecursionPoint {
    pub index: usize,
    /// `mean(e²_{t+1}) − (1−β)²·mean(e²_t) − β²σ_m²`
    pub residual: f64,
    /// Allowed `|residual|`: 4 standard errors plus a rounding floor.
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecursionReport {
    pub points: Vec<RecursionPoint>,
    pub violation_count: usize,
    pub seeds_used: usize,
}

/// Checks the exact mean-square recursion
/// `E[e²_{t+1}] = (1−β)²·E[e²_t] + β²σ_m²` that holds for Adam⁺-family runs on
/// quadratics with an additive-noise oracle of variance `σ_m²` per step.
pub fn quadratic_recursion_check(
    trajectories: &[Vec<IterationRecord>],
    beta: f64,
    sigma_m: f64,
) -> Result<RecursionReport> {
    check_seeds(trajectories.len())?;
    let len = common_length(trajectories)?;
    let keep = (1.0 - beta) * (1.0 - beta);
    let noise = beta * beta * sigma_m * sigma_m;
    let floor = rounding_floor(trajectories);
    let mut diffs = Vec::with_capacity(trajectories.len());
    let points: Vec<RecursionPoint> = (1..len)
        .map(|index| {
            diffs.clear();
            diffs.extend(trajectories.iter().map(|traj| {
                let e_next = traj[index].est_error.powi(2);
                let e_prev = traj[index - 1].est_error.powi(2);
                e_next - keep * e_prev
            }));
            RecursionPoint {
                index,
                residual: mean(&diffs) - noise,
                tolerance: RECURSION_SLACK * std_error(&diffs) + floor,
            }
        })
        .collect();
    let violation_count = points
        .iter()
        .filter(|p| p.residual.abs() > p.tolerance)
        .count();
    Ok(RecursionReport {
        points,
        violation_count,
        seeds_used: trajectories.len(),
    })
}
