use serde::{Deserialize, Serialize};

use super::stats::{mean, std_error};
use super::{common_length, IterationRecord, LEMMA1_C};
use crate::error::{Error, Result};

/// Constants entering the data-dependent stationarity bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Inputs {
    /// Uniform gradient bound `G`; estimated from the trajectories when `None`.
    pub grad_bound: Option<f64>,
    /// `Δ ≥ F(w₀) − F*`.
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub a: f64,
    pub eps0: f64,
    /// `σ₀²`, variance of the initial estimate.
    pub sigma0_sq: f64,
    /// `σ_m²`, variance of each per-iteration estimate.
    pub sigmam_sq: f64,
    /// Gradient Lipschitz constant `L`.
    pub smoothness: f64,
    /// Hessian Lipschitz constant `L_H`.
    pub hessian_lipschitz: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Report {
    /// Across-seed mean of `(1/T)·Σ ‖∇F(w_t)‖²`.
    pub lhs: f64,
    /// `8G·E[Σ‖z_t‖]/T + Δ/(αT) + 18σ₀²/(βT) + 30βσ_m²`.
    pub rhs: f64,
    /// Standard error of the per-seed `lhs − 8G·Σ‖z_t‖/T`.
    pub stderr: f64,
    pub holds: bool,
    pub grad_bound: f64,
    pub grad_bound_estimated: bool,
}

/// Verifies the premises `a = 1`, `ε₀ = βᵃ`, `α ≤ 1/(4L)` and
/// `α⁴ ≤ 1/(36·C·L_H²)`, naming the first that fails.
fn check_premises(inputs: &Theorem1Inputs) -> Result<()> {
    let Theorem1Inputs {
        alpha,
        beta,
        a,
        eps0,
        smoothness,
        hessian_lipschitz,
        ..
    } = *inputs;
    if a != 1.0 {
        return Err(Error::PremisesUnmet(format!("a = 1 (got a = {a})")));
    }
    let floor = beta.powf(a);
    if (eps0 - floor).abs() > 1e-12 * floor {
        return Err(Error::PremisesUnmet(format!(
            "eps0 = beta^a (got eps0 = {eps0}, beta^a = {floor})"
        )));
    }
    if alpha > 1.0 / (4.0 * smoothness) {
        return Err(Error::PremisesUnmet(format!(
            "alpha <= 1/(4L) (alpha = {alpha}, 1/(4L) = {})",
            1.0 / (4.0 * smoothness)
        )));
    }
    let lhs = alpha.powi(4) * 36.0 * LEMMA1_C * hessian_lipschitz * hessian_lipschitz;
    if lhs > 1.0 {
        return Err(Error::PremisesUnmet(format!(
            "alpha^4 <= 1/(36 C L_H^2) (alpha^4 * 36 C L_H^2 = {lhs})"
        )));
    }
    Ok(())
}

/// Evaluates both sides of the data-dependent bound on trajectories of
/// records for `t = 1..=T`, using factor 8 on the `G·E[Σ‖z_t‖]/T` term.
///
/// When `G` is not supplied it is estimated as 1.1 times the largest observed
/// `‖∇F(w_t)‖`.
pub fn theorem1_bound_check(
    trajectories: &[Vec<IterationRecord>],
    inputs: &Theorem1Inputs,
    iterations: usize,
) -> Result<Theorem1Report> {
    check_premises(inputs)?;
    let len = common_length(trajectories)?;
    if len != iterations {
        return Err(Error::MismatchedTrajectories {
            index: 0,
            expected: iterations,
            found: len,
        });
    }
    let (grad_bound, grad_bound_estimated) = match inputs.grad_bound {
        Some(g) => (g, false),
        None => {
            let max = trajectories
                .iter()
                .flatten()
                .map(|r| r.grad_norm)
                .fold(0.0, f64::max);
            (1.1 * max, true)
        }
    };
    let t = iterations as f64;
    let per_seed_lhs: Vec<f64> = trajectories
        .iter()
        .map(|traj| traj.iter().map(|r| r.grad_norm * r.grad_norm).sum::<f64>() / t)
        .collect();
    let per_seed_growth: Vec<f64> = trajectories
        .iter()
        .map(|traj| 8.0 * grad_bound * traj.iter().map(|r| r.z_norm).sum::<f64>() / t)
        .collect();
    let diffs: Vec<f64> = per_seed_lhs
        .iter()
        .zip(&per_seed_growth)
        .map(|(l, g)| l - g)
        .collect();

    let lhs = mean(&per_seed_lhs);
    let rhs = mean(&per_seed_growth)
        + inputs.delta / (inputs.alpha * t)
        + 18.0 * inputs.sigma0_sq / (inputs.beta * t)
        + 30.0 * inputs.beta * inputs.sigmam_sq;
    let stderr = std_error(&diffs);
    Ok(Theorem1Report {
        lhs,
        rhs,
        stderr,
        holds: lhs <= rhs + 3.0 * stderr,
        grad_bound,
        grad_bound_estimated,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Metric {
    /// `(1/T)·Σ ‖∇F(w_t)‖^{3/2}`
    pub avg_grad_32: f64,
    /// `(1/T)·Σ e_t^{3/2}`
    pub avg_err_32: f64,
}

/// Ergodic `3/2`-power stationarity metric of one trajectory.
pub fn theorem2_metric(trajectory: &[IterationRecord]) -> Result<Theorem2Metric> {
    if trajectory.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    let t = trajectory.len() as f64;
    Ok(Theorem2Metric {
        avg_grad_32: trajectory
            .iter()
            .map(|r| r.grad_norm.powf(1.5))
            .sum::<f64>()
            / t,
        avg_err_32: trajectory
            .iter()
            .map(|r| r.est_error.powf(1.5))
            .sum::<f64>()
            / t,
    })
}

/// Step-size premise of the `3/2`-power rate: `640·α³·L_H^{3/2} ≤ 1/120`.
pub fn theorem2_premise(alpha: f64, hessian_lipschitz: f64) -> Result<()> {
    let lhs = 640.0 * alpha.powi(3) * hessian_lipschitz.powf(1.5);
    if lhs <= 1.0 / 120.0 {
        Ok(())
    } else {
        Err(Error::PremisesUnmet(format!(
            "640 alpha^3 L_H^1.5 <= 1/120 (got {lhs})"
        )))
    }
}
