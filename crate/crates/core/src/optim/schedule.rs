use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::OptimizerConfig;

/// Iteration budget and batch sizes prescribed for a target accuracy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleParams {
    pub beta: f64,
    /// Iteration budget `T`.
    pub iterations: usize,
    /// Initial batch size `T₀`.
    pub initial_batch: usize,
    /// Per-iteration batch size `m`.
    pub batch_size: usize,
}

impl ScheduleParams {
    /// `T₀ + m·T`.
    pub fn total_oracle_calls(&self) -> u64 {
        self.initial_batch as u64 + self.batch_size as u64 * self.iterations as u64
    }
}

/// Ceiling that forgives floating-point overshoot: values within a relative
/// 1e-9 above an integer round down to it.
fn ceil_count(x: f64) -> usize {
    let c = (x * (1.0 - 1e-9)).ceil();
    c.max(1.0) as usize
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            "epsilon",
            format!("must lie in (0, 1), got {epsilon}"),
        ))
    }
}

/// Nadam⁺ (p = 2/3, a = 4/3) schedule: `β = ε^{1/2}`, `T = ⌈ε⁻²⌉`,
/// `T₀ = ⌈1/β⌉`, `m = ⌈1/β³⌉`. Order constants are taken as 1.
pub fn theorem3_schedule(epsilon: f64) -> Result<ScheduleParams> {
    check_epsilon(epsilon)?;
    let beta = epsilon.sqrt();
    Ok(ScheduleParams {
        beta,
        iterations: ceil_count(epsilon.powi(-2)),
        initial_batch: ceil_count(1.0 / beta),
        batch_size: ceil_count(beta.powi(-3)),
    })
}

/// Adam⁺ (p = 1/2, a = 4/3) schedule: `β = ε^{3/8}`, `T = ⌈ε⁻²⌉`,
/// `T₀ = ⌈ε^{−3/8}⌉`, `m = ⌈ε^{−1.625}⌉`.
pub fn appendix_e_schedule(epsilon: f64) -> Result<ScheduleParams> {
    check_epsilon(epsilon)?;
    Ok(ScheduleParams {
        beta: epsilon.powf(0.375),
        iterations: ceil_count(epsilon.powi(-2)),
        initial_batch: ceil_count(epsilon.powf(-0.375)),
        batch_size: ceil_count(epsilon.powf(-1.625)),
    })
}

impl ScheduleParams {
    /// Optimizer config matching [`theorem3_schedule`].
    pub fn theorem3_config(&self, alpha: f64) -> OptimizerConfig {
        OptimizerConfig::theorem3(alpha, self.beta)
    }

    /// Optimizer config matching [`appendix_e_schedule`].
    pub fn appendix_e_config(&self, alpha: f64) -> OptimizerConfig {
        OptimizerConfig::appendix_e(alpha, self.beta)
    }
}
