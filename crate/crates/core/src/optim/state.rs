use serde::{Deserialize, Serialize};

use super::{adamplus_step, baseline_step, OptimizerConfig};
use crate::error::{Error, Result};
use crate::objective::{oracle_sample, Objective};
use crate::rng::RngStream;
use crate::vector::ParamVector;

/// Mutable optimizer state.
///
/// For the Adam⁺ family `z` is the moving-average moment estimate. For the
/// baselines it holds the current update direction: the last gradient for SGD
/// and Adagrad, the velocity for momentum SGD, the biased first moment for Adam.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerState {
    pub t: usize,
    pub w: ParamVector,
    pub z: ParamVector,
    /// Most recent step size, 0 before the first step.
    pub eta_last: f64,
    /// `σ²/initial_batch` when the objective's σ is known.
    pub sigma0_sq: Option<f64>,
    /// Adagrad's squared-gradient sum or Adam's second moment.
    pub second_moment: Option<ParamVector>,
    /// Number of baseline updates applied; momentum and Adam buffers start
    /// empty and are seeded on the first one.
    pub baseline_steps: usize,
}

/// Initializes the state at `w0` with `z₀ = g₀(w₀)` drawn from a batch of
/// `initial_batch` samples.
pub fn init(
    config: &OptimizerConfig,
    w0: ParamVector,
    objective: &dyn Objective,
    initial_batch: usize,
    rng: &mut RngStream,
) -> Result<OptimizerState> {
    config.validate()?;
    if !w0.is_finite() {
        return Err(Error::invalid("w0", "initial point must be finite"));
    }
    let z = oracle_sample(objective, &w0, initial_batch, rng)?.gradient;
    let sigma0_sq = objective
        .constants()
        .sigma
        .map(|s| s * s / initial_batch as f64);
    Ok(OptimizerState {
        t: 0,
        w: w0,
        z,
        eta_last: 0.0,
        sigma0_sq,
        second_moment: None,
        baseline_steps: 0,
    })
}

/// Advances any optimizer kind by one iteration, sampling gradients with
/// mini-batches of `batch_size`.
pub fn step(
    state: &mut OptimizerState,
    objective: &dyn Objective,
    batch_size: usize,
    rng: &mut RngStream,
    config: &OptimizerConfig,
) -> Result<()> {
    if config.kind.is_adamplus_family() {
        adamplus_step(state, objective, batch_size, rng, config)
    } else {
        let grad = oracle_sample(objective, &state.w, batch_size, rng)?;
        baseline_step(state, &grad, config)
    }
}
