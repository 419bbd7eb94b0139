use serde::{Deserialize, Serialize};

use crate::objective::Objective;
use crate::optim::OptimizerState;

/// Per-iteration metrics, computed with exact gradients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub t: usize,
    pub f_value: f64,
    /// `‖∇F(w_t)‖`
    pub grad_norm: f64,
    /// `‖z_t‖`
    pub z_norm: f64,
    /// Step size of the most recent update.
    pub eta: f64,
    /// `‖z_t − ∇F(w_t)‖`
    pub est_error: f64,
    /// `Σ_{i≤t} ‖z_i‖`
    pub cum_z_norm: f64,
}

/// Measures `state` against `objective`, extending the running `Σ‖z_i‖` from
/// `prev_cum`. The state's dimension must match the objective's.
pub fn record_iteration(
    state: &OptimizerState,
    objective: &dyn Objective,
    prev_cum: f64,
) -> IterationRecord {
    let w = state.w.as_slice();
    let mut grad = vec![0.0; w.len()];
    objective.gradient(w, &mut grad);
    let grad_norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
    let est_error = grad
        .iter()
        .zip(state.z.iter())
        .map(|(g, z)| (z - g) * (z - g))
        .sum::<f64>()
        .sqrt();
    let z_norm = state.z.norm();
    IterationRecord {
        t: state.t,
        f_value: objective.value(w),
        grad_norm,
        z_norm,
        eta: state.eta_last,
        est_error,
        cum_z_norm: prev_cum + z_norm,
    }
}
