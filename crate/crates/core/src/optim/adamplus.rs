use crate::error::{Error, Result};
use crate::objective::{oracle_sample, Objective};
use crate::rng::RngStream;
use crate::vector::ParamVector;

use super::{OptimizerConfig, OptimizerKind, OptimizerState};

/// `η = α·βᵃ / max(‖z‖ᵖ, ε₀)`.
///
/// Adam⁺ always uses p = 1/2; Nadam⁺ uses `config.p`.
pub fn step_size(z: &ParamVector, config: &OptimizerConfig) -> Result<f64> {
    let p = match config.kind {
        OptimizerKind::AdamPlus => 0.5,
        _ => config.p,
    };
    let norm = z.norm();
    let denom = if p == 0.5 { norm.sqrt() } else { norm.powf(p) }.max(config.eps0);
    if denom == 0.0 {
        return Err(Error::DegenerateStepSize);
    }
    Ok(config.alpha * config.beta.powf(config.a) / denom)
}

/// `(1 − 1/β)·w_t + (1/β)·w_next`.
pub fn extrapolate(w_t: &ParamVector, w_next: &ParamVector, beta: f64) -> Result<ParamVector> {
    w_next.check_dim(w_t.dim())?;
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::invalid(
            "beta",
            format!("must lie in (0, 1], got {beta}"),
        ));
    }
    let inv = 1.0 / beta;
    Ok(ParamVector::lincomb(1.0 - inv, w_t, inv, w_next))
}

/// `(1 − β)·z + β·g`.
pub fn ema_update(z: &ParamVector, g: &ParamVector, beta: f64) -> Result<ParamVector> {
    g.check_dim(z.dim())?;
    Ok(ParamVector::lincomb(1.0 - beta, z, beta, g))
}

/// One Adam⁺/Nadam⁺ iteration:
///
/// ```text
/// η_t     = α·βᵃ / max(‖z_t‖ᵖ, ε₀)
/// w_{t+1} = w_t − η_t·z_t
/// ŵ_{t+1} = (1 − 1/β)·w_t + (1/β)·w_{t+1}
/// z_{t+1} = (1 − β)·z_t + β·g_{t+1}(ŵ_{t+1})
/// ```
///
/// The state is left untouched if any part of the step fails.
pub fn adamplus_step(
    state: &mut OptimizerState,
    objective: &dyn Objective,
    batch_size: usize,
    rng: &mut RngStream,
    config: &OptimizerConfig,
) -> Result<()> {
    if !config.kind.is_adamplus_family() {
        return Err(Error::KindMismatch {
            kind: config.kind,
            operation: "adamplus_step",
        });
    }
    let eta = step_size(&state.z, config)?;
    let mut w_next = state.w.clone();
    w_next.axpy(-eta, &state.z);
    let w_hat = extrapolate(&state.w, &w_next, config.beta)?;
    let sample = oracle_sample(objective, &w_hat, batch_size, rng)?;
    let z_next = ema_update(&state.z, &sample.gradient, config.beta)?;
    if !w_next.is_finite() || !z_next.is_finite() {
        return Err(Error::NonFinite { t: state.t + 1 });
    }
    state.w = w_next;
    state.z = z_next;
    state.eta_last = eta;
    state.t += 1;
    Ok(())
}
