use crate::error::{Error, Result};
use crate::objective::GradientSample;
use crate::vector::ParamVector;

use super::{OptimizerConfig, OptimizerKind, OptimizerState};

/// One step of a standard baseline using a gradient sampled at `state.w`.
///
/// - SGD: `w ← w − α·g`
/// - momentum SGD: `v ← γ·v + g`, `w ← w − α·v`
/// - Adagrad: `G ← G + g²`, `w ← w − α·g / √(G + ε)`
/// - Adam: bias-corrected `m̂`, `v̂`; `w ← w − α·m̂ / (√v̂ + ε)`
pub fn baseline_step(
    state: &mut OptimizerState,
    grad: &GradientSample,
    config: &OptimizerConfig,
) -> Result<()> {
    let g = &grad.gradient;
    g.check_dim(state.w.dim())?;
    let lr = config.alpha;
    let mut w = state.w.clone();
    let (z, second) = match config.kind {
        OptimizerKind::Sgd => {
            w.axpy(-lr, g);
            (g.clone(), None)
        }
        OptimizerKind::MomentumSgd => {
            let v = if state.baseline_steps == 0 {
                g.clone()
            } else {
                ParamVector::lincomb(config.momentum, &state.z, 1.0, g)
            };
            w.axpy(-lr, &v);
            (v, None)
        }
        OptimizerKind::Adagrad => {
            let mut acc = state
                .second_moment
                .clone()
                .unwrap_or_else(|| ParamVector::zeros(g.dim()));
            for ((wi, gi), ai) in w
                .as_mut_slice()
                .iter_mut()
                .zip(g.iter())
                .zip(acc.as_mut_slice())
            {
                *ai += gi * gi;
                *wi -= lr * gi / (*ai + config.adagrad_eps).sqrt();
            }
            (g.clone(), Some(acc))
        }
        OptimizerKind::Adam => {
            let (b1, b2) = (config.adam_beta1, config.adam_beta2);
            let first = state.baseline_steps == 0;
            let mut m = if first {
                ParamVector::zeros(g.dim())
            } else {
                state.z.clone()
            };
            let mut v = state
                .second_moment
                .clone()
                .unwrap_or_else(|| ParamVector::zeros(g.dim()));
            let k = (state.baseline_steps + 1) as i32;
            let c1 = 1.0 - b1.powi(k);
            let c2 = 1.0 - b2.powi(k);
            for (((wi, gi), mi), vi) in w
                .as_mut_slice()
                .iter_mut()
                .zip(g.iter())
                .zip(m.as_mut_slice())
                .zip(v.as_mut_slice())
            {
                *mi = b1 * *mi + (1.0 - b1) * gi;
                *vi = b2 * *vi + (1.0 - b2) * gi * gi;
                let m_hat = *mi / c1;
                let v_hat = *vi / c2;
                *wi -= lr * m_hat / (v_hat.sqrt() + config.adam_eps);
            }
            (m, Some(v))
        }
        kind => {
            return Err(Error::KindMismatch {
                kind,
                operation: "baseline_step",
            })
        }
    };
    if !w.is_finite() {
        return Err(Error::NonFinite { t: state.t + 1 });
    }
    state.w = w;
    state.z = z;
    state.second_moment = second;
    state.eta_last = lr;
    state.baseline_steps += 1;
    state.t += 1;
    Ok(())
}
