use crate::error::{Error, Result};
use crate::vector::ParamVector;

/// Weights `ζ_k^{(t)}` for `k = 0..=t`: `(1−β)^t` for `k = 0` and
/// `β·(1−β)^{t−k}` for `k > 0`. They sum to one.
pub fn zeta_weights(t: usize, beta: f64) -> Vec<f64> {
    (0..=t)
        .map(|k| {
            let decay = (1.0 - beta).powi((t - k) as i32);
            if k == 0 {
                decay
            } else {
                beta * decay
            }
        })
        .collect()
}

/// Moving-average estimate written as an explicit weighted sum of the sampled
/// gradients. `history[0]` is the initial sample `g₀(w₀)` and `history[k]`
/// the sample at the `k`-th extrapolated point; with `t + 1` entries the
/// result is `z_t`.
pub fn closed_form_z(history: &[ParamVector], beta: f64) -> Result<ParamVector> {
    let first = history.first().ok_or(Error::EmptyHistory)?;
    let dim = first.dim();
    let weights = zeta_weights(history.len() - 1, beta);
    let mut z = ParamVector::zeros(dim);
    for (g, w) in history.iter().zip(weights) {
        g.check_dim(dim)?;
        z.axpy(w, g);
    }
    Ok(z)
}
