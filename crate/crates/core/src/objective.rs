//! The objective abstraction and its first-order oracles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::vector::ParamVector;

/// Analytic constants an objective can vouch for. `None` means unknown.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    /// Gradient Lipschitz constant `L`.
    pub smoothness: Option<f64>,
    /// Hessian Lipschitz constant `L_H`.
    pub hessian_lipschitz: Option<f64>,
    /// Single-sample oracle noise scale: `E‖g(w) − ∇F(w)‖² ≤ σ²`.
    pub sigma: Option<f64>,
    /// A lower bound on `inf F`, used to bound `Δ = F(w₀) − F*`.
    pub value_lower_bound: Option<f64>,
    /// Uniform bound `G` on `‖∇F‖`.
    pub grad_bound: Option<f64>,
}

/// A differentiable objective with exact-gradient access and a seedable
/// stochastic-gradient oracle.
///
/// Implementations are pure: `value` and `gradient` must be deterministic,
/// and `sample_gradient` may only depend on its inputs and the rng state.
/// Slices passed in always have length `dim()`; the checked entry points are
/// the free functions [`value`], [`exact_gradient`] and [`oracle_sample`].
pub trait Objective: Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, w: &[f64]) -> f64;

    fn gradient(&self, w: &[f64], out: &mut [f64]);

    /// Unbiased estimate of `∇F(w)` from a mini-batch of `batch_size` draws.
    fn sample_gradient(&self, w: &[f64], batch_size: usize, rng: &mut RngStream, out: &mut [f64]);

    fn constants(&self) -> Constants;

    fn name(&self) -> &str;
}

/// Adds isotropic Gaussian noise whose total variance is `σ²/batch_size`.
pub fn add_gaussian_noise(out: &mut [f64], sigma: f64, batch_size: usize, rng: &mut RngStream) {
    if sigma == 0.0 {
        return;
    }
    let std = sigma / ((out.len() * batch_size) as f64).sqrt();
    for g in out.iter_mut() {
        *g += std * rng.standard_normal();
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradientSample {
    pub gradient: ParamVector,
    pub batch_size: usize,
}

pub fn value(objective: &dyn Objective, point: &ParamVector) -> Result<f64> {
    point.check_dim(objective.dim())?;
    Ok(objective.value(point.as_slice()))
}

pub fn exact_gradient(objective: &dyn Objective, point: &ParamVector) -> Result<ParamVector> {
    point.check_dim(objective.dim())?;
    let mut out = ParamVector::zeros(point.dim());
    objective.gradient(point.as_slice(), out.as_mut_slice());
    Ok(out)
}

pub fn oracle_sample(
    objective: &dyn Objective,
    point: &ParamVector,
    batch_size: usize,
    rng: &mut RngStream,
) -> Result<GradientSample> {
    point.check_dim(objective.dim())?;
    if batch_size == 0 {
        return Err(Error::ZeroBatch);
    }
    let mut out = ParamVector::zeros(point.dim());
    objective.sample_gradient(point.as_slice(), batch_size, rng, out.as_mut_slice());
    Ok(GradientSample {
        gradient: out,
        batch_size,
    })
}

/// Central differences `(F(w + h·eᵢ) − F(w − h·eᵢ)) / 2h`.
pub fn finite_diff_gradient(
    objective: &dyn Objective,
    point: &ParamVector,
    h: f64,
) -> Result<ParamVector> {
    point.check_dim(objective.dim())?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid("h", format!("must be positive, got {h}")));
    }
    let mut probe = point.as_slice().to_vec();
    let mut out = ParamVector::zeros(point.dim());
    for i in 0..probe.len() {
        let orig = probe[i];
        probe[i] = orig + h;
        let plus = objective.value(&probe);
        probe[i] = orig - h;
        let minus = objective.value(&probe);
        probe[i] = orig;
        out[i] = (plus - minus) / (2.0 * h);
    }
    Ok(out)
}

/// `‖exact − fd‖ / max(1, ‖exact‖)`.
pub fn gradient_check_error(objective: &dyn Objective, point: &ParamVector, h: f64) -> Result<f64> {
    let exact = exact_gradient(objective, point)?;
    let fd = finite_diff_gradient(objective, point, h)?;
    Ok(exact.distance(&fd) / exact.norm().max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Constant;

    impl Objective for Constant {
        fn dim(&self) -> usize {
            3
        }
        fn value(&self, _w: &[f64]) -> f64 {
            4.2
        }
        fn gradient(&self, _w: &[f64], out: &mut [f64]) {
            out.fill(0.0);
        }
        fn sample_gradient(&self, w: &[f64], _b: usize, _rng: &mut RngStream, out: &mut [f64]) {
            self.gradient(w, out)
        }
        fn constants(&self) -> Constants {
            Constants::default()
        }
        fn name(&self) -> &str {
            "constant"
        }
    }

    #[test]
    fn constant_objective_has_zero_fd_gradient() {
        let g =
            finite_diff_gradient(&Constant, &ParamVector::new(vec![1.0, -2.0, 3.0]), 1e-5).unwrap();
        assert_eq!(g, ParamVector::zeros(3));
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = ParamVector::zeros(2);
        assert!(matches!(
            exact_gradient(&Constant, &p),
            Err(Error::DimensionMismatch {
                expected: 3,
                actual: 2
            })
        ));
        let p = ParamVector::zeros(3);
        let mut rng = RngStream::new(0, 0);
        assert!(matches!(
            oracle_sample(&Constant, &p, 0, &mut rng),
            Err(Error::ZeroBatch)
        ));
        assert!(finite_diff_gradient(&Constant, &p, 0.0).is_err());
    }
}
