use crate::error::{Error, Result};
use crate::objective::{add_gaussian_noise, Constants, Objective};
use crate::rng::RngStream;

/// `F(w) = ½·wᵀDw` with positive diagonal `D` and an additive Gaussian oracle
/// whose total variance is `σ²/batch`.
///
/// Because `∇F` is linear, the estimation error of the moving average is a
/// pure noise average, which makes this the sharp test case for the variance
/// recursion.
#[derive(Clone, Debug, PartialEq)]
pub struct NoisyQuadratic {
    diag: Vec<f64>,
    sigma: f64,
}

/// Quadratic with curvatures spread evenly over `(0, curvature_max]`:
/// `Dᵢ = curvature_max·(i + 1)/dim`.
pub fn make_noisy_quadratic(dim: usize, curvature_max: f64, sigma: f64) -> Result<NoisyQuadratic> {
    if dim == 0 {
        return Err(Error::invalid("dim", "must be at least 1"));
    }
    if !(curvature_max > 0.0 && curvature_max.is_finite()) {
        return Err(Error::invalid(
            "curvature_max",
            format!("must be positive, got {curvature_max}"),
        ));
    }
    let diag = (0..dim)
        .map(|i| curvature_max * (i + 1) as f64 / dim as f64)
        .collect();
    NoisyQuadratic::with_diagonal(diag, sigma)
}

impl NoisyQuadratic {
    pub fn with_diagonal(diag: Vec<f64>, sigma: f64) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::invalid("dim", "must be at least 1"));
        }
        if let Some(d) = diag.iter().find(|d| !(**d > 0.0 && d.is_finite())) {
            return Err(Error::invalid(
                "curvature",
                format!("diagonal entries must be positive, got {d}"),
            ));
        }
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::invalid(
                "sigma",
                format!("must be non-negative, got {sigma}"),
            ));
        }
        Ok(NoisyQuadratic { diag, sigma })
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

impl Objective for NoisyQuadratic {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn value(&self, w: &[f64]) -> f64 {
        0.5 * w
            .iter()
            .zip(&self.diag)
            .map(|(x, d)| d * x * x)
            .sum::<f64>()
    }

    fn gradient(&self, w: &[f64], out: &mut [f64]) {
        for ((g, x), d) in out.iter_mut().zip(w).zip(&self.diag) {
            *g = d * x;
        }
    }

    fn sample_gradient(&self, w: &[f64], batch_size: usize, rng: &mut RngStream, out: &mut [f64]) {
        self.gradient(w, out);
        add_gaussian_noise(out, self.sigma, batch_size, rng);
    }

    fn constants(&self) -> Constants {
        Constants {
            smoothness: Some(self.diag.iter().copied().fold(0.0, f64::max)),
            hessian_lipschitz: Some(0.0),
            sigma: Some(self.sigma),
            value_lower_bound: Some(0.0),
            grad_bound: None,
        }
    }

    fn name(&self) -> &str {
        "quadratic"
    }
}
