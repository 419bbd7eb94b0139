use super::{average_over, Dataset};
use crate::error::{Error, Result};
use crate::objective::{Constants, Objective};
use crate::rng::RngStream;

/// Regularized binary logistic loss,
/// `F(w) = (1/n)·Σ log(1 + exp(−sᵢ·xᵢᵀw)) + (reg/2)·‖w‖²` with `sᵢ = 2yᵢ − 1`.
///
/// The stochastic oracle averages the component gradients of a mini-batch
/// drawn uniformly without replacement; batches larger than `n` use every
/// example.
#[derive(Clone, Debug)]
pub struct Logistic {
    data: Dataset,
    signs: Vec<f64>,
    reg: f64,
}

pub fn make_logistic(dataset: Dataset, reg: f64) -> Result<Logistic> {
    if !(reg >= 0.0 && reg.is_finite()) {
        return Err(Error::invalid(
            "reg",
            format!("must be non-negative, got {reg}"),
        ));
    }
    let signs = dataset
        .labels()
        .iter()
        .enumerate()
        .map(|(row, &y)| match y {
            0.0 => Ok(-1.0),
            1.0 => Ok(1.0),
            label => Err(Error::InvalidLabel {
                row,
                label,
                reason: "logistic labels must be 0 or 1",
            }),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Logistic {
        data: dataset,
        signs,
        reg,
    })
}

/// `log(1 + e^{−m})` without overflow.
fn softplus_neg(margin: f64) -> f64 {
    if margin > 0.0 {
        (-margin).exp().ln_1p()
    } else {
        -margin + margin.exp().ln_1p()
    }
}

/// `1 / (1 + e^{m})`.
fn sigmoid_neg(margin: f64) -> f64 {
    if margin > 0.0 {
        let e = (-margin).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + margin.exp())
    }
}

impl Logistic {
    pub fn dataset(&self) -> &Dataset {
        &self.data
    }

    fn margin(&self, i: usize, w: &[f64]) -> f64 {
        self.signs[i]
            * self
                .data
                .row(i)
                .iter()
                .zip(w)
                .map(|(x, w)| x * w)
                .sum::<f64>()
    }

    /// Adds the gradient of example `i` (including the regularizer) to `out`.
    fn add_example_gradient(&self, i: usize, w: &[f64], out: &mut [f64]) {
        let coef = -self.signs[i] * sigmoid_neg(self.margin(i, w));
        for ((g, x), wj) in out.iter_mut().zip(self.data.row(i)).zip(w) {
            *g += coef * x + self.reg * wj;
        }
    }
}

impl Objective for Logistic {
    fn dim(&self) -> usize {
        self.data.feature_dim()
    }

    fn value(&self, w: &[f64]) -> f64 {
        let n = self.data.len();
        let loss: f64 = (0..n).map(|i| softplus_neg(self.margin(i, w))).sum::<f64>() / n as f64;
        loss + 0.5 * self.reg * w.iter().map(|x| x * x).sum::<f64>()
    }

    fn gradient(&self, w: &[f64], out: &mut [f64]) {
        average_over(0..self.data.len(), out, |i, acc| {
            self.add_example_gradient(i, w, acc)
        });
    }

    fn sample_gradient(&self, w: &[f64], batch_size: usize, rng: &mut RngStream, out: &mut [f64]) {
        let idx = rng.sample_indices(self.data.len(), batch_size);
        average_over(idx.into_iter(), out, |i, acc| {
            self.add_example_gradient(i, w, acc)
        });
    }

    /// `L = ¼·max‖x‖² + reg`, `L_H = max‖x‖³/(6√3)` and, since each loss
    /// gradient has norm at most `‖xᵢ‖`, a single-sample `σ ≤ max‖x‖`.
    fn constants(&self) -> Constants {
        let r = self.data.max_row_norm();
        Constants {
            smoothness: Some(0.25 * r * r + self.reg),
            hessian_lipschitz: Some(r.powi(3) / (6.0 * 3f64.sqrt())),
            sigma: Some(r),
            value_lower_bound: Some(0.0),
            grad_bound: None,
        }
    }

    fn name(&self) -> &str {
        "logistic"
    }
}
