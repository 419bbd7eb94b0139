use serde::{Deserialize, Serialize};

use super::{average_over, Dataset};
use crate::error::{Error, Result};
use crate::objective::{Constants, Objective};
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    #[default]
    Tanh,
}

/// Mean softmax cross-entropy of a small fully-connected network with tanh
/// hidden layers.
///
/// Parameters are flattened layer by layer, each layer as its weight matrix
/// (`out × in`, row-major) followed by its bias.
#[derive(Clone, Debug)]
pub struct Mlp {
    sizes: Vec<usize>,
    /// Start offset of each layer's weights in the flat vector.
    offsets: Vec<usize>,
    dim: usize,
    data: Dataset,
    labels: Vec<usize>,
}

pub const MAX_LAYERS: usize = 3;

/// `layer_sizes` lists the input width, hidden widths and class count, e.g.
/// `[784, 32, 10]`; at most three weight layers.
pub fn make_mlp(layer_sizes: &[usize], dataset: Dataset, activation: Activation) -> Result<Mlp> {
    let Activation::Tanh = activation;
    if layer_sizes.len() < 2 || layer_sizes.len() > MAX_LAYERS + 1 {
        return Err(Error::Shape(format!(
            "an MLP needs between 1 and {MAX_LAYERS} weight layers, got sizes {layer_sizes:?}"
        )));
    }
    if layer_sizes.contains(&0) {
        return Err(Error::Shape(format!("zero-width layer in {layer_sizes:?}")));
    }
    if layer_sizes[0] != dataset.feature_dim() {
        return Err(Error::Shape(format!(
            "input width {} does not match feature dimension {}",
            layer_sizes[0],
            dataset.feature_dim()
        )));
    }
    let classes = *layer_sizes.last().unwrap();
    if classes < 2 {
        return Err(Error::Shape(
            "an MLP classifier needs at least 2 classes".into(),
        ));
    }
    let labels = dataset.class_labels(classes)?;
    let mut offsets = Vec::with_capacity(layer_sizes.len() - 1);
    let mut dim = 0;
    for pair in layer_sizes.windows(2) {
        offsets.push(dim);
        dim += pair[1] * pair[0] + pair[1];
    }
    Ok(Mlp {
        sizes: layer_sizes.to_vec(),
        offsets,
        dim,
        data: dataset,
        labels,
    })
}

impl Mlp {
    pub fn layer_sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn dataset(&self) -> &Dataset {
        &self.data
    }

    /// Loss of example `i`; when `grad` is given its gradient is added to it.
    fn example(&self, i: usize, w: &[f64], grad: Option<&mut [f64]>) -> f64 {
        let layers = self.sizes.len() - 1;
        // activations[l] is the input to layer l
        let mut activations: Vec<Vec<f64>> = Vec::with_capacity(layers + 1);
        activations.push(self.data.row(i).to_vec());
        for l in 0..layers {
            let (n_in, n_out) = (self.sizes[l], self.sizes[l + 1]);
            let weights = &w[self.offsets[l]..self.offsets[l] + n_out * n_in];
            let bias = &w[self.offsets[l] + n_out * n_in..self.offsets[l] + n_out * n_in + n_out];
            let input = &activations[l];
            let mut out: Vec<f64> = (0..n_out)
                .map(|o| {
                    let row = &weights[o * n_in..(o + 1) * n_in];
                    bias[o] + row.iter().zip(input).map(|(a, b)| a * b).sum::<f64>()
                })
                .collect();
            if l + 1 < layers {
                out.iter_mut().for_each(|x| *x = x.tanh());
            }
            activations.push(out);
        }

        let logits = &activations[layers];
        let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let sum_exp: f64 = logits.iter().map(|x| (x - max).exp()).sum();
        let log_norm = max + sum_exp.ln();
        let label = self.labels[i];
        let loss = log_norm - logits[label];

        let Some(grad) = grad else {
            return loss;
        };
        let mut delta: Vec<f64> = logits.iter().map(|x| (x - log_norm).exp()).collect();
        delta[label] -= 1.0;
        for l in (0..layers).rev() {
            let (n_in, n_out) = (self.sizes[l], self.sizes[l + 1]);
            let w_off = self.offsets[l];
            let b_off = w_off + n_out * n_in;
            let input = &activations[l];
            for o in 0..n_out {
                let row = &mut grad[w_off + o * n_in..w_off + (o + 1) * n_in];
                for (g, a) in row.iter_mut().zip(input) {
                    *g += delta[o] * a;
                }
                grad[b_off + o] += delta[o];
            }
            if l > 0 {
                let weights = &w[w_off..b_off];
                delta = (0..n_in)
                    .map(|j| {
                        let back: f64 = (0..n_out).map(|o| weights[o * n_in + j] * delta[o]).sum();
                        back * (1.0 - input[j] * input[j])
                    })
                    .collect();
            }
        }
        loss
    }
}

impl Objective for Mlp {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, w: &[f64]) -> f64 {
        let n = self.data.len();
        (0..n).map(|i| self.example(i, w, None)).sum::<f64>() / n as f64
    }

    fn gradient(&self, w: &[f64], out: &mut [f64]) {
        average_over(0..self.data.len(), out, |i, acc| {
            self.example(i, w, Some(acc));
        });
    }

    fn sample_gradient(&self, w: &[f64], batch_size: usize, rng: &mut RngStream, out: &mut [f64]) {
        let idx = rng.sample_indices(self.data.len(), batch_size);
        average_over(idx.into_iter(), out, |i, acc| {
            self.example(i, w, Some(acc));
        });
    }

    /// Cross-entropy is non-negative; no smoothness constants are claimed.
    fn constants(&self) -> Constants {
        Constants {
            value_lower_bound: Some(0.0),
            ..Constants::default()
        }
    }

    fn name(&self) -> &str {
        "mlp"
    }
}
