//! Objectives with exact gradients and known constants, and dataset ingestion.

mod dataset;
mod io;
mod logistic;
mod mlp;
mod quadratic;

pub use dataset::Dataset;
pub use io::{
    load_csv, load_idx, read_idx, write_idx, IdxArray, IDX_IMAGES_MAGIC, IDX_LABELS_MAGIC,
};
pub use logistic::{make_logistic, Logistic};
pub use mlp::{make_mlp, Activation, Mlp};
pub use quadratic::{make_noisy_quadratic, NoisyQuadratic};

/// Averages per-example gradients over `indices`, writing into `out`.
pub(crate) fn average_over(
    indices: impl ExactSizeIterator<Item = usize>,
    out: &mut [f64],
    mut add_example: impl FnMut(usize, &mut [f64]),
) {
    out.fill(0.0);
    let count = indices.len();
    for i in indices {
        add_example(i, out);
    }
    let inv = 1.0 / count as f64;
    for g in out.iter_mut() {
        *g *= inv;
    }
}
