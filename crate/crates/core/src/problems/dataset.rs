use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Row-major feature matrix with one label per row.
///
/// Labels are reals; classification objectives require them to be integral
/// class indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    n: usize,
    d: usize,
    features: Vec<f64>,
    labels: Vec<f64>,
}

impl Dataset {
    pub fn new(features: Vec<f64>, d: usize, labels: Vec<f64>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptyDataset);
        }
        if d == 0 || features.len() != n * d {
            return Err(Error::Shape(format!(
                "{} feature values cannot form {n} rows of width {d}",
                features.len()
            )));
        }
        if let Some(row) = features.iter().position(|x| !x.is_finite()) {
            return Err(Error::Shape(format!(
                "non-finite feature in row {}",
                row / d
            )));
        }
        Ok(Dataset {
            n,
            d,
            features,
            labels,
        })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>, labels: Vec<f64>) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != d) {
            return Err(Error::Shape(format!(
                "row {i} has {} features, expected {d}",
                rows[i].len()
            )));
        }
        if rows.len() != labels.len() {
            return Err(Error::Shape(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        Dataset::new(rows.concat(), d, labels)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn feature_dim(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.d..(i + 1) * self.d]
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn max_row_norm(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|x| x * x).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    /// Labels as class indices, erroring unless each is an integer in `0..classes`.
    pub fn class_labels(&self, classes: usize) -> Result<Vec<usize>> {
        self.labels
            .iter()
            .enumerate()
            .map(|(row, &label)| {
                if label.fract() != 0.0 || label < 0.0 || label >= classes as f64 {
                    Err(Error::InvalidLabel {
                        row,
                        label,
                        reason: "not a class index in range",
                    })
                } else {
                    Ok(label as usize)
                }
            })
            .collect()
    }

    /// Linearly separable binary data: `x ~ N(0, I/d)`, `y = 1[x·u > 0]` for a
    /// random unit direction `u`, with points inside `|x·u| < margin` resampled.
    pub fn synthetic_separable(n: usize, d: usize, margin: f64, seed: u64) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::EmptyDataset);
        }
        let mut rng = RngStream::new(seed, 0);
        let mut u: Vec<f64> = (0..d).map(|_| rng.standard_normal()).collect();
        let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        u.iter_mut().for_each(|x| *x /= norm);
        let scale = 1.0 / (d as f64).sqrt();
        let mut features = Vec::with_capacity(n * d);
        let mut labels = Vec::with_capacity(n);
        while labels.len() < n {
            let x: Vec<f64> = (0..d).map(|_| scale * rng.standard_normal()).collect();
            let proj: f64 = x.iter().zip(&u).map(|(a, b)| a * b).sum();
            if proj.abs() < margin {
                continue;
            }
            labels.push(if proj > 0.0 { 1.0 } else { 0.0 });
            features.extend(x);
        }
        Dataset::new(features, d, labels)
    }

    /// Gaussian blobs around random class centres, balanced by construction
    /// (row `i` has class `i mod classes`).
    pub fn synthetic_blobs(
        n: usize,
        d: usize,
        classes: usize,
        spread: f64,
        seed: u64,
    ) -> Result<Self> {
        if n == 0 || d == 0 || classes < 2 {
            return Err(Error::Shape(format!(
                "blobs need n, d >= 1 and at least 2 classes (n={n}, d={d}, classes={classes})"
            )));
        }
        let mut rng = RngStream::new(seed, 0);
        let centres: Vec<Vec<f64>> = (0..classes)
            .map(|_| (0..d).map(|_| rng.standard_normal()).collect())
            .collect();
        let mut features = Vec::with_capacity(n * d);
        let mut labels = Vec::with_capacity(n);
        for i in 0..n {
            let c = i % classes;
            features.extend(
                centres[c]
                    .iter()
                    .map(|m| m + spread * rng.standard_normal()),
            );
            labels.push(c as f64);
        }
        Dataset::new(features, d, labels)
    }
}
