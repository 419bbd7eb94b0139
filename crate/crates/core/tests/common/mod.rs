#![allow(dead_code)]

use std::sync::Mutex;

use adamplus_core::harness::{Diagnostic, ExperimentConfig, InitSpec, ProblemSpec};
use adamplus_core::objective::Constants;
use adamplus_core::optim::OptimizerConfig;
use adamplus_core::{Objective, ParamVector, RngStream};

/// Wraps an objective and records every point queried through the
/// stochastic oracle together with the sample it returned.
pub struct Recording<O> {
    pub inner: O,
    pub log: Mutex<Vec<(ParamVector, ParamVector)>>,
}

impl<O> Recording<O> {
    pub fn new(inner: O) -> Self {
        Self {
            inner,
            log: Mutex::new(Vec::new()),
        }
    }

    pub fn points(&self) -> Vec<ParamVector> {
        self.log
            .lock()
            .unwrap()
            .iter()
            .map(|(w, _)| w.clone())
            .collect()
    }

    pub fn samples(&self) -> Vec<ParamVector> {
        self.log
            .lock()
            .unwrap()
            .iter()
            .map(|(_, g)| g.clone())
            .collect()
    }
}

impl<O: Objective> Objective for Recording<O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn value(&self, w: &[f64]) -> f64 {
        self.inner.value(w)
    }

    fn gradient(&self, w: &[f64], out: &mut [f64]) {
        self.inner.gradient(w, out)
    }

    fn sample_gradient(&self, w: &[f64], batch_size: usize, rng: &mut RngStream, out: &mut [f64]) {
        self.inner.sample_gradient(w, batch_size, rng, out);
        self.log
            .lock()
            .unwrap()
            .push((ParamVector::from(w), ParamVector::from(&*out)));
    }

    fn constants(&self) -> Constants {
        self.inner.constants()
    }

    fn name(&self) -> &str {
        self.inner.name()
    }
}

pub struct Setup {
    pub problem: ProblemSpec,
    pub optimizer: OptimizerConfig,
    pub iterations: usize,
    pub batch_size: usize,
    pub initial_batch: usize,
    pub seeds: Vec<u64>,
    pub diagnostics: Vec<Diagnostic>,
    pub init: Option<InitSpec>,
}

impl Setup {
    pub fn quadratic(
        dim: usize,
        curvature_max: f64,
        sigma: f64,
        optimizer: OptimizerConfig,
    ) -> Self {
        Setup {
            problem: ProblemSpec::Quadratic {
                dim,
                curvature_max,
                sigma,
            },
            optimizer,
            iterations: 100,
            batch_size: 1,
            initial_batch: 1,
            seeds: vec![0],
            diagnostics: Vec::new(),
            init: None,
        }
    }

    pub fn config(self) -> ExperimentConfig {
        ExperimentConfig {
            problem: self.problem,
            optimizer: Some(self.optimizer),
            schedule: None,
            iterations: Some(self.iterations),
            batch_size: Some(self.batch_size),
            initial_batch: Some(self.initial_batch),
            seeds: self.seeds,
            init: self.init,
            diagnostics: self.diagnostics,
            output_dir: None,
            alpha_decay: None,
        }
    }
}

/// Sample mean and standard error of the mean.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

/// Uniform point in `[-scale, scale]^dim`.
pub fn random_point(rng: &mut RngStream, dim: usize, scale: f64) -> ParamVector {
    (0..dim)
        .map(|_| scale * (2.0 * rng.uniform() - 1.0))
        .collect::<Vec<_>>()
        .into()
}
