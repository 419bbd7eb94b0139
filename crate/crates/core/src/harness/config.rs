use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::optim::{appendix_e_schedule, theorem3_schedule, OptimizerConfig, ScheduleParams};
use crate::problems::{
    load_csv, load_idx, make_logistic, make_mlp, make_noisy_quadratic, Activation, Dataset,
};
use crate::rng::RngStream;
use crate::vector::ParamVector;

/// Experiment description, read from JSON. Unknown keys are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    /// Explicit optimizer; mutually exclusive with `schedule`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimizer: Option<OptimizerConfig>,
    /// Accuracy-driven schedule filling in β, ε₀, `T`, `T₀` and `m`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleSpec>,
    /// Iteration budget `T`; taken from the schedule when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub batch_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_batch: Option<usize>,
    pub seeds: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init: Option<InitSpec>,
    #[serde(default)]
    pub diagnostics: Vec<Diagnostic>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    /// Piecewise-constant decay of α.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_decay: Option<AlphaDecay>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProblemSpec {
    Quadratic {
        dim: usize,
        #[serde(default = "one")]
        curvature_max: f64,
        #[serde(default)]
        sigma: f64,
    },
    Logistic {
        data: DataSpec,
        #[serde(default)]
        reg: f64,
    },
    Mlp {
        data: DataSpec,
        hidden: Vec<usize>,
        classes: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataSpec {
    Csv {
        path: PathBuf,
        label_column: usize,
        #[serde(default)]
        header: bool,
    },
    Idx {
        images: PathBuf,
        labels: PathBuf,
        #[serde(default)]
        limit: Option<usize>,
    },
    Separable {
        n: usize,
        d: usize,
        #[serde(default)]
        margin: f64,
        seed: u64,
    },
    Blobs {
        n: usize,
        d: usize,
        classes: usize,
        #[serde(default = "one")]
        spread: f64,
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleName {
    Theorem3,
    #[serde(alias = "appE")]
    AppendixE,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSpec {
    pub name: ScheduleName,
    pub epsilon: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

impl ScheduleSpec {
    pub fn params(&self) -> Result<ScheduleParams> {
        match self.name {
            ScheduleName::Theorem3 => theorem3_schedule(self.epsilon),
            ScheduleName::AppendixE => appendix_e_schedule(self.epsilon),
        }
    }

    pub fn optimizer(&self, params: &ScheduleParams) -> OptimizerConfig {
        match self.name {
            ScheduleName::Theorem3 => params.theorem3_config(self.alpha),
            ScheduleName::AppendixE => params.appendix_e_config(self.alpha),
        }
    }
}

/// Initial point `w₀`; Gaussian draws use the run seed on a dedicated stream.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitSpec {
    Zeros,
    Constant { value: f64 },
    Gaussian { scale: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaDecay {
    /// Iterations at which α is multiplied by `factor`.
    pub milestones: Vec<usize>,
    pub factor: f64,
}

impl AlphaDecay {
    /// Multiplier applied to α for the step taken at iteration `t`.
    pub fn scale_at(&self, t: usize) -> f64 {
        let passed = self.milestones.iter().filter(|&&m| m <= t).count();
        self.factor.powi(passed as i32)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Diagnostic {
    Lemma1,
    QuadraticRecursion,
    Theorem1,
    Theorem2,
    Growth,
}

fn one() -> f64 {
    1.0
}

fn default_alpha() -> f64 {
    0.1
}

pub(crate) const INIT_STREAM: u64 = 1;
pub(crate) const OPTIMIZER_STREAM: u64 = 0;

fn config_error(path: &str, message: impl Into<String>) -> Error {
    Error::Config {
        path: path.to_string(),
        message: message.into(),
    }
}

/// A validated experiment with its objective built and budgets resolved.
pub struct Prepared {
    pub objective: Box<dyn Objective>,
    pub optimizer: OptimizerConfig,
    pub schedule: Option<ScheduleParams>,
    pub iterations: usize,
    pub batch_size: usize,
    pub initial_batch: usize,
    pub init: InitSpec,
}

impl std::fmt::Debug for Prepared {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Prepared")
            .field("objective", &self.objective.name())
            .field("optimizer", &self.optimizer)
            .field("iterations", &self.iterations)
            .field("batch_size", &self.batch_size)
            .field("initial_batch", &self.initial_batch)
            .finish()
    }
}

impl Prepared {
    pub fn initial_point(&self, seed: u64) -> ParamVector {
        let dim = self.objective.dim();
        match self.init {
            InitSpec::Zeros => ParamVector::zeros(dim),
            InitSpec::Constant { value } => ParamVector::filled(dim, value),
            InitSpec::Gaussian { scale } => {
                let mut rng = RngStream::new(seed, INIT_STREAM);
                (0..dim)
                    .map(|_| scale * rng.standard_normal())
                    .collect::<Vec<_>>()
                    .into()
            }
        }
    }
}

impl ExperimentConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| config_error("<root>", e.to_string()))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Json {
            path: path.to_path_buf(),
            source: e,
        })
    }

    /// Checks the config and builds the objective, loading any datasets.
    pub fn prepare(&self) -> Result<Prepared> {
        if self.seeds.is_empty() {
            return Err(config_error("seeds", "at least one seed is required"));
        }
        let (optimizer, schedule) = match (&self.optimizer, &self.schedule) {
            (Some(_), Some(_)) => {
                return Err(config_error(
                    "schedule",
                    "`optimizer` and `schedule` are mutually exclusive",
                ))
            }
            (Some(opt), None) => (*opt, None),
            (None, Some(spec)) => {
                let params = spec
                    .params()
                    .map_err(|e| config_error("schedule.epsilon", e.to_string()))?;
                (spec.optimizer(&params), Some(params))
            }
            (None, None) => (OptimizerConfig::adam_plus(), None),
        };
        optimizer
            .validate()
            .map_err(|e| config_error("optimizer", e.to_string()))?;

        let iterations = self
            .iterations
            .or(schedule.map(|s| s.iterations))
            .ok_or_else(|| config_error("iterations", "required unless a schedule is given"))?;
        if iterations == 0 {
            return Err(config_error("iterations", "must be at least 1"));
        }
        let batch_size = self
            .batch_size
            .or(schedule.map(|s| s.batch_size))
            .unwrap_or(1);
        let initial_batch = self
            .initial_batch
            .or(schedule.map(|s| s.initial_batch))
            .unwrap_or(1);
        if batch_size == 0 {
            return Err(config_error("batch_size", "must be at least 1"));
        }
        if initial_batch == 0 {
            return Err(config_error("initial_batch", "must be at least 1"));
        }
        if let Some(decay) = &self.alpha_decay {
            if !(decay.factor > 0.0 && decay.factor.is_finite()) {
                return Err(config_error("alpha_decay.factor", "must be positive"));
            }
        }

        let objective = self.problem.build()?;
        let init = self.init.unwrap_or(match self.problem {
            ProblemSpec::Quadratic { .. } => InitSpec::Constant { value: 1.0 },
            ProblemSpec::Logistic { .. } => InitSpec::Zeros,
            ProblemSpec::Mlp { .. } => InitSpec::Gaussian { scale: 0.1 },
        });
        Ok(Prepared {
            objective,
            optimizer,
            schedule,
            iterations,
            batch_size,
            initial_batch,
            init,
        })
    }
}

impl ProblemSpec {
    pub fn build(&self) -> Result<Box<dyn Objective>> {
        match self {
            ProblemSpec::Quadratic {
                dim,
                curvature_max,
                sigma,
            } => Ok(Box::new(
                make_noisy_quadratic(*dim, *curvature_max, *sigma)
                    .map_err(|e| config_error("problem", e.to_string()))?,
            )),
            ProblemSpec::Logistic { data, reg } => Ok(Box::new(
                make_logistic(data.load()?, *reg)
                    .map_err(|e| config_error("problem", e.to_string()))?,
            )),
            ProblemSpec::Mlp {
                data,
                hidden,
                classes,
            } => {
                let data = data.load()?;
                let mut sizes = vec![data.feature_dim()];
                sizes.extend(hidden);
                sizes.push(*classes);
                Ok(Box::new(
                    make_mlp(&sizes, data, Activation::Tanh)
                        .map_err(|e| config_error("problem", e.to_string()))?,
                ))
            }
        }
    }
}

impl DataSpec {
    pub fn load(&self) -> Result<Dataset> {
        match self {
            DataSpec::Csv {
                path,
                label_column,
                header,
            } => load_csv(path, *label_column, *header),
            DataSpec::Idx {
                images,
                labels,
                limit,
            } => load_idx(images, labels, *limit),
            DataSpec::Separable { n, d, margin, seed } => {
                Dataset::synthetic_separable(*n, *d, *margin, *seed)
            }
            DataSpec::Blobs {
                n,
                d,
                classes,
                spread,
                seed,
            } => Dataset::synthetic_blobs(*n, *d, *classes, *spread, *seed),
        }
        .map_err(|e| match e {
            Error::Io { .. } => e,
            other => config_error("problem.data", other.to_string()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config() {
        let cfg = ExperimentConfig::from_json_str(
            r#"{"problem":{"kind":"quadratic","dim":3},"iterations":5,"seeds":[1]}"#,
        )
        .unwrap();
        let p = cfg.prepare().unwrap();
        assert_eq!(p.optimizer, OptimizerConfig::adam_plus());
        assert_eq!((p.iterations, p.batch_size, p.initial_batch), (5, 1, 1));
        assert_eq!(p.initial_point(1), ParamVector::filled(3, 1.0));
    }

    #[test]
    fn unknown_keys_are_errors() {
        for text in [
            r#"{"problem":{"kind":"quadratic","dim":3},"iterations":5,"seeds":[1],"iteratoins":3}"#,
            r#"{"problem":{"kind":"quadratic","dim":3,"sigm":1},"iterations":5,"seeds":[1]}"#,
            r#"{"problem":{"kind":"quadratic","dim":3},"optimizer":{"bta":0.1},"iterations":5,"seeds":[1]}"#,
        ] {
            assert!(ExperimentConfig::from_json_str(text).is_err(), "{text}");
        }
    }

    #[test]
    fn schedule_fills_budget() {
        let cfg = ExperimentConfig::from_json_str(
            r#"{"problem":{"kind":"quadratic","dim":3,"sigma":1},
                "schedule":{"name":"theorem3","epsilon":0.04,"alpha":0.5},
                "seeds":[1,2]}"#,
        )
        .unwrap();
        let p = cfg.prepare().unwrap();
        assert_eq!((p.iterations, p.initial_batch, p.batch_size), (625, 5, 125));
        assert_eq!(
            p.optimizer,
            OptimizerConfig::theorem3(0.5, p.schedule.unwrap().beta)
        );
    }

    #[test]
    fn validation_errors_name_fields() {
        let cases = [
            (
                r#"{"problem":{"kind":"quadratic","dim":3},"iterations":5,"seeds":[]}"#,
                "seeds",
            ),
            (
                r#"{"problem":{"kind":"quadratic","dim":3},"iterations":0,"seeds":[1]}"#,
                "iterations",
            ),
            (
                r#"{"problem":{"kind":"quadratic","dim":3},"seeds":[1]}"#,
                "iterations",
            ),
            (
                r#"{"problem":{"kind":"quadratic","dim":3},"iterations":2,"seeds":[1],"optimizer":{"alpha":-1}}"#,
                "optimizer",
            ),
            (
                r#"{"problem":{"kind":"quadratic","dim":3},"seeds":[1],"optimizer":{},"schedule":{"name":"theorem3","epsilon":0.1}}"#,
                "schedule",
            ),
        ];
        for (text, field) in cases {
            let err = ExperimentConfig::from_json_str(text)
                .unwrap()
                .prepare()
                .unwrap_err();
            match err {
                Error::Config { path, .. } => assert!(path.starts_with(field), "{path} vs {field}"),
                other => panic!("unexpected {other}"),
            }
        }
    }

    #[test]
    fn missing_dataset_is_io_error() {
        let cfg = ExperimentConfig::from_json_str(
            r#"{"problem":{"kind":"logistic","data":{"source":"csv","path":"/nonexistent.csv","label_column":0}},
                "iterations":2,"seeds":[1]}"#,
        )
        .unwrap();
        assert!(matches!(cfg.prepare(), Err(Error::Io { .. })));
    }

    #[test]
    fn alpha_decay_steps() {
        let d = AlphaDecay {
            milestones: vec![10, 20],
            factor: 0.1,
        };
        assert_eq!(d.scale_at(9), 1.0);
        assert!((d.scale_at(10) - 0.1).abs() < 1e-15);
        assert!((d.scale_at(25) - 0.01).abs() < 1e-15);
    }
}
