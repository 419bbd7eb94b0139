use serde::{Deserialize, Serialize};

use super::config::{Diagnostic, ExperimentConfig, Prepared};
use super::runner::SeedRun;
use crate::diagnostics::stats::{mean, mean_and_stderr};
use crate::diagnostics::{
    growth_curve, lemma1_envelope_check, quadratic_recursion_check, theorem1_bound_check,
    theorem2_metric, theorem2_premise, EnvelopeReport, IterationRecord, RecursionReport,
    Theorem1Inputs, Theorem1Report, Theorem2Metric,
};
use crate::optim::OptimizerConfig;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
}

/// Across-seed mean and standard error of every recorded metric, per `t`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AggregateSeries {
    pub t: Vec<usize>,
    pub f_value: Series,
    pub grad_norm: Series,
    pub grad_norm_sq: Series,
    pub z_norm: Series,
    pub eta: Series,
    pub est_error: Series,
    pub est_error_sq: Series,
    pub cum_z_norm: Series,
}

impl AggregateSeries {
    /// Column stems in aggregate-CSV order.
    pub fn columns(&self) -> [(&'static str, &Series); 8] {
        [
            ("f_value", &self.f_value),
            ("grad_norm", &self.grad_norm),
            ("grad_norm_sq", &self.grad_norm_sq),
            ("z_norm", &self.z_norm),
            ("eta", &self.eta),
            ("est_error", &self.est_error),
            ("est_error_sq", &self.est_error_sq),
            ("cum_z_norm", &self.cum_z_norm),
        ]
    }

    fn from_runs(runs: &[SeedRun]) -> Self {
        let len = runs.first().map_or(0, |r| r.records.len());
        let mut out = AggregateSeries {
            t: runs
                .first()
                .map(|r| r.records.iter().map(|rec| rec.t).collect())
                .unwrap_or_default(),
            ..Default::default()
        };
        type Metric<'a> = (fn(&IterationRecord) -> f64, &'a mut Series);
        let metrics: [Metric<'_>; 8] = [
            (|r| r.f_value, &mut out.f_value),
            (|r| r.grad_norm, &mut out.grad_norm),
            (|r| r.grad_norm * r.grad_norm, &mut out.grad_norm_sq),
            (|r| r.z_norm, &mut out.z_norm),
            (|r| r.eta, &mut out.eta),
            (|r| r.est_error, &mut out.est_error),
            (|r| r.est_error * r.est_error, &mut out.est_error_sq),
            (|r| r.cum_z_norm, &mut out.cum_z_norm),
        ];
        let mut values = Vec::with_capacity(runs.len());
        for (get, series) in metrics {
            for i in 0..len {
                values.clear();
                values.extend(runs.iter().map(|r| get(&r.records[i])));
                let (m, se) = mean_and_stderr(&values);
                series.mean.push(m);
                series.stderr.push(se);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedSummary {
    pub seed: u64,
    pub final_record: IterationRecord,
    pub theorem2: Theorem2Metric,
    pub growth_kappa: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticStatus {
    Pass,
    /// A hard check failed.
    Fail,
    /// An advisory check was violated; not a failure.
    Advisory,
    /// Informational measurement without a verdict.
    Info,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticVerdict {
    pub diagnostic: Diagnostic,
    pub status: DiagnosticStatus,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub problem: String,
    pub optimizer: OptimizerConfig,
    pub iterations: usize,
    pub batch_size: usize,
    pub initial_batch: usize,
    pub seeds: Vec<u64>,
    pub per_seed: Vec<SeedSummary>,
    pub series: AggregateSeries,
    pub verdicts: Vec<DiagnosticVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemma1: Option<EnvelopeReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadratic_recursion: Option<RecursionReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem1: Option<Theorem1Report>,
    pub wall_clock_seconds: f64,
}

impl RunSummary {
    pub fn hard_failure(&self) -> bool {
        self.verdicts
            .iter()
            .any(|v| v.status == DiagnosticStatus::Fail)
    }

    pub fn verdict(&self, diagnostic: Diagnostic) -> Option<&DiagnosticVerdict> {
        self.verdicts.iter().find(|v| v.diagnostic == diagnostic)
    }
}

pub(crate) fn summarize(
    config: &ExperimentConfig,
    prepared: &Prepared,
    runs: &[SeedRun],
) -> RunSummary {
    let per_seed = runs
        .iter()
        .map(|run| SeedSummary {
            seed: run.seed,
            final_record: *run.records.last().expect("iterations >= 1"),
            theorem2: theorem2_metric(&run.records).expect("non-empty trajectory"),
            growth_kappa: growth_curve(&run.records).kappa,
        })
        .collect::<Vec<_>>();

    let mut summary = RunSummary {
        problem: prepared.objective.name().to_string(),
        optimizer: prepared.optimizer,
        iterations: prepared.iterations,
        batch_size: prepared.batch_size,
        initial_batch: prepared.initial_batch,
        seeds: config.seeds.clone(),
        per_seed,
        series: AggregateSeries::from_runs(runs),
        verdicts: Vec::new(),
        lemma1: None,
        quadratic_recursion: None,
        theorem1: None,
        wall_clock_seconds: 0.0,
    };

    let mut enabled = config.diagnostics.clone();
    enabled.sort();
    enabled.dedup();
    let trajectories: Vec<Vec<IterationRecord>> = if enabled.is_empty() {
        Vec::new()
    } else {
        runs.iter().map(|r| r.records.clone()).collect()
    };
    for diagnostic in enabled {
        let verdict = evaluate(diagnostic, prepared, runs, &trajectories, &mut summary);
        summary.verdicts.push(verdict);
    }
    summary
}

fn skipped(diagnostic: Diagnostic, detail: impl Into<String>) -> DiagnosticVerdict {
    DiagnosticVerdict {
        diagnostic,
        status: DiagnosticStatus::Skipped,
        detail: detail.into(),
    }
}

fn evaluate(
    diagnostic: Diagnostic,
    prepared: &Prepared,
    runs: &[SeedRun],
    trajectories: &[Vec<IterationRecord>],
    summary: &mut RunSummary,
) -> DiagnosticVerdict {
    let objective = prepared.objective.as_ref();
    let constants = objective.constants();
    let config = &prepared.optimizer;
    let adamplus = config.kind.is_adamplus_family();
    let sigma_m = constants
        .sigma
        .map(|s| s / (prepared.batch_size as f64).sqrt());
    match diagnostic {
        Diagnostic::Lemma1 => {
            let Some(sigma_m) = sigma_m.filter(|_| adamplus) else {
                return skipped(
                    diagnostic,
                    "needs an Adam+ family optimizer and a known sigma",
                );
            };
            match lemma1_envelope_check(trajectories, config, objective, sigma_m) {
                Err(e) => skipped(diagnostic, e.to_string()),
                Ok(report) => {
                    let status = match (report.violation_count, report.hard) {
                        (0, _) => DiagnosticStatus::Pass,
                        (_, true) => DiagnosticStatus::Fail,
                        (_, false) => DiagnosticStatus::Advisory,
                    };
                    let detail = format!(
                        "{} violations over {} steps with {} seeds",
                        report.violation_count,
                        report.points.len(),
                        report.seeds_used
                    );
                    summary.lemma1 = Some(report);
                    DiagnosticVerdict {
                        diagnostic,
                        status,
                        detail,
                    }
                }
            }
        }
        Diagnostic::QuadraticRecursion => {
            let linear = constants.hessian_lipschitz == Some(0.0);
            let Some(sigma_m) = sigma_m.filter(|_| adamplus && linear) else {
                return skipped(
                    diagnostic,
                    "needs an Adam+ family optimizer on a quadratic with known sigma",
                );
            };
            match quadratic_recursion_check(trajectories, config.beta, sigma_m) {
                Err(e) => skipped(diagnostic, e.to_string()),
                Ok(report) => {
                    let status = if report.violation_count == 0 {
                        DiagnosticStatus::Pass
                    } else {
                        DiagnosticStatus::Fail
                    };
                    let detail = format!(
                        "{} violations over {} steps with {} seeds",
                        report.violation_count,
                        report.points.len(),
                        report.seeds_used
                    );
                    summary.quadratic_recursion = Some(report);
                    DiagnosticVerdict {
                        diagnostic,
                        status,
                        detail,
                    }
                }
            }
        }
        Diagnostic::Theorem1 => {
            let (Some(l), Some(lh), Some(sigma), Some(lb)) = (
                constants.smoothness,
                constants.hessian_lipschitz,
                constants.sigma,
                constants.value_lower_bound,
            ) else {
                return skipped(
                    diagnostic,
                    "objective constants L, L_H, sigma or F* unknown",
                );
            };
            if !adamplus {
                return skipped(diagnostic, "needs an Adam+ family optimizer");
            }
            let delta = runs
                .iter()
                .map(|r| r.initial_value - lb)
                .fold(0.0, f64::max);
            let inputs = Theorem1Inputs {
                grad_bound: constants.grad_bound,
                delta,
                alpha: config.alpha,
                beta: config.beta,
                a: config.a,
                eps0: config.eps0,
                sigma0_sq: sigma * sigma / prepared.initial_batch as f64,
                sigmam_sq: sigma * sigma / prepared.batch_size as f64,
                smoothness: l,
                hessian_lipschitz: lh,
            };
            match theorem1_bound_check(trajectories, &inputs, prepared.iterations) {
                Err(e) => skipped(diagnostic, e.to_string()),
                Ok(report) => {
                    let status = if report.holds {
                        DiagnosticStatus::Pass
                    } else {
                        DiagnosticStatus::Fail
                    };
                    let detail = format!(
                        "lhs {:.6e} vs rhs {:.6e} (stderr {:.3e}, G {:.4e}{})",
                        report.lhs,
                        report.rhs,
                        report.stderr,
                        report.grad_bound,
                        if report.grad_bound_estimated {
                            " estimated"
                        } else {
                            ""
                        }
                    );
                    summary.theorem1 = Some(report);
                    DiagnosticVerdict {
                        diagnostic,
                        status,
                        detail,
                    }
                }
            }
        }
        Diagnostic::Theorem2 => {
            let grad: Vec<f64> = summary
                .per_seed
                .iter()
                .map(|s| s.theorem2.avg_grad_32)
                .collect();
            let err: Vec<f64> = summary
                .per_seed
                .iter()
                .map(|s| s.theorem2.avg_err_32)
                .collect();
            DiagnosticVerdict {
                diagnostic,
                status: DiagnosticStatus::Info,
                detail: format!(
                    "mean (1/T)Σ‖∇F‖^1.5 = {:.6e}, mean (1/T)Σ e^1.5 = {:.6e}; {}",
                    mean(&grad),
                    mean(&err),
                    match constants
                        .hessian_lipschitz
                        .map(|lh| theorem2_premise(config.alpha, lh))
                    {
                        None => "premise not checked: L_H unknown".to_string(),
                        Some(Ok(())) => "premise met".to_string(),
                        Some(Err(e)) => e.to_string(),
                    }
                ),
            }
        }
        Diagnostic::Growth => {
            let kappas: Vec<f64> = summary
                .per_seed
                .iter()
                .filter_map(|s| s.growth_kappa)
                .collect();
            if kappas.is_empty() {
                return skipped(diagnostic, "trajectory too short for an exponent fit");
            }
            DiagnosticVerdict {
                diagnostic,
                status: DiagnosticStatus::Info,
                detail: format!(
                    "mean tail exponent {:.4} over {} seeds",
                    mean(&kappas),
                    kappas.len()
                ),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn summary(statuses: &[DiagnosticStatus]) -> RunSummary {
        RunSummary {
            problem: "quadratic".into(),
            optimizer: OptimizerConfig::default(),
            iterations: 1,
            batch_size: 1,
            initial_batch: 1,
            seeds: vec![0],
            per_seed: Vec::new(),
            series: AggregateSeries::default(),
            verdicts: statuses
                .iter()
                .map(|&status| DiagnosticVerdict {
                    diagnostic: Diagnostic::Theorem1,
                    status,
                    detail: String::new(),
                })
                .collect(),
            lemma1: None,
            quadratic_recursion: None,
            theorem1: None,
            wall_clock_seconds: 0.0,
        }
    }

    #[test]
    fn only_fail_is_hard() {
        use DiagnosticStatus::*;
        assert!(!summary(&[Pass, Advisory, Info, Skipped]).hard_failure());
        assert!(summary(&[Pass, Fail]).hard_failure());
    }
}
