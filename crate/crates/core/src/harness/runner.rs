use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;

use super::config::{ExperimentConfig, Prepared, OPTIMIZER_STREAM};
use super::output::write_outputs;
use super::summary::summarize;
use super::RunSummary;
use crate::diagnostics::{record_iteration, IterationRecord};
use crate::error::{Error, Result};
use crate::optim::{init, step};
use crate::rng::RngStream;

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses every available core. Never affects results.
    pub threads: Option<usize>,
    /// Overrides the config's `output_dir`. With neither set nothing is written.
    pub output_dir: Option<PathBuf>,
}

/// One seed's trajectory: records for `t = 1..=T`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeedRun {
    pub seed: u64,
    /// `F(w₀)`.
    pub initial_value: f64,
    /// `σ₀²` recorded at initialization, when the objective's σ is known.
    pub sigma0_sq: Option<f64>,
    pub records: Vec<IterationRecord>,
}

/// Runs `T` iterations for a single seed.
pub fn run_trajectory(
    prepared: &Prepared,
    seed: u64,
    alpha_scale: impl Fn(usize) -> f64,
) -> Result<SeedRun> {
    let objective = prepared.objective.as_ref();
    let mut rng = RngStream::new(seed, OPTIMIZER_STREAM);
    let w0 = prepared.initial_point(seed);
    let initial_value = objective.value(w0.as_slice());
    let mut config = prepared.optimizer;
    let base_alpha = config.alpha;
    let mut state = init(&config, w0, objective, prepared.initial_batch, &mut rng)?;
    let mut records = Vec::with_capacity(prepared.iterations);
    let mut cum = 0.0;
    for t in 0..prepared.iterations {
        config.alpha = base_alpha * alpha_scale(t);
        step(
            &mut state,
            objective,
            prepared.batch_size,
            &mut rng,
            &config,
        )?;
        let record = record_iteration(&state, objective, cum);
        cum = record.cum_z_norm;
        records.push(record);
    }
    Ok(SeedRun {
        seed,
        initial_value,
        sigma0_sq: state.sigma0_sq,
        records,
    })
}

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(Error::invalid("threads", "must be at least 1"));
        }
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| Error::invalid("threads", e.to_string()))
}

/// Runs every configured seed, in parallel, returning runs in config order.
pub fn run_trajectories(
    config: &ExperimentConfig,
    prepared: &Prepared,
    threads: Option<usize>,
) -> Result<Vec<SeedRun>> {
    let decay = config.alpha_decay.clone();
    let scale = move |t: usize| decay.as_ref().map_or(1.0, |d| d.scale_at(t));
    pool(threads)?.install(|| {
        config
            .seeds
            .par_iter()
            .map(|&seed| run_trajectory(prepared, seed, &scale))
            .collect()
    })
}

/// Runs the experiment for every seed, aggregates, evaluates the enabled
/// diagnostics and writes per-seed CSVs, `aggregate.csv` and `summary.json`
/// when an output directory is configured.
pub fn run_experiment(config: &ExperimentConfig, options: &RunOptions) -> Result<RunSummary> {
    let started = Instant::now();
    let prepared = config.prepare()?;
    let runs = run_trajectories(config, &prepared, options.threads)?;
    let mut summary = summarize(config, &prepared, &runs);
    summary.wall_clock_seconds = started.elapsed().as_secs_f64();
    if let Some(dir) = options.output_dir.as_ref().or(config.output_dir.as_ref()) {
        write_outputs(dir, &runs, &summary)?;
    }
    Ok(summary)
}

/// [`run_experiment`] for Monte-Carlo sweeps; requires at least two seeds.
pub fn run_seed_sweep(config: &ExperimentConfig, options: &RunOptions) -> Result<RunSummary> {
    if config.seeds.len() < 2 {
        return Err(Error::SweepTooFewSeeds(config.seeds.len()));
    }
    run_experiment(config, options)
}
