//! Config-driven experiment runner: seed-parallel trajectories, aggregation,
//! diagnostics and CSV / plot-data output.

mod config;
mod output;
mod runner;
mod summary;

pub use config::{
    AlphaDecay, DataSpec, Diagnostic, ExperimentConfig, InitSpec, Prepared, ProblemSpec,
    ScheduleName, ScheduleSpec,
};
pub use output::{
    aggregate_csv, emit_plot_data, format_real, seed_csv, PlotSeries, AGGREGATE_FILE,
    SEED_CSV_HEADER, SUMMARY_FILE,
};
pub use runner::{
    run_experiment, run_seed_sweep, run_trajectories, run_trajectory, RunOptions, SeedRun,
};
pub use summary::{
    AggregateSeries, DiagnosticStatus, DiagnosticVerdict, RunSummary, SeedSummary, Series,
};
