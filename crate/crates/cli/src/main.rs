use std::path::PathBuf;
use std::process::ExitCode;

use adamplus_core::harness::{
    emit_plot_data, run_experiment, run_seed_sweep, ExperimentConfig, PlotSeries, RunOptions,
    RunSummary,
};
use adamplus_core::optim::{appendix_e_schedule, theorem3_schedule};
use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

const OUT_ENV: &str = "ADAMPLUS_OUT_DIR";
const DEFAULT_OUT: &str = "adamplus-out";
const EXIT_ERROR: u8 = 1;
const EXIT_HARD_FAILURE: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "adamplus",
    version,
    about = "Run Adam+ family experiments and diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run an experiment config.
    Run(RunArgs),
    /// Run an experiment config over a seed range.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Seed range, `a..b` (exclusive) or `a..=b` (inclusive).
        #[arg(long, value_parser = parse_seeds)]
        seeds: SeedRange,
    },
    /// Extract a plot series from a summary.json as `x,y,stderr` CSV.
    Plot {
        #[arg(long)]
        summary: PathBuf,
        #[arg(long, value_enum)]
        series: SeriesArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the schedule parameters for a target accuracy as JSON.
    Schedule {
        #[arg(long, value_enum)]
        theorem: TheoremArg,
        #[arg(long, allow_negative_numbers = true)]
        epsilon: f64,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Worker threads; defaults to all cores. Results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory; falls back to the config, then the environment.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SeriesArg {
    Growth,
    Convergence,
    Variance,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TheoremArg {
    #[value(name = "t3")]
    T3,
    #[value(name = "appE")]
    AppE,
}

#[derive(Clone, Copy, Debug)]
struct SeedRange {
    start: u64,
    end: u64,
}

fn parse_seeds(s: &str) -> Result<SeedRange, String> {
    let (a, b, inclusive) = if let Some((a, b)) = s.split_once("..=") {
        (a, b, true)
    } else if let Some((a, b)) = s.split_once("..") {
        (a, b, false)
    } else {
        return Err(format!("expected `a..b` or `a..=b`, got `{s}`"));
    };
    let start: u64 = a
        .trim()
        .parse()
        .map_err(|e| format!("bad range start `{a}`: {e}"))?;
    let end: u64 = b
        .trim()
        .parse()
        .map_err(|e| format!("bad range end `{b}`: {e}"))?;
    let end = if inclusive {
        end.checked_add(1).ok_or("range end overflows")?
    } else {
        end
    };
    if end <= start {
        return Err(format!("empty seed range `{s}`"));
    }
    Ok(SeedRange { start, end })
}

fn load(args: &RunArgs) -> anyhow::Result<(ExperimentConfig, RunOptions)> {
    let mut config = ExperimentConfig::from_path(&args.config)?;
    let output_dir = args
        .out
        .clone()
        .or_else(|| config.output_dir.take())
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    let options = RunOptions {
        threads: args.threads,
        output_dir: Some(output_dir),
    };
    Ok((config, options))
}

fn report(summary: &RunSummary, options: &RunOptions) {
    println!(
        "{} with {:?}: {} seeds x {} iterations in {:.2}s",
        summary.problem,
        summary.optimizer.kind,
        summary.seeds.len(),
        summary.iterations,
        summary.wall_clock_seconds
    );
    if let (Some(g), Some(f)) = (
        summary.series.grad_norm.mean.last(),
        summary.series.f_value.mean.last(),
    ) {
        println!("final mean F = {f:.6e}, mean |grad F| = {g:.6e}");
    }
    for v in &summary.verdicts {
        println!("{:?}: {:?} ({})", v.diagnostic, v.status, v.detail);
    }
    if let Some(dir) = &options.output_dir {
        println!("wrote {}", dir.display());
    }
}

fn execute(command: Command) -> anyhow::Result<u8> {
    let summary = match command {
        Command::Run(args) => {
            let (config, options) = load(&args)?;
            let summary = run_experiment(&config, &options)?;
            report(&summary, &options);
            summary
        }
        Command::Sweep { run, seeds } => {
            let (mut config, options) = load(&run)?;
            config.seeds = (seeds.start..seeds.end).collect();
            let summary = run_seed_sweep(&config, &options)?;
            report(&summary, &options);
            summary
        }
        Command::Plot {
            summary,
            series,
            out,
        } => {
            let text = std::fs::read_to_string(&summary)
                .with_context(|| format!("reading {}", summary.display()))?;
            let parsed: RunSummary = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", summary.display()))?;
            let which = match series {
                SeriesArg::Growth => PlotSeries::Growth,
                SeriesArg::Convergence => PlotSeries::Convergence,
                SeriesArg::Variance => PlotSeries::Variance,
            };
            emit_plot_data(&parsed, which, &out)?;
            return Ok(0);
        }
        Command::Schedule { theorem, epsilon } => {
            if !epsilon.is_finite() {
                bail!("epsilon must be finite");
            }
            let params = match theorem {
                TheoremArg::T3 => theorem3_schedule(epsilon)?,
                TheoremArg::AppE => appendix_e_schedule(epsilon)?,
            };
            println!("{}", serde_json::to_string_pretty(&params)?);
            return Ok(0);
        }
    };
    Ok(if summary.hard_failure() {
        EXIT_HARD_FAILURE
    } else {
        0
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
