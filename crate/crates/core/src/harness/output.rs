use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use super::runner::SeedRun;
use super::summary::{RunSummary, Series};
use crate::diagnostics::IterationRecord;
use crate::error::{Error, Result};

pub const SEED_CSV_HEADER: &str = "t,f_value,grad_norm,z_norm,eta,est_error,cum_z_norm";
pub const AGGREGATE_FILE: &str = "aggregate.csv";
pub const SUMMARY_FILE: &str = "summary.json";

/// Formats a real with 17 significant digits, enough to round-trip any `f64`.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn push_record(out: &mut String, r: &IterationRecord) {
    let _ = write!(out, "{}", r.t);
    for x in [
        r.f_value,
        r.grad_norm,
        r.z_norm,
        r.eta,
        r.est_error,
        r.cum_z_norm,
    ] {
        out.push(',');
        out.push_str(&format_real(x));
    }
    out.push('\n');
}

/// Per-seed trajectory CSV.
pub fn seed_csv(records: &[IterationRecord]) -> String {
    let mut out = String::with_capacity(16 * 7 * (records.len() + 1));
    out.push_str(SEED_CSV_HEADER);
    out.push('\n');
    for r in records {
        push_record(&mut out, r);
    }
    out
}

/// Across-seed mean/stderr CSV.
pub fn aggregate_csv(summary: &RunSummary) -> String {
    let series = &summary.series;
    let columns = series.columns();
    let mut out = String::from("t");
    for (name, _) in &columns {
        let _ = write!(out, ",{name}_mean,{name}_stderr");
    }
    out.push('\n');
    for (i, t) in series.t.iter().enumerate() {
        let _ = write!(out, "{t}");
        for (_, s) in &columns {
            let _ = write!(
                out,
                ",{},{}",
                format_real(s.mean[i]),
                format_real(s.stderr[i])
            );
        }
        out.push('\n');
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_outputs(dir: &Path, runs: &[SeedRun], summary: &RunSummary) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for run in runs {
        write_file(
            &dir.join(format!("seed_{}.csv", run.seed)),
            &seed_csv(&run.records),
        )?;
    }
    write_file(&dir.join(AGGREGATE_FILE), &aggregate_csv(summary))?;
    let path = dir.join(SUMMARY_FILE);
    let mut json = serde_json::to_string_pretty(summary).map_err(|e| Error::Json {
        path: path.clone(),
        source: e,
    })?;
    json.push('\n');
    write_file(&path, &json)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotSeries {
    /// Mean `Σ_{i≤t} ‖z_i‖` against `t`.
    Growth,
    /// Mean `‖∇F(w_t)‖²` against `t`.
    Convergence,
    /// Mean squared estimation error against `t`.
    Variance,
}

impl FromStr for PlotSeries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "growth" => Ok(Self::Growth),
            "convergence" => Ok(Self::Convergence),
            "variance" => Ok(Self::Variance),
            other => Err(Error::UnknownSeries(other.to_string())),
        }
    }
}

impl PlotSeries {
    fn series(self, summary: &RunSummary) -> &Series {
        match self {
            Self::Growth => &summary.series.cum_z_norm,
            Self::Convergence => &summary.series.grad_norm_sq,
            Self::Variance => &summary.series.est_error_sq,
        }
    }
}

/// Writes `x,y,stderr` rows for the chosen series, one per iteration.
pub fn emit_plot_data(summary: &RunSummary, which: PlotSeries, path: &Path) -> Result<()> {
    let series = which.series(summary);
    let mut out = String::from("x,y,stderr\n");
    for (i, t) in summary.series.t.iter().enumerate() {
        let _ = writeln!(
            out,
            "{t},{},{}",
            format_real(series.mean[i]),
            format_real(series.stderr[i])
        );
    }
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    write_file(path, &out)
}
