//! Run directories with a per-trial CSV log and a JSON summary.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;

use super::{ScalingReport, TrialRecord};
use crate::error::Result;

pub const TRIALS_CSV_HEADER: [&str; 7] = ["spec", "n", "trial", "seed", "method", "clique_size", "elapsed_ms"];

pub const SCHEMA_VERSION: u32 = 1;

/// Creates `<root>/<UTC timestamp>-seed<seed>/`.
pub fn run_directory(root: &Path, seed: u64) -> Result<PathBuf> {
    let stamp = chrono::Utc::now().format("%Y%m%dT%H%M%SZ");
    let dir = root.join(format!("{stamp}-seed{seed}"));
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

/// Writes one CSV row per trial. `elapsed_ms` is the only column that
/// varies between identical runs.
pub fn write_trials_csv(path: &Path, spec_tag: &str, records: &[TrialRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(TRIALS_CSV_HEADER)?;
    for r in records {
        w.write_record([
            spec_tag.to_string(),
            r.n.to_string(),
            r.trial.to_string(),
            r.seed.to_string(),
            r.method.as_str().to_string(),
            r.clique_size.to_string(),
            format!("{:.3}", r.elapsed_ms),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Summary object for a scaling report; wall-clock data sits under `meta`.
pub fn scaling_summary(report: &ScalingReport) -> serde_json::Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "spec": report.spec_tag,
        "n_grid": report.n_grid,
        "exponent": report.fitted_exponent,
        "stderr": report.exponent_stderr,
        "empirical_constant": report.empirical_constant,
        "predicted_upper": report.predicted.as_ref().map(|p| p.upper_constant),
        "predicted_lower": report.predicted.as_ref().map(|p| p.lower_constant),
        "predicted_exponent": report.predicted.as_ref().map(|p| p.exponent),
        "trials": report.trials,
        "method": report.method,
        "seed": report.seed,
        "markov_violations": report.markov_violations,
        "per_n": report.per_n,
        "version": env!("CARGO_PKG_VERSION"),
    })
}

/// Writes `trials.csv` and `summary.json` into a fresh run directory under `root`.
pub fn write_scaling_run(root: &Path, report: &ScalingReport) -> Result<PathBuf> {
    let dir = run_directory(root, report.seed)?;
    write_trials_csv(&dir.join("trials.csv"), &report.spec_tag, &report.records)?;
    let mut summary = scaling_summary(report);
    summary["meta"] = json!({ "created_utc": chrono::Utc::now().to_rfc3339() });
    fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
    Ok(dir)
}
