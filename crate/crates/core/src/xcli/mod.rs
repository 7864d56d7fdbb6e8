//! Experiment runner: configuration, deterministic sweeps and their
//! artifacts (`results.csv`, `report.json`, `plot.svg`).

pub mod config;
pub mod experiments;
pub mod plot;

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

pub use config::{check, load, suggestions, validate, Experiment, ExperimentConfig, Issue, IssueKind};
pub use experiments::{run_experiment, Check, Comparator, Outcome, Table};
pub use plot::{Plot, Series};

use crate::{Error, Result};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_TOLERANCE: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;

/// Exit status for an error raised while loading or running.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::ConfigInvalid(_) | Error::FileUnreadable { .. } => EXIT_CONFIG,
        _ => EXIT_ERROR,
    }
}

#[derive(Serialize)]
struct Report<'a> {
    experiment: Experiment,
    config: &'a ExperimentConfig,
    seed: u64,
    checks: &'a [Check],
    pass: bool,
    generated_unix: u64,
}

/// Paths of the artifacts written by one run.
#[derive(Clone, Debug)]
pub struct Artifacts {
    pub dir: PathBuf,
    pub results: PathBuf,
    pub report: PathBuf,
    pub plot: Option<PathBuf>,
}

/// Write `results.csv`, `report.json` and, for sweeps, `plot.svg`.
/// Only `report.json` carries a timestamp.
pub fn write_artifacts(config: &ExperimentConfig, outcome: &Outcome, dir: &Path) -> Result<Artifacts> {
    std::fs::create_dir_all(dir)?;
    let results = dir.join("results.csv");
    outcome.table.write_csv(std::fs::File::create(&results)?)?;
    let report = dir.join("report.json");
    let generated_unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let body = Report {
        experiment: outcome.experiment,
        config,
        seed: config.seed,
        checks: &outcome.checks,
        pass: outcome.pass(),
        generated_unix,
    };
    std::fs::write(&report, serde_json::to_string_pretty(&body)? + "\n")?;
    let plot = match &outcome.plot {
        Some(p) => {
            let path = dir.join("plot.svg");
            std::fs::write(&path, p.to_svg())?;
            Some(path)
        }
        None => None,
    };
    Ok(Artifacts {
        dir: dir.to_path_buf(),
        results,
        report,
        plot,
    })
}

/// Load, apply overrides, run and persist. Returns the outcome and where
/// it was written.
pub fn run(config_path: &Path, output: Option<&Path>, seed: Option<u64>) -> Result<(Outcome, Artifacts)> {
    let mut config = load(config_path)?;
    if let Some(s) = seed {
        config.seed = s;
    }
    if let Some(o) = output {
        config.output_dir = Some(o.to_path_buf());
    }
    let outcome = run_experiment(&config)?;
    let artifacts = write_artifacts(&config, &outcome, &config.output_dir())?;
    Ok((outcome, artifacts))
}
