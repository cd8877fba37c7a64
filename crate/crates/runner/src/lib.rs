//! Configuration, sweep orchestration and output for the ISAC limit
//! experiments.

pub mod config;
pub mod error;
pub mod experiments;
pub mod model;
pub mod output;
pub mod svg;

use std::path::{Path, PathBuf};

pub use config::{load_config, parse_config, ExperimentConfig, ExperimentId};
pub use error::{Result, RunnerError};
pub use experiments::{run_experiment, run_experiment_with_threads};
pub use output::SweepResult;

/// Runs every experiment with `base` as the shared configuration. The
/// per-experiment sweep axis is reset to that experiment's default.
pub fn run_suite(base: &ExperimentConfig, out: &Path, threads: Option<usize>) -> Result<Vec<(ExperimentId, SweepResult, Vec<PathBuf>)>> {
    ExperimentId::ALL
        .iter()
        .map(|&id| {
            let cfg = ExperimentConfig {
                experiment: id,
                sweep: None,
                ..base.clone()
            }
            .resolve()?;
            let r = run_experiment_with_threads(&cfg, threads)?;
            let files = r.write(&cfg, out)?;
            Ok((id, r, files))
        })
        .collect()
}
