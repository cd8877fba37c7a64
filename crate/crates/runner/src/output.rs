//! Sweep results and the files written for them.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{ExperimentConfig, Format};
use crate::error::{Result, RunnerError};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    pub name: String,
    pub unit: String,
    pub values: Vec<f64>,
}

impl Series {
    pub fn new(name: impl Into<String>, unit: &str, values: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            unit: unit.into(),
            values,
        }
    }

    pub fn header(&self) -> String {
        format!("{}({})", self.name, self.unit)
    }
}

/// Text-valued column (classification labels).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabelSeries {
    pub name: String,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileSummary {
    pub name: String,
    pub gamma_eff: f64,
    pub gamma_pa: f64,
    pub gamma_lo: f64,
    pub gamma_adc: f64,
    pub gamma_component_sum: f64,
    pub sigma_phi2: f64,
    pub bandwidth_hz: f64,
    pub linewidth_hz: f64,
}

/// Rates at the configured link-budget operating point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatingRates {
    pub profile: String,
    pub snr0_db: f64,
    pub capacity_bits: f64,
    pub ceiling_bits: f64,
    pub qam_order: usize,
    pub qam_mi_bits: f64,
    pub qam_mi_std_error: f64,
    pub net_rate_gaussian_gbps: f64,
    pub net_rate_qam_gbps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub experiment: String,
    pub config_hash: String,
    pub seed: u64,
    pub toolkit_version: String,
    pub wall_clock_s: f64,
    pub threads: usize,
    pub profiles: Vec<ProfileSummary>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub operating_point: Vec<OperatingRates>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis_column: String,
    pub axis: Vec<f64>,
    pub series: Vec<Series>,
    pub labels: Vec<LabelSeries>,
    /// (file name, SVG text)
    pub charts: Vec<(String, String)>,
    pub metadata: Metadata,
}

impl SweepResult {
    pub fn series(&self, name: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.name == name)
    }

    pub fn label(&self, name: &str) -> Option<&LabelSeries> {
        self.labels.iter().find(|s| s.name == name)
    }

    pub fn check_shape(&self) -> Result<()> {
        let n = self.axis.len();
        for s in &self.series {
            if s.values.len() != n {
                return Err(RunnerError::Serialize(format!("series {} has {} rows, axis has {n}", s.name, s.values.len())));
            }
        }
        for s in &self.labels {
            if s.values.len() != n {
                return Err(RunnerError::Serialize(format!("labels {} have {} rows, axis has {n}", s.name, s.values.len())));
            }
        }
        Ok(())
    }

    /// CSV text: one row per axis point, `name(unit)` headers, shortest
    /// round-trip scientific notation for numbers.
    pub fn to_csv(&self) -> Result<String> {
        self.check_shape()?;
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec![self.axis_column.clone()];
        header.extend(self.series.iter().map(Series::header));
        header.extend(self.labels.iter().map(|l| format!("{}(class)", l.name)));
        w.write_record(&header)?;
        for i in 0..self.axis.len() {
            let mut row = vec![format!("{:e}", self.axis[i])];
            row.extend(self.series.iter().map(|s| format!("{:e}", s.values[i])));
            row.extend(self.labels.iter().map(|l| l.values[i].clone()));
            w.write_record(&row)?;
        }
        let bytes = w.into_inner().map_err(|e| RunnerError::Serialize(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| RunnerError::Serialize(e.to_string()))
    }

    /// Writes CSV, charts, metadata and the resolved config under `dir`.
    pub fn write(&self, cfg: &ExperimentConfig, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let stem = cfg.experiment.name();
        let mut written = Vec::new();
        if cfg.output.formats.contains(&Format::Csv) {
            let p = dir.join(format!("{stem}.csv"));
            std::fs::write(&p, self.to_csv()?)?;
            written.push(p);
        }
        if cfg.output.formats.contains(&Format::Svg) {
            for (name, svg) in &self.charts {
                let p = dir.join(name);
                std::fs::write(&p, svg)?;
                written.push(p);
            }
        }
        let meta = dir.join(format!("{stem}.metadata.json"));
        let json = serde_json::to_string_pretty(&self.metadata).map_err(|e| RunnerError::Serialize(e.to_string()))?;
        std::fs::write(&meta, json + "\n")?;
        written.push(meta);
        let resolved = dir.join(format!("{stem}.resolved.toml"));
        std::fs::write(&resolved, cfg.to_toml()?)?;
        written.push(resolved);
        Ok(written)
    }
}
