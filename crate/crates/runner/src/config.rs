//! Experiment configuration (TOML).
//!
//! Every field has a default taken from the reference simulation table, so
//! an empty file is a valid configuration. `resolve` fills in the sweep axis
//! for the chosen experiment and validates ranges; the resolved form is what
//! gets echoed next to the results.

use std::fmt;
use std::path::Path;

use isl_isac::hardware_impairments::{builtin_profile, builtin_profiles, HardwareProfile};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{config_err, Result, RunnerError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentId {
    CapacityVsSnr,
    RmseVsSnr,
    FreqSweep,
    DistanceSweep,
    GammaSweep,
    CdFrontier,
    FeasibilityMap,
    AwgnComparison,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 8] = [
        ExperimentId::CapacityVsSnr,
        ExperimentId::RmseVsSnr,
        ExperimentId::FreqSweep,
        ExperimentId::DistanceSweep,
        ExperimentId::GammaSweep,
        ExperimentId::CdFrontier,
        ExperimentId::FeasibilityMap,
        ExperimentId::AwgnComparison,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentId::CapacityVsSnr => "capacity_vs_snr",
            ExperimentId::RmseVsSnr => "rmse_vs_snr",
            ExperimentId::FreqSweep => "freq_sweep",
            ExperimentId::DistanceSweep => "distance_sweep",
            ExperimentId::GammaSweep => "gamma_sweep",
            ExperimentId::CdFrontier => "cd_frontier",
            ExperimentId::FeasibilityMap => "feasibility_map",
            ExperimentId::AwgnComparison => "awgn_comparison",
        }
    }

    /// Quantity swept on the primary axis, its unit, and the default axis.
    pub fn axis_quantity(&self) -> AxisQuantity {
        match self {
            ExperimentId::CapacityVsSnr | ExperimentId::RmseVsSnr | ExperimentId::AwgnComparison => {
                AxisQuantity::SnrDb
            }
            ExperimentId::FreqSweep => AxisQuantity::CarrierGhz,
            ExperimentId::DistanceSweep => AxisQuantity::RangeKm,
            ExperimentId::GammaSweep => AxisQuantity::GammaEff,
            ExperimentId::CdFrontier => AxisQuantity::TargetFactor,
            ExperimentId::FeasibilityMap => AxisQuantity::TxPowerDbm,
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisQuantity {
    SnrDb,
    CarrierGhz,
    RangeKm,
    GammaEff,
    TargetFactor,
    TxPowerDbm,
    DiameterM,
}

impl AxisQuantity {
    pub fn column(&self) -> &'static str {
        match self {
            AxisQuantity::SnrDb => "snr0(dB)",
            AxisQuantity::CarrierGhz => "carrier(GHz)",
            AxisQuantity::RangeKm => "range(km)",
            AxisQuantity::GammaEff => "gamma_eff(1)",
            AxisQuantity::TargetFactor => "target_over_min_distortion(1)",
            AxisQuantity::TxPowerDbm => "tx_power(dBm)",
            AxisQuantity::DiameterM => "diameter(m)",
        }
    }

    /// Range over which the models are calibrated; outside it a sweep must
    /// set `extrapolate = true`.
    pub fn validity(&self) -> (f64, f64) {
        match self {
            AxisQuantity::SnrDb => (-30.0, 90.0),
            AxisQuantity::CarrierGhz => (100.0, 1000.0),
            AxisQuantity::RangeKm => (500.0, 5000.0),
            AxisQuantity::GammaEff => (1e-4, 0.2),
            AxisQuantity::TargetFactor => (1.0, 100.0),
            AxisQuantity::TxPowerDbm => (0.0, 50.0),
            AxisQuantity::DiameterM => (0.1, 3.0),
        }
    }

    pub fn default_axis(&self) -> SweepAxis {
        let (start, stop, points, scale) = match self {
            AxisQuantity::SnrDb => (-10.0, 60.0, 36, Scale::Linear),
            AxisQuantity::CarrierGhz => (100.0, 1000.0, 10, Scale::Log),
            AxisQuantity::RangeKm => (500.0, 5000.0, 10, Scale::Linear),
            AxisQuantity::GammaEff => (1e-3, 1e-1, 21, Scale::Log),
            AxisQuantity::TargetFactor => (1.02, 1.3, 6, Scale::Linear),
            AxisQuantity::TxPowerDbm => (10.0, 40.0, 16, Scale::Linear),
            AxisQuantity::DiameterM => (0.3, 1.5, 13, Scale::Linear),
        };
        SweepAxis {
            start,
            stop,
            points,
            scale,
            extrapolate: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default = "linear")]
    pub scale: Scale,
    /// Allow values outside the calibrated range.
    #[serde(default)]
    pub extrapolate: bool,
}

fn linear() -> Scale {
    Scale::Linear
}

impl SweepAxis {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let n = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let t = i as f64 / n;
                match self.scale {
                    Scale::Linear => self.start + t * (self.stop - self.start),
                    Scale::Log => (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp(),
                }
            })
            .collect()
    }

    fn validate(&self, what: &str, q: AxisQuantity) -> Result<()> {
        if self.points == 0 {
            return config_err(format!("{what}: points must be at least 1"));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return config_err(format!("{what}: start and stop must be finite"));
        }
        if self.scale == Scale::Log && (self.start <= 0.0 || self.stop <= 0.0) {
            return config_err(format!("{what}: log axis needs positive start and stop"));
        }
        let (lo, hi) = q.validity();
        let (a, b) = (self.start.min(self.stop), self.start.max(self.stop));
        if (a < lo || b > hi) && !self.extrapolate {
            return config_err(format!(
                "{what}: [{a}, {b}] leaves the supported range [{lo}, {hi}] of {}; set extrapolate = true to run anyway",
                q.column()
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GainModeId {
    /// Dish gain eta (pi D f / c)^2 at each end.
    Aperture,
    /// Gains scaled so |g| does not depend on the carrier.
    ConstantReceivedPower,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub carrier_ghz: f64,
    pub range_km: f64,
    /// dR/dt, negative when closing.
    pub range_rate_mps: f64,
    pub diameter_m: f64,
    pub aperture_efficiency: f64,
    pub gain_mode: GainModeId,
    /// Carrier at which the constant-received-power gains are pinned.
    pub reference_ghz: f64,
    pub tx_power_dbm: f64,
    pub pilots: usize,
    pub frame_symbols: usize,
    pub pointing_rms_urad: f64,
    pub noise_temperature_k: f64,
    /// Overrides every profile's phase-noise variance when set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_phi2: Option<f64>,
    /// Pilot SNR used by experiments that run at a fixed SNR.
    pub fixed_snr_db: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            carrier_ghz: 300.0,
            range_km: 1000.0,
            range_rate_mps: -2000.0,
            diameter_m: 1.0,
            aperture_efficiency: 0.7,
            gain_mode: GainModeId::Aperture,
            reference_ghz: 300.0,
            tx_power_dbm: 30.0,
            pilots: 64,
            frame_symbols: 1024,
            pointing_rms_urad: 1.0,
            noise_temperature_k: 300.0,
            sigma_phi2: None,
            fixed_snr_db: 20.0,
        }
    }
}

/// Per-profile edits. Editing any component figure without giving
/// `gamma_eff` drops the class value so the recomputed sum is used.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileOverride {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evm_pa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jitter_fs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub enob: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linewidth_khz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signal_bandwidth_ghz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bandwidth_ghz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_eff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_phi2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Options {
    /// distance_sweep evaluates each of these carriers.
    pub carriers_ghz: Vec<f64>,
    /// Square QAM order for the rate-distortion frontier.
    pub frontier_qam_order: usize,
    /// Square QAM order for the finite-alphabet net-rate column.
    pub rate_qam_order: usize,
    /// feasibility_map second axis.
    pub diameter_axis: SweepAxis,
    pub min_capacity_bits: f64,
    /// Range RMSE ceiling, m.
    pub max_rmse_m: f64,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            carriers_ghz: vec![300.0, 1000.0],
            frontier_qam_order: 16,
            rate_qam_order: 64,
            diameter_axis: AxisQuantity::DiameterM.default_axis(),
            min_capacity_bits: 2.0,
            max_rmse_m: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MonteCarloConfig {
    /// Gaussian pointing draws averaged into the link gain.
    pub samples: usize,
    pub seed: u64,
    pub mi_samples: usize,
    pub ba_max_iters: usize,
}

impl Default for MonteCarloConfig {
    fn default() -> Self {
        Self {
            samples: 1000,
            seed: 1,
            mi_samples: 100_000,
            ba_max_iters: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Svg,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub directory: String,
    pub formats: Vec<Format>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: "results".into(),
            formats: vec![Format::Csv, Format::Svg],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    pub profiles: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepAxis>,
    pub scenario: ScenarioConfig,
    pub options: Options,
    pub monte_carlo: MonteCarloConfig,
    pub output: OutputConfig,
    #[serde(rename = "profile_override", skip_serializing_if = "Vec::is_empty")]
    pub profile_overrides: Vec<ProfileOverride>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: ExperimentId::CapacityVsSnr,
            profiles: builtin_profiles().into_iter().map(|p| p.name).collect(),
            sweep: None,
            scenario: ScenarioConfig::default(),
            options: Options::default(),
            monte_carlo: MonteCarloConfig::default(),
            output: OutputConfig::default(),
            profile_overrides: Vec::new(),
        }
    }
}

/// A profile after overrides, with the phase-noise variance it runs at.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedProfile {
    pub hardware: HardwareProfile,
    pub sigma_phi2: f64,
}

impl ResolvedProfile {
    pub fn name(&self) -> &str {
        &self.hardware.name
    }

    pub fn gamma_eff(&self) -> f64 {
        self.hardware.gamma_eff()
    }

    pub fn bandwidth_hz(&self) -> f64 {
        self.hardware.operating_bandwidth
    }
}

pub fn parse_config(text: &str, origin: &str) -> Result<ExperimentConfig> {
    toml::from_str(text).map_err(|e| RunnerError::Parse {
        path: origin.into(),
        message: e.to_string(),
    })
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| RunnerError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text, &path.display().to_string())
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        config_err(format!("{name} must be finite and > 0, got {v}"))
    }
}

fn within(name: &str, v: f64, q: AxisQuantity, extrapolate: bool) -> Result<()> {
    let (lo, hi) = q.validity();
    if !extrapolate && !(lo..=hi).contains(&v) {
        return config_err(format!("{name} = {v} is outside the supported range [{lo}, {hi}]"));
    }
    Ok(())
}

impl ExperimentConfig {
    /// Validates and fills the sweep axis; the result has no implicit values.
    pub fn resolve(mut self) -> Result<Self> {
        let q = self.experiment.axis_quantity();
        let sweep = self.sweep.take().unwrap_or_else(|| q.default_axis());
        sweep.validate("sweep", q)?;
        let extrapolate = sweep.extrapolate;
        self.sweep = Some(sweep);

        let s = &self.scenario;
        positive("scenario.carrier_ghz", s.carrier_ghz)?;
        within("scenario.carrier_ghz", s.carrier_ghz, AxisQuantity::CarrierGhz, extrapolate)?;
        positive("scenario.range_km", s.range_km)?;
        within("scenario.range_km", s.range_km, AxisQuantity::RangeKm, extrapolate)?;
        positive("scenario.diameter_m", s.diameter_m)?;
        positive("scenario.aperture_efficiency", s.aperture_efficiency)?;
        positive("scenario.reference_ghz", s.reference_ghz)?;
        positive("scenario.noise_temperature_k", s.noise_temperature_k)?;
        if !s.range_rate_mps.is_finite() || s.range_rate_mps.abs() > 20e3 {
            return config_err("scenario.range_rate_mps must be finite with |v| <= 20 km/s");
        }
        if !s.tx_power_dbm.is_finite() || !s.fixed_snr_db.is_finite() {
            return config_err("scenario.tx_power_dbm and fixed_snr_db must be finite");
        }
        if !(s.pointing_rms_urad.is_finite() && s.pointing_rms_urad >= 0.0) {
            return config_err("scenario.pointing_rms_urad must be >= 0");
        }
        if s.pilots < 2 || s.pilots > s.frame_symbols {
            return config_err(format!(
                "scenario.pilots = {} must lie in [2, frame_symbols = {}]",
                s.pilots, s.frame_symbols
            ));
        }
        if let Some(v) = s.sigma_phi2 {
            if !(v.is_finite() && v >= 0.0) {
                return config_err("scenario.sigma_phi2 must be >= 0");
            }
        }
        if self.profiles.is_empty() {
            return config_err("profiles must name at least one profile");
        }
        let mut seen = std::collections::HashSet::new();
        for name in &self.profiles {
            if builtin_profile(name).is_none() {
                return config_err(format!("unknown profile `{name}` (see list-profiles)"));
            }
            if !seen.insert(name) {
                return config_err(format!("profile `{name}` listed twice"));
            }
        }
        for o in &self.profile_overrides {
            if !self.profiles.contains(&o.name) {
                return config_err(format!("profile_override names `{}`, which is not in profiles", o.name));
            }
        }
        let o = &self.options;
        if o.carriers_ghz.is_empty() {
            return config_err("options.carriers_ghz must not be empty");
        }
        for &f in &o.carriers_ghz {
            positive("options.carriers_ghz", f)?;
            within("options.carriers_ghz", f, AxisQuantity::CarrierGhz, extrapolate)?;
        }
        for (name, order) in [("frontier_qam_order", o.frontier_qam_order), ("rate_qam_order", o.rate_qam_order)] {
            let side = (order as f64).sqrt().round() as usize;
            if order < 4 || side * side != order {
                return config_err(format!("options.{name} must be a square QAM order >= 4, got {order}"));
            }
        }
        o.diameter_axis.validate("options.diameter_axis", AxisQuantity::DiameterM)?;
        if o.min_capacity_bits.is_nan() || o.min_capacity_bits < 0.0 || o.max_rmse_m.is_nan() || o.max_rmse_m <= 0.0 {
            return config_err("options.min_capacity_bits must be >= 0 and max_rmse_m > 0");
        }
        let mc = &self.monte_carlo;
        if mc.samples < 1000 {
            return config_err("monte_carlo.samples must be at least 1000 pointing draws");
        }
        if mc.mi_samples < isl_isac::isac_tradeoff::MIN_MI_SAMPLES {
            return config_err(format!(
                "monte_carlo.mi_samples must be at least {}",
                isl_isac::isac_tradeoff::MIN_MI_SAMPLES
            ));
        }
        if mc.ba_max_iters == 0 {
            return config_err("monte_carlo.ba_max_iters must be at least 1");
        }
        if self.output.formats.is_empty() {
            return config_err("output.formats must list csv and/or svg");
        }
        self.resolved_profiles()?;
        Ok(self)
    }

    pub fn sweep_axis(&self) -> SweepAxis {
        self.sweep
            .clone()
            .unwrap_or_else(|| self.experiment.axis_quantity().default_axis())
    }

    /// Profiles with overrides applied, in configured order.
    pub fn resolved_profiles(&self) -> Result<Vec<ResolvedProfile>> {
        self.profiles
            .iter()
            .map(|name| {
                let mut hw = builtin_profile(name)
                    .ok_or_else(|| RunnerError::Config(format!("unknown profile `{name}`")))?;
                let mut sigma_override = None;
                for o in self.profile_overrides.iter().filter(|o| &o.name == name) {
                    apply_override(&mut hw, o)?;
                    sigma_override = o.sigma_phi2.or(sigma_override);
                }
                let frame_s = self.scenario.frame_symbols as f64 / hw.operating_bandwidth;
                let derived = 2.0 * std::f64::consts::PI * hw.linewidth * frame_s;
                let sigma_phi2 = self.scenario.sigma_phi2.or(sigma_override).unwrap_or(derived);
                if !(sigma_phi2.is_finite() && sigma_phi2 >= 0.0) {
                    return config_err(format!("profile `{name}`: sigma_phi2 must be >= 0"));
                }
                Ok(ResolvedProfile { hardware: hw, sigma_phi2 })
            })
            .collect()
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| RunnerError::Serialize(e.to_string()))
    }

    /// SHA-256 of the resolved TOML, hex encoded.
    pub fn hash(&self) -> Result<String> {
        Ok(hex::encode(Sha256::digest(self.to_toml()?.as_bytes())))
    }
}

fn apply_override(hw: &mut HardwareProfile, o: &ProfileOverride) -> Result<()> {
    let mut components = false;
    if let Some(v) = o.evm_pa {
        hw.evm_pa = v;
        components = true;
    }
    if let Some(v) = o.jitter_fs {
        hw.jitter_rms = v * 1e-15;
        components = true;
    }
    if let Some(v) = o.enob {
        hw.enob = v;
        components = true;
    }
    if let Some(v) = o.signal_bandwidth_ghz {
        hw.signal_bandwidth = v * 1e9;
        components = true;
    }
    if let Some(v) = o.linewidth_khz {
        if !(v.is_finite() && v >= 0.0) {
            return config_err(format!("profile `{}`: linewidth_khz must be >= 0", o.name));
        }
        hw.linewidth = v * 1e3;
    }
    if let Some(v) = o.bandwidth_ghz {
        positive("bandwidth_ghz", v)?;
        hw.operating_bandwidth = v * 1e9;
    }
    hw.recompute()
        .map_err(|e| RunnerError::Config(format!("profile `{}`: {e}", o.name)))?;
    if components {
        hw.gamma_eff_asserted = None;
    }
    if let Some(g) = o.gamma_eff {
        if !(g.is_finite() && g >= 0.0) {
            return config_err(format!("profile `{}`: gamma_eff must be >= 0", o.name));
        }
        hw.gamma_eff_asserted = Some(g);
    }
    Ok(())
}
