//! Builds core-library inputs for one profile at one operating point.

use isl_isac::comm_capacity::{capacity, ceiling, link_budget, sinr_eff, CapacityInputs, LinkBudget};
use isl_isac::hardware_impairments::PhaseNoiseModel;
use isl_isac::isac_tradeoff::GaussianEquivalentChannel;
use isl_isac::link_channel::{friis_gain, mean_pointing_loss_mc, thermal_noise, AntennaConfig, GainMode, ScenarioGeometry};
use isl_isac::random::{derive_seed, tag_of};
use isl_isac::sensing_bounds::{bayesian_fim, Param, PilotFrame, SensingScenario};
use isl_isac::units::dbm_to_watts;
use num_complex::Complex64;

use crate::config::{ExperimentConfig, GainModeId, ResolvedProfile};
use crate::error::Result;

/// Operating point along whichever axis is being swept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub carrier_hz: f64,
    pub range_m: f64,
    pub diameter_m: f64,
    pub tx_power_w: f64,
}

impl OperatingPoint {
    pub fn from_config(cfg: &ExperimentConfig) -> Self {
        let s = &cfg.scenario;
        Self {
            carrier_hz: s.carrier_ghz * 1e9,
            range_m: s.range_km * 1e3,
            diameter_m: s.diameter_m,
            tx_power_w: dbm_to_watts(s.tx_power_dbm),
        }
    }
}

/// Noise either from the kTB budget or pinned to a pilot SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseSpec {
    Thermal,
    PilotSnrDb(f64),
}

pub struct LinkModel<'a> {
    pub cfg: &'a ExperimentConfig,
    pub profile: &'a ResolvedProfile,
}

impl<'a> LinkModel<'a> {
    pub fn new(cfg: &'a ExperimentConfig, profile: &'a ResolvedProfile) -> Self {
        Self { cfg, profile }
    }

    fn gain_mode(&self) -> GainMode {
        let s = &self.cfg.scenario;
        match s.gain_mode {
            GainModeId::Aperture => GainMode::Aperture {
                efficiency: s.aperture_efficiency,
            },
            GainModeId::ConstantReceivedPower => GainMode::ConstantReceivedPower {
                efficiency: s.aperture_efficiency,
                reference_hz: s.reference_ghz * 1e9,
            },
        }
    }

    /// Antenna pair with the mean pointing power factor folded into the
    /// transmit gain. The draws reuse one stream per profile so that
    /// neighbouring sweep points see the same pointing samples.
    pub fn antenna(&self, pt: &OperatingPoint) -> Result<AntennaConfig> {
        let mut ant = AntennaConfig::new(pt.diameter_m, pt.carrier_hz, self.gain_mode())?;
        let rms = self.cfg.scenario.pointing_rms_urad * 1e-6;
        let seed = derive_seed(self.cfg.monte_carlo.seed, tag_of(self.profile.name()));
        let (factor, _) = mean_pointing_loss_mc(&ant, rms, self.cfg.monte_carlo.samples, seed)?;
        ant.tx_gain *= factor;
        Ok(ant)
    }

    pub fn geometry(&self, pt: &OperatingPoint) -> Result<ScenarioGeometry> {
        Ok(ScenarioGeometry::along_los(pt.range_m, self.cfg.scenario.range_rate_mps, 0.0)?)
    }

    pub fn channel_gain(&self, pt: &OperatingPoint) -> Result<Complex64> {
        Ok(friis_gain(&self.geometry(pt)?, &self.antenna(pt)?)?)
    }

    pub fn n0(&self) -> Result<f64> {
        Ok(thermal_noise(self.cfg.scenario.noise_temperature_k, self.profile.bandwidth_hz())?)
    }

    pub fn budget(&self, pt: &OperatingPoint) -> Result<LinkBudget> {
        self.budget_with_gamma(pt, self.profile.gamma_eff())
    }

    pub fn budget_with_gamma(&self, pt: &OperatingPoint, gamma_eff: f64) -> Result<LinkBudget> {
        let s = &self.cfg.scenario;
        Ok(link_budget(&CapacityInputs {
            tx_power_w: pt.tx_power_w,
            g: self.channel_gain(pt)?,
            bussgang_gain: Complex64::new(1.0, 0.0),
            n0_w: self.n0()?,
            sigma_phi2: self.profile.sigma_phi2,
            gamma_eff,
            m_pilots: s.pilots,
            frame_symbols: s.frame_symbols,
            bandwidth_hz: self.profile.bandwidth_hz(),
        })?)
    }

    /// Capacity as a function of SNR0 alone.
    pub fn capacity_at_snr0(&self, snr0: f64) -> Result<f64> {
        Ok(capacity(sinr_eff(snr0, self.profile.sigma_phi2, self.profile.gamma_eff())?)?)
    }

    pub fn ceiling(&self) -> Result<f64> {
        Ok(ceiling(self.profile.sigma_phi2, self.profile.gamma_eff())?)
    }

    /// Gaussian-equivalent channel at SNR0 with unit-power symbols.
    pub fn channel_at_snr0(&self, snr0: f64) -> Result<GaussianEquivalentChannel> {
        Ok(GaussianEquivalentChannel::from_link(
            1.0,
            Complex64::new(snr0.sqrt(), 0.0),
            Complex64::new(1.0, 0.0),
            1.0,
            self.profile.sigma_phi2,
            self.profile.gamma_eff(),
            0.0,
        )?)
    }

    pub fn phase_noise(&self) -> Result<PhaseNoiseModel> {
        Ok(PhaseNoiseModel::new(self.profile.sigma_phi2, self.profile.hardware.linewidth, 0.0)?)
    }

    /// Pilot observation model at `pt`. With `NoiseSpec::PilotSnrDb` the
    /// thermal floor is set so the received pilot SNR equals that value.
    pub fn sensing_scenario(&self, pt: &OperatingPoint, noise: NoiseSpec, gamma_eff: f64) -> Result<SensingScenario> {
        let s = &self.cfg.scenario;
        let frame = PilotFrame::uniform(s.pilots, s.frame_symbols, self.profile.bandwidth_hz(), pt.tx_power_w)?;
        let mut sc = SensingScenario {
            geometry: self.geometry(pt)?,
            antenna: self.antenna(pt)?,
            frame,
            pointing: [0.0, 0.0],
            bussgang_gain: Complex64::new(1.0, 0.0),
            distortion_power: gamma_eff * pt.tx_power_w,
            thermal_w: self.n0()?,
            dse_residual_w: 0.0,
            phase_noise: self.phase_noise()?,
        };
        if let NoiseSpec::PilotSnrDb(db) = noise {
            let rx = sc.gain_magnitude()?.powi(2) * pt.tx_power_w;
            sc.thermal_w = rx / 10f64.powf(db / 10.0);
        }
        Ok(sc)
    }

    /// (range RMSE m, range-rate RMSE m/s) from the BCRLB over [R, Rdot].
    pub fn rmse(&self, sc: &SensingScenario) -> Result<(f64, f64)> {
        let r = bayesian_fim(sc, &[Param::Range, Param::RangeRate], None)?;
        let get = |p| -> Result<f64> { Ok(r.rmse(p)?.unwrap_or(f64::INFINITY)) };
        Ok((get(Param::Range)?, get(Param::RangeRate)?))
    }
}
