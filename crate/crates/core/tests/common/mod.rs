#![allow(dead_code)]

use isl_isac::hardware_impairments::PhaseNoiseModel;
use isl_isac::link_channel::{AntennaConfig, GainMode, ScenarioGeometry};
use isl_isac::sensing_bounds::{PilotFrame, SensingScenario};
use num_complex::Complex64;

pub struct Setup {
    pub carrier_hz: f64,
    pub range_m: f64,
    pub range_rate: f64,
    pub diameter_m: f64,
    pub pilots: usize,
    pub frame_symbols: usize,
    pub bandwidth_hz: f64,
    pub power_w: f64,
    pub gamma_eff: f64,
    pub thermal_w: f64,
    pub pointing: [f64; 2],
    pub phase_noise: PhaseNoiseModel,
    pub gain_mode: GainMode,
}

impl Default for Setup {
    fn default() -> Self {
        Self {
            carrier_hz: 300e9,
            range_m: 2e6,
            range_rate: -2e3,
            diameter_m: 1.0,
            pilots: 16,
            frame_symbols: 1024,
            bandwidth_hz: 20e9,
            power_w: 1.0,
            gamma_eff: 0.01,
            thermal_w: 1e-9,
            pointing: [0.0, 0.0],
            phase_noise: PhaseNoiseModel::none(),
            gain_mode: GainMode::Aperture { efficiency: 0.7 },
        }
    }
}

impl Setup {
    pub fn build(&self) -> SensingScenario {
        SensingScenario {
            geometry: ScenarioGeometry::along_los(self.range_m, self.range_rate, 0.0).unwrap(),
            antenna: AntennaConfig::new(self.diameter_m, self.carrier_hz, self.gain_mode).unwrap(),
            frame: PilotFrame::uniform(self.pilots, self.frame_symbols, self.bandwidth_hz, self.power_w).unwrap(),
            pointing: self.pointing,
            bussgang_gain: Complex64::new(1.0, 0.0),
            distortion_power: self.gamma_eff * self.power_w,
            thermal_w: self.thermal_w,
            dse_residual_w: 0.0,
            phase_noise: self.phase_noise,
        }
    }

    /// Thermal noise that puts the received pilot SNR at `snr_db`.
    pub fn with_snr_db(mut self, snr_db: f64) -> Self {
        let s = self.build();
        let rx = s.gain_magnitude().unwrap().powi(2) * self.power_w;
        self.thermal_w = rx / 10f64.powf(snr_db / 10.0);
        self
    }
}
