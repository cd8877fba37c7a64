//! Deterministic inter-satellite channel: Friis gain and carrier phase,
//! Doppler and Doppler-squint terms, Gaussian-beam pointing loss and the
//! effective noise budget.
//!
//! Sign convention: `range_rate_mps` is dR/dt, negative when the satellites
//! close. The Doppler shift is f_D = -f_c (dR/dt) / c, so closing links see
//! f_D > 0.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::{LN_2, PI};

use crate::error::{domain, require_non_negative, require_positive, Result};
use crate::random::rng_for;
use crate::units::{wavelength, BOLTZMANN, SPEED_OF_LIGHT};

/// Relative orbital state projected onto the link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioGeometry {
    pub range_m: f64,
    /// dR/dt, m/s (negative = closing).
    pub range_rate_mps: f64,
    /// d2R/dt2, m/s^2.
    pub rel_accel_mps2: f64,
    pub los_unit: [f64; 3],
    pub position_offset: [f64; 3],
    pub velocity_offset: [f64; 3],
}

fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

impl ScenarioGeometry {
    /// Builds the geometry from 3D relative position and velocity.
    pub fn from_state(
        position_offset: [f64; 3],
        velocity_offset: [f64; 3],
        rel_accel_mps2: f64,
    ) -> Result<Self> {
        let range_m = norm3(&position_offset);
        require_positive("range", range_m)?;
        if !velocity_offset.iter().all(|v| v.is_finite()) || !rel_accel_mps2.is_finite() {
            return domain("velocity and acceleration must be finite");
        }
        let los_unit = position_offset.map(|x| x / range_m);
        Ok(Self {
            range_m,
            range_rate_mps: dot3(&los_unit, &velocity_offset),
            rel_accel_mps2,
            los_unit,
            position_offset,
            velocity_offset,
        })
    }

    /// Geometry with all motion along the x axis.
    pub fn along_los(range_m: f64, range_rate_mps: f64, rel_accel_mps2: f64) -> Result<Self> {
        Self::from_state(
            [range_m, 0.0, 0.0],
            [range_rate_mps, 0.0, 0.0],
            rel_accel_mps2,
        )
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("range", self.range_m)?;
        if (norm3(&self.los_unit) - 1.0).abs() > 1e-12 {
            return domain("line-of-sight vector must have unit norm");
        }
        if (norm3(&self.position_offset) - self.range_m).abs() > 1e-9 * self.range_m {
            return domain("range must equal the norm of the position offset");
        }
        Ok(())
    }
}

/// How antenna gains follow the carrier frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GainMode {
    /// Each dish has G = eta (pi D f / c)^2.
    Aperture { efficiency: f64 },
    /// Gains given directly (linear).
    Fixed { tx_gain: f64, rx_gain: f64 },
    /// Gain product scaled as f^2 from the aperture value at
    /// `reference_hz`, which makes |g| independent of the carrier.
    ConstantReceivedPower { efficiency: f64, reference_hz: f64 },
}

/// Parabolic aperture gain eta (pi D / lambda)^2.
pub fn aperture_gain(diameter_m: f64, carrier_hz: f64, efficiency: f64) -> Result<f64> {
    require_positive("diameter", diameter_m)?;
    require_positive("carrier", carrier_hz)?;
    require_positive("aperture efficiency", efficiency)?;
    Ok(efficiency * (PI * diameter_m / wavelength(carrier_hz)).powi(2))
}

/// Half-power beamwidth 1.02 lambda / D, rad.
pub fn beamwidth(diameter_m: f64, carrier_hz: f64) -> Result<f64> {
    require_positive("diameter", diameter_m)?;
    require_positive("carrier", carrier_hz)?;
    Ok(1.02 * wavelength(carrier_hz) / diameter_m)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntennaConfig {
    pub diameter_m: f64,
    pub carrier_hz: f64,
    pub tx_gain: f64,
    pub rx_gain: f64,
    pub beamwidth_rad: f64,
    /// gamma = 2 ln2 / theta_3dB^2.
    pub amp_rolloff: f64,
    /// g_power = 4 ln2 / theta_3dB^2.
    pub power_rolloff: f64,
}

impl AntennaConfig {
    pub fn new(diameter_m: f64, carrier_hz: f64, mode: GainMode) -> Result<Self> {
        let beamwidth_rad = beamwidth(diameter_m, carrier_hz)?;
        let (tx_gain, rx_gain) = match mode {
            GainMode::Aperture { efficiency } => {
                let g = aperture_gain(diameter_m, carrier_hz, efficiency)?;
                (g, g)
            }
            GainMode::Fixed { tx_gain, rx_gain } => {
                require_positive("tx gain", tx_gain)?;
                require_positive("rx gain", rx_gain)?;
                (tx_gain, rx_gain)
            }
            GainMode::ConstantReceivedPower {
                efficiency,
                reference_hz,
            } => {
                let g = aperture_gain(diameter_m, reference_hz, efficiency)?;
                (g * carrier_hz / reference_hz, g * carrier_hz / reference_hz)
            }
        };
        Ok(Self::with_beamwidth(
            diameter_m,
            carrier_hz,
            tx_gain,
            rx_gain,
            beamwidth_rad,
        ))
    }

    /// Overrides the beamwidth (and so the rolloff factors) directly.
    pub fn with_beamwidth(
        diameter_m: f64,
        carrier_hz: f64,
        tx_gain: f64,
        rx_gain: f64,
        beamwidth_rad: f64,
    ) -> Self {
        let power_rolloff = 4.0 * LN_2 / (beamwidth_rad * beamwidth_rad);
        Self {
            diameter_m,
            carrier_hz,
            tx_gain,
            rx_gain,
            beamwidth_rad,
            amp_rolloff: power_rolloff / 2.0,
            power_rolloff,
        }
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI * self.carrier_hz / SPEED_OF_LIGHT
    }
}

/// Complex path gain g = (c / (4 pi R f_c)) sqrt(G_tx G_rx) e^{-j 2 pi f_c R / c}.
pub fn friis_gain(geom: &ScenarioGeometry, ant: &AntennaConfig) -> Result<Complex64> {
    require_positive("range", geom.range_m)?;
    require_positive("carrier", ant.carrier_hz)?;
    let mag = SPEED_OF_LIGHT / (4.0 * PI * geom.range_m * ant.carrier_hz)
        * (ant.tx_gain * ant.rx_gain).sqrt();
    // Reduce the phase in cycles first to keep precision at 1e6 m ranges.
    let cycles = ant.carrier_hz * geom.range_m / SPEED_OF_LIGHT;
    let frac = cycles - cycles.floor();
    Ok(Complex64::from_polar(mag, -2.0 * PI * frac))
}

/// Gaussian-beam pointing loss for one misalignment sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointingLoss {
    /// Power factor exp(-g_power |theta|^2).
    pub power_factor: f64,
    /// Amplitude factor exp(-gamma |theta|^2).
    pub amplitude_factor: f64,
    /// Set when |theta| >= 2 theta_3dB, where the Gaussian main-lobe model
    /// no longer holds. The formula is still applied.
    pub outside_validity: bool,
}

pub fn pointing_loss(theta_e: [f64; 2], ant: &AntennaConfig) -> PointingLoss {
    let r2 = theta_e[0] * theta_e[0] + theta_e[1] * theta_e[1];
    let outside = r2.sqrt() >= 2.0 * ant.beamwidth_rad;
    if outside {
        log::warn!(
            "pointing error {:.3e} rad is outside the Gaussian-beam region",
            r2.sqrt()
        );
    }
    PointingLoss {
        power_factor: (-ant.power_rolloff * r2).exp(),
        amplitude_factor: (-ant.amp_rolloff * r2).exp(),
        outside_validity: outside,
    }
}

/// E[exp(-g_power |theta|^2)] for theta ~ N(0, sigma^2 I_2).
pub fn mean_pointing_loss(ant: &AntennaConfig, rms_rad: f64) -> f64 {
    1.0 / (1.0 + 2.0 * ant.power_rolloff * rms_rad * rms_rad)
}

/// Sample mean and standard error of the pointing power factor.
pub fn mean_pointing_loss_mc(
    ant: &AntennaConfig,
    rms_rad: f64,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    require_non_negative("pointing rms", rms_rad)?;
    if samples < 2 {
        return domain("need at least two pointing samples");
    }
    let mut rng = rng_for(seed, 0x9017);
    let (mut s, mut s2) = (0.0, 0.0);
    for _ in 0..samples {
        let x: f64 = rng.sample(StandardNormal);
        let y: f64 = rng.sample(StandardNormal);
        let r2 = rms_rad * rms_rad * (x * x + y * y);
        let p = (-ant.power_rolloff * r2).exp();
        s += p;
        s2 += p * p;
    }
    let n = samples as f64;
    let mean = s / n;
    let var = (s2 / n - mean * mean).max(0.0) * n / (n - 1.0);
    Ok((mean, (var / n).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopplerQuantities {
    pub doppler_hz: f64,
    pub doppler_rate_hz_s: f64,
    /// Doppler spread across the occupied band, |f_D| B / f_c.
    pub differential_hz: f64,
}

pub fn doppler_quantities(
    geom: &ScenarioGeometry,
    carrier_hz: f64,
    bandwidth_hz: f64,
) -> Result<DopplerQuantities> {
    require_positive("carrier", carrier_hz)?;
    require_non_negative("bandwidth", bandwidth_hz)?;
    let doppler_hz = -carrier_hz * geom.range_rate_mps / SPEED_OF_LIGHT;
    Ok(DopplerQuantities {
        doppler_hz,
        doppler_rate_hz_s: -carrier_hz * geom.rel_accel_mps2 / SPEED_OF_LIGHT,
        differential_hz: doppler_hz.abs() * bandwidth_hz / carrier_hz,
    })
}

/// Doppler-squint phase 2 pi (f_D (f/f_c) t + 0.5 fdot_D (f/f_c) t^2).
pub fn dse_phase(t: f64, f_baseband: f64, geom: &ScenarioGeometry, carrier_hz: f64) -> Result<f64> {
    let d = doppler_quantities(geom, carrier_hz, 0.0)?;
    let ratio = f_baseband / carrier_hz;
    Ok(2.0 * PI * (d.doppler_hz * ratio * t + 0.5 * d.doppler_rate_hz_s * ratio * t * t))
}

/// Total phase of subcarrier f at time t: carrier, common Doppler and squint.
pub fn total_phase(t: f64, f_baseband: f64, geom: &ScenarioGeometry, carrier_hz: f64) -> Result<f64> {
    let d = doppler_quantities(geom, carrier_hz, 0.0)?;
    let common = 2.0 * PI * (d.doppler_hz * t + 0.5 * d.doppler_rate_hz_s * t * t);
    Ok(2.0 * PI * (carrier_hz + f_baseband) * t + common + dse_phase(t, f_baseband, geom, carrier_hz)?)
}

/// Instantaneous frequency (f_c + f)(1 + f_D(t)/f_c), f_D(t) = f_D + fdot_D t.
pub fn instantaneous_frequency(
    t: f64,
    f_baseband: f64,
    geom: &ScenarioGeometry,
    carrier_hz: f64,
) -> Result<f64> {
    let d = doppler_quantities(geom, carrier_hz, 0.0)?;
    Ok((carrier_hz + f_baseband) * (1.0 + (d.doppler_hz + d.doppler_rate_hz_s * t) / carrier_hz))
}

/// Noise budget seen by the receiver, W.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseBudget {
    pub thermal_w: f64,
    /// |g|^2 sigma_eta^2.
    pub distortion_w: f64,
    pub dse_residual_w: f64,
    pub effective_w: f64,
}

/// sigma_eff^2 = N0 + |g|^2 sigma_eta^2 + sigma_DSE^2.
pub fn effective_noise(
    thermal_w: f64,
    g: Complex64,
    distortion_power: f64,
    dse_residual_w: f64,
) -> Result<NoiseBudget> {
    require_non_negative("thermal noise", thermal_w)?;
    require_non_negative("distortion power", distortion_power)?;
    require_non_negative("DSE residual", dse_residual_w)?;
    let distortion_w = g.norm_sqr() * distortion_power;
    Ok(NoiseBudget {
        thermal_w,
        distortion_w,
        dse_residual_w,
        effective_w: thermal_w + distortion_w + dse_residual_w,
    })
}

/// Thermal noise power k T B, W.
pub fn thermal_noise(temperature_k: f64, bandwidth_hz: f64) -> Result<f64> {
    require_positive("noise temperature", temperature_k)?;
    require_positive("bandwidth", bandwidth_hz)?;
    Ok(BOLTZMANN * temperature_k * bandwidth_hz)
}

/// Residual DSE power placed `below_db` under the received distortion term.
pub fn default_dse_residual(g: Complex64, distortion_power: f64, below_db: f64) -> f64 {
    g.norm_sqr() * distortion_power * 10f64.powf(-below_db / 10.0)
}

/// Transmit power at which received distortion equals thermal noise
/// (P |g|^2 Gamma = N0): the knee between power- and hardware-limited
/// operation.
pub fn hardware_knee_power(thermal_w: f64, g: Complex64, gamma_eff: f64) -> Result<f64> {
    require_positive("thermal noise", thermal_w)?;
    require_positive("gamma_eff", gamma_eff)?;
    Ok(thermal_w / (g.norm_sqr() * gamma_eff))
}
