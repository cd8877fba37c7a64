//! Hardware-limited communication capacity.
//!
//! SINR_eff = SNR0 e^{-sigma_phi^2} / (1 + SNR0 Gamma_eff) saturates at
//! e^{-sigma_phi^2} / Gamma_eff, which caps the Gaussian-noise capacity
//! bound log2(1 + SINR_eff) no matter how much power is spent.

use num_complex::Complex64;

use crate::error::{domain, require_non_negative, require_positive, Result};

/// P |g|^2 |B|^2 / N0.
pub fn snr0(p_w: f64, g: Complex64, bussgang_gain: Complex64, n0_w: f64) -> Result<f64> {
    require_non_negative("transmit power", p_w)?;
    require_positive("noise power", n0_w)?;
    Ok(p_w * g.norm_sqr() * bussgang_gain.norm_sqr() / n0_w)
}

pub fn sinr_eff(snr0: f64, sigma_phi2: f64, gamma_eff: f64) -> Result<f64> {
    require_non_negative("snr0", snr0)?;
    require_non_negative("phase-noise variance", sigma_phi2)?;
    require_non_negative("gamma_eff", gamma_eff)?;
    Ok(snr0 * (-sigma_phi2).exp() / (1.0 + snr0 * gamma_eff))
}

/// log2(1 + SINR), bits/symbol.
pub fn capacity(sinr: f64) -> Result<f64> {
    require_non_negative("sinr", sinr)?;
    Ok(sinr.ln_1p() / std::f64::consts::LN_2)
}

/// Saturation ceiling log2(1 + e^{-sigma^2}/Gamma). Infinite when
/// Gamma = 0 (unbounded AWGN growth).
pub fn ceiling(sigma_phi2: f64, gamma_eff: f64) -> Result<f64> {
    require_non_negative("phase-noise variance", sigma_phi2)?;
    require_non_negative("gamma_eff", gamma_eff)?;
    if gamma_eff == 0.0 {
        return Ok(f64::INFINITY);
    }
    capacity((-sigma_phi2).exp() / gamma_eff)
}

/// Pilot-overhead-corrected throughput (1 - M/K) C B, bit/s.
pub fn net_rate(capacity_bits: f64, m_pilots: usize, frame_symbols: usize, bandwidth_hz: f64) -> Result<f64> {
    require_non_negative("capacity", capacity_bits)?;
    require_positive("bandwidth", bandwidth_hz)?;
    if frame_symbols == 0 || m_pilots > frame_symbols {
        return domain(format!("{m_pilots} pilots do not fit in {frame_symbols} symbols"));
    }
    let payload = 1.0 - m_pilots as f64 / frame_symbols as f64;
    Ok(payload * capacity_bits * bandwidth_hz)
}

/// SNR0 at which received distortion equals thermal noise.
pub fn knee_snr0(gamma_eff: f64) -> Result<f64> {
    require_positive("gamma_eff", gamma_eff)?;
    Ok(1.0 / gamma_eff)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub tx_power_w: f64,
    pub snr0: f64,
    pub sinr_eff: f64,
    pub capacity_bits: f64,
    pub ceiling_bits: f64,
    pub net_rate_bps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityInputs {
    pub tx_power_w: f64,
    pub g: Complex64,
    pub bussgang_gain: Complex64,
    pub n0_w: f64,
    pub sigma_phi2: f64,
    pub gamma_eff: f64,
    pub m_pilots: usize,
    pub frame_symbols: usize,
    pub bandwidth_hz: f64,
}

pub fn link_budget(inp: &CapacityInputs) -> Result<LinkBudget> {
    let s0 = snr0(inp.tx_power_w, inp.g, inp.bussgang_gain, inp.n0_w)?;
    let s = sinr_eff(s0, inp.sigma_phi2, inp.gamma_eff)?;
    let c = capacity(s)?;
    Ok(LinkBudget {
        tx_power_w: inp.tx_power_w,
        snr0: s0,
        sinr_eff: s,
        capacity_bits: c,
        ceiling_bits: ceiling(inp.sigma_phi2, inp.gamma_eff)?,
        net_rate_bps: net_rate(c, inp.m_pilots, inp.frame_symbols, inp.bandwidth_hz)?,
    })
}
