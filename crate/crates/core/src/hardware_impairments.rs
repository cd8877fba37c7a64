//! Transmitter/receiver non-idealities.
//!
//! Covers the PA nonlinearity (soft limiter and Saleh), its Bussgang
//! linearization under a circular complex Gaussian drive, the phase-noise
//! correlation structure and the hardware quality factor built from
//! component datasheet figures.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use statrs::function::erf::erfc;
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{domain, require_non_negative, require_positive, Error, Result};
use crate::random::rng_for;

/// Saleh AM-AM / AM-PM parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SalehParams {
    pub alpha_a: f64,
    pub beta_a: f64,
    pub alpha_phi: f64,
    pub beta_phi: f64,
}

impl Default for SalehParams {
    /// Normalized-unit fit (2, 1, pi/3, 1).
    fn default() -> Self {
        Self {
            alpha_a: 2.0,
            beta_a: 1.0,
            alpha_phi: PI / 3.0,
            beta_phi: 1.0,
        }
    }
}

impl SalehParams {
    pub fn new(alpha_a: f64, beta_a: f64, alpha_phi: f64, beta_phi: f64) -> Result<Self> {
        let p = Self {
            alpha_a,
            beta_a,
            alpha_phi,
            beta_phi,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("alpha_a", self.alpha_a)?;
        require_positive("beta_a", self.beta_a)?;
        require_positive("alpha_phi", self.alpha_phi)?;
        require_positive("beta_phi", self.beta_phi)
    }

    /// AM-AM curve A(r).
    pub fn amplitude(&self, r: f64) -> f64 {
        self.alpha_a * r / (1.0 + self.beta_a * r * r)
    }

    /// AM-PM curve Phi(r).
    pub fn phase_shift(&self, r: f64) -> f64 {
        self.alpha_phi * r * r / (1.0 + self.beta_phi * r * r)
    }

    /// Maximum of the AM-AM curve, reached at r = 1/sqrt(beta_a).
    pub fn peak_amplitude(&self) -> f64 {
        self.alpha_a / (2.0 * self.beta_a.sqrt())
    }
}

/// Soft-limiter drive: saturation amplitude and mean input power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoftLimiterParams {
    pub a_sat: f64,
    pub p_in: f64,
}

impl SoftLimiterParams {
    pub fn new(a_sat: f64, p_in: f64) -> Result<Self> {
        require_positive("a_sat", a_sat)?;
        require_positive("p_in", p_in)?;
        Ok(Self { a_sat, p_in })
    }

    /// Input back-off ratio kappa = P_in / A_sat^2.
    pub fn kappa(&self) -> f64 {
        self.p_in / (self.a_sat * self.a_sat)
    }
}

/// Memoryless PA transfer characteristic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PaModel {
    /// Ideal linear amplifier (unit gain).
    Linear,
    /// Envelope clipped at `a_sat`, phase preserved.
    SoftLimiter { a_sat: f64 },
    Saleh(SalehParams),
}

impl PaModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            PaModel::Linear => Ok(()),
            PaModel::SoftLimiter { a_sat } => require_positive("a_sat", *a_sat),
            PaModel::Saleh(p) => p.validate(),
        }
    }

    pub fn apply(&self, s: Complex64) -> Complex64 {
        match self {
            PaModel::Linear => s,
            PaModel::SoftLimiter { a_sat } => soft_limiter_transfer(s, *a_sat),
            PaModel::Saleh(p) => saleh_transfer(s, p),
        }
    }
}

/// Saleh PA applied to one complex envelope sample.
pub fn saleh_transfer(s: Complex64, params: &SalehParams) -> Complex64 {
    let r = s.norm();
    if r == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let out_phase = s.arg() + params.phase_shift(r);
    Complex64::from_polar(params.amplitude(r), out_phase)
}

pub fn soft_limiter_transfer(s: Complex64, a_sat: f64) -> Complex64 {
    let r = s.norm();
    if r <= a_sat {
        s
    } else {
        s * (a_sat / r)
    }
}

/// Bussgang gain of a soft limiter driven by CN(0, P_in), as a function of
/// the back-off ratio kappa = P_in / A_sat^2.
///
/// With u = |x|^2 / P_in ~ Exp(1) and clipping threshold c = 1/kappa:
/// E[U(x) x*] / P_in = E[u; u <= c] + sqrt(c) E[sqrt(u); u > c]
///                   = 1 - e^{-c} + sqrt(pi c)/2 * erfc(sqrt(c)).
pub fn bussgang_gain_soft_limiter(kappa: f64) -> Result<f64> {
    require_positive("kappa", kappa)?;
    let c = 1.0 / kappa;
    // -expm1 keeps precision when c is small (deep saturation).
    Ok(-(-c).exp_m1() + 0.5 * (PI * c).sqrt() * erfc(c.sqrt()))
}

/// Total output power E[|U(x)|^2] of the soft limiter, normalized by P_in.
fn soft_limiter_output_power_ratio(kappa: f64) -> f64 {
    -(-1.0 / kappa).exp_m1()
}

/// Bussgang gain and uncorrelated distortion power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BussgangDecomposition {
    /// B = E[U(x) x*] / E[|x|^2]; real for the soft limiter.
    pub gain_b: Complex64,
    /// sigma_eta^2 = E[|U(x)|^2] - |B|^2 E[|x|^2], in W.
    pub distortion_power: f64,
    /// E[|U(x)|^2], in W.
    pub output_power: f64,
}

impl BussgangDecomposition {
    pub fn identity(p_in: f64) -> Self {
        Self {
            gain_b: Complex64::new(1.0, 0.0),
            distortion_power: 0.0,
            output_power: p_in,
        }
    }

    /// Linearized profile: unit gain, distortion = gamma_eff * P.
    pub fn from_quality_factor(gamma_eff: f64, p_in: f64) -> Self {
        Self {
            gain_b: Complex64::new(1.0, 0.0),
            distortion_power: gamma_eff * p_in,
            output_power: (1.0 + gamma_eff) * p_in,
        }
    }

    /// Signal-to-distortion ratio of the linearized output.
    pub fn distortion_ratio(&self, p_in: f64) -> f64 {
        self.distortion_power / (self.gain_b.norm_sqr() * p_in)
    }
}

/// Bussgang decomposition under x ~ CN(0, p_in).
///
/// Soft limiter: closed form. Saleh: deterministic quadrature over the
/// exponential law of |x|^2.
pub fn bussgang_decompose(pa: &PaModel, p_in: f64) -> Result<BussgangDecomposition> {
    require_positive("p_in", p_in)?;
    pa.validate()?;
    match pa {
        PaModel::Linear => Ok(BussgangDecomposition::identity(p_in)),
        PaModel::SoftLimiter { a_sat } => {
            let kappa = p_in / (a_sat * a_sat);
            let b = bussgang_gain_soft_limiter(kappa)?;
            let output_power = p_in * soft_limiter_output_power_ratio(kappa);
            Ok(BussgangDecomposition {
                gain_b: Complex64::new(b, 0.0),
                distortion_power: (output_power - b * b * p_in).max(0.0),
                output_power,
            })
        }
        PaModel::Saleh(params) => {
            let stiffness = params.beta_a.max(params.beta_phi) * p_in;
            let (cross, power) = integrate_exponential(stiffness, |u| {
                let r = (p_in * u).sqrt();
                let a = params.amplitude(r);
                let cross = Complex64::from_polar(a * r, params.phase_shift(r));
                (cross, a * a)
            });
            let gain_b = cross / p_in;
            Ok(BussgangDecomposition {
                gain_b,
                distortion_power: (power - gain_b.norm_sqr() * p_in).max(0.0),
                output_power: power,
            })
        }
    }
}

/// Sample-based Bussgang estimate with standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BussgangEstimate {
    pub gain_b: Complex64,
    pub gain_std_error: f64,
    pub output_power: f64,
    pub output_power_std_error: f64,
    pub distortion_power: f64,
    pub samples: usize,
}

const MC_BATCH: usize = 1 << 16;

/// Monte Carlo Bussgang decomposition: draws `samples` points of
/// CN(0, p_in) and pushes them through the PA.
pub fn bussgang_monte_carlo(
    pa: &PaModel,
    p_in: f64,
    samples: usize,
    seed: u64,
) -> Result<BussgangEstimate> {
    require_positive("p_in", p_in)?;
    pa.validate()?;
    if samples < 2 {
        return domain("need at least two Monte Carlo samples");
    }
    let batches = samples.div_ceil(MC_BATCH);
    let sd = (p_in / 2.0).sqrt();
    // Per-batch sums: (sum U x*, sum |U x*|^2 - only real part matters, sum |U|^2, sum |U|^4)
    let partial: Vec<[f64; 5]> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = rng_for(seed, b as u64);
            let n = MC_BATCH.min(samples - b * MC_BATCH);
            let mut acc = [0.0; 5];
            for _ in 0..n {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                let x = Complex64::new(sd * re, sd * im);
                let u = pa.apply(x);
                let c = u * x.conj();
                let pw = u.norm_sqr();
                acc[0] += c.re;
                acc[1] += c.im;
                acc[2] += c.re * c.re;
                acc[3] += pw;
                acc[4] += pw * pw;
            }
            acc
        })
        .collect();
    let mut tot = [0.0; 5];
    for acc in &partial {
        for (t, a) in tot.iter_mut().zip(acc) {
            *t += a;
        }
    }
    let n = samples as f64;
    let mean_re = tot[0] / n;
    let mean_im = tot[1] / n;
    let var_re = (tot[2] / n - mean_re * mean_re).max(0.0);
    let mean_pw = tot[3] / n;
    let var_pw = (tot[4] / n - mean_pw * mean_pw).max(0.0);
    let gain_b = Complex64::new(mean_re, mean_im) / p_in;
    Ok(BussgangEstimate {
        gain_b,
        gain_std_error: (var_re / n).sqrt() / p_in,
        output_power: mean_pw,
        output_power_std_error: (var_pw / n).sqrt(),
        distortion_power: mean_pw - gain_b.norm_sqr() * p_in,
        samples,
    })
}

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton on the Legendre
/// recurrence).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre16() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(16))
}

/// Integrates E[f(u)] for u ~ Exp(1) with graded composite Gauss-Legendre.
///
/// `stiffness` is the inverse distance from the origin to the nearest
/// singularity of `f` in the complex u-plane; the first panel is a quarter
/// of that distance and panels grow geometrically out to u = 60.
fn integrate_exponential<F>(stiffness: f64, f: F) -> (Complex64, f64)
where
    F: Fn(f64) -> (Complex64, f64),
{
    let (nodes, weights) = legendre16();
    let mut width = (0.25 / stiffness.max(1e-12)).min(0.25);
    let mut lo = 0.0;
    let mut acc_c = Complex64::new(0.0, 0.0);
    let mut acc_r = 0.0;
    const U_MAX: f64 = 60.0;
    while lo < U_MAX {
        let hi = (lo + width).min(U_MAX);
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        for (x, w) in nodes.iter().zip(weights) {
            let u = mid + half * x;
            let (c, r) = f(u);
            let wu = w * half * (-u).exp();
            acc_c += c * wu;
            acc_r += r * wu;
        }
        lo = hi;
        width *= 1.25;
    }
    (acc_c, acc_r)
}

/// Stationary phase-noise statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseNoiseModel {
    /// sigma_phi^2, rad^2.
    pub variance: f64,
    /// 3-dB linewidth, Hz.
    pub linewidth: f64,
    /// RMS timing jitter (DAC clock + LO), s.
    pub jitter_rms: f64,
}

impl PhaseNoiseModel {
    pub fn new(variance: f64, linewidth: f64, jitter_rms: f64) -> Result<Self> {
        require_non_negative("phase-noise variance", variance)?;
        require_non_negative("linewidth", linewidth)?;
        require_non_negative("jitter_rms", jitter_rms)?;
        Ok(Self {
            variance,
            linewidth,
            jitter_rms,
        })
    }

    pub fn none() -> Self {
        Self {
            variance: 0.0,
            linewidth: 0.0,
            jitter_rms: 0.0,
        }
    }

    /// Free-running oscillator: variance accumulated by a Wiener phase over
    /// `observation_s`, sigma^2 = 2 pi dnu T.
    pub fn from_linewidth(linewidth: f64, observation_s: f64) -> Result<Self> {
        require_non_negative("linewidth", linewidth)?;
        require_non_negative("observation time", observation_s)?;
        Self::new(2.0 * PI * linewidth * observation_s, linewidth, 0.0)
    }

    /// rho(dt) = exp(-2 pi dnu |dt|).
    pub fn correlation(&self, dt: f64) -> f64 {
        (-2.0 * PI * self.linewidth * dt.abs()).exp()
    }

    /// |E[e^{j phi}]|^2 = e^{-sigma^2}: coherent power retained.
    pub fn coherent_power_factor(&self) -> f64 {
        (-self.variance).exp()
    }

    /// Cov(e^{j phi_k}, e^{j phi_l}) for a pair with correlation rho.
    pub fn exponential_covariance(&self, rho: f64) -> f64 {
        // e^{-s(1-rho)} - e^{-s} = e^{-s} (e^{s rho} - 1)
        (-self.variance).exp() * (self.variance * rho).exp_m1()
    }
}

fn check_time_grid(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !t.is_finite()) {
        return domain("time grid contains non-finite entries");
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return domain("time grid must be strictly increasing");
    }
    Ok(())
}

/// Eigenvalues above this (negative) threshold are treated as rounding dust.
pub const PSD_TOLERANCE: f64 = 1e-10;

/// Phase-noise correlation matrix R_phi over the pilot instants.
///
/// [R]_kl = exp(-sigma^2 (1 - rho_kl)) - exp(-sigma^2). Negative eigenvalues
/// within `PSD_TOLERANCE` are clipped to zero; anything more negative is an
/// error.
pub fn phase_correlation_matrix(times: &[f64], model: &PhaseNoiseModel) -> Result<DMatrix<f64>> {
    check_time_grid(times)?;
    let n = times.len();
    if model.variance == 0.0 {
        return Ok(DMatrix::zeros(n, n));
    }
    let mut r = DMatrix::zeros(n, n);
    for k in 0..n {
        for l in k..n {
            let v = model.exponential_covariance(model.correlation(times[k] - times[l]));
            r[(k, l)] = v;
            r[(l, k)] = v;
        }
    }
    let eig = SymmetricEigen::new(r.clone());
    let min = eig.eigenvalues.min();
    if min < -PSD_TOLERANCE {
        return Err(Error::Numerical(format!(
            "phase correlation matrix is indefinite (min eigenvalue {min:.3e})"
        )));
    }
    if min < 0.0 {
        let clipped = eig.eigenvalues.map(|x| x.max(0.0));
        let v = &eig.eigenvectors;
        let mut rebuilt = v * DMatrix::from_diagonal(&clipped) * v.transpose();
        rebuilt = (&rebuilt + rebuilt.transpose()) * 0.5;
        return Ok(rebuilt);
    }
    Ok(r)
}

/// Draws one phase trajectory at `times` from the stationary Gaussian
/// process with variance sigma^2 and correlation rho(dt) (an
/// Ornstein-Uhlenbeck process sampled exactly).
pub fn sample_phase_trajectory<R: Rng + ?Sized>(
    times: &[f64],
    model: &PhaseNoiseModel,
    rng: &mut R,
) -> Vec<f64> {
    let sd = model.variance.sqrt();
    let mut out = Vec::with_capacity(times.len());
    let mut prev: Option<(f64, f64)> = None;
    for &t in times {
        let z: f64 = rng.sample(StandardNormal);
        let phi = match prev {
            None => sd * z,
            Some((t0, p0)) => {
                let rho = model.correlation(t - t0);
                rho * p0 + sd * (1.0 - rho * rho).max(0.0).sqrt() * z
            }
        };
        out.push(phi);
        prev = Some((t, phi));
    }
    out
}

/// Hardware quality factor and its component contributions (all
/// dimensionless, normalized to signal power).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaBreakdown {
    pub pa: f64,
    pub lo: f64,
    pub adc: f64,
    pub total: f64,
}

impl GammaBreakdown {
    fn from_parts(pa: f64, lo: f64, adc: f64) -> Self {
        Self {
            pa,
            lo,
            adc,
            total: pa + lo + adc,
        }
    }
}

/// Gamma_PA = EVM^2, Gamma_LO = (pi B sigma_t)^2,
/// Gamma_ADC = 10^{-(6.02 ENOB + 1.76)/10}.
pub fn gamma_components(
    evm_pa: f64,
    b_sig: f64,
    jitter_rms: f64,
    enob: f64,
) -> Result<GammaBreakdown> {
    if !(evm_pa.is_finite() && (0.0..1.0).contains(&evm_pa)) {
        return domain(format!("evm_pa must lie in [0, 1), got {evm_pa}"));
    }
    require_positive("signal bandwidth", b_sig)?;
    require_non_negative("jitter_rms", jitter_rms)?;
    require_positive("enob", enob)?;
    let pa = evm_pa * evm_pa;
    let lo = (PI * b_sig * jitter_rms).powi(2);
    let adc = 10f64.powf(-(6.02 * enob + 1.76) / 10.0);
    Ok(GammaBreakdown::from_parts(pa, lo, adc))
}

/// Component-level description of a transceiver class.
#[derive(Debug, Clone, PartialEq)]
pub struct HardwareProfile {
    pub name: String,
    pub evm_pa: f64,
    /// RMS oscillator jitter, s.
    pub jitter_rms: f64,
    pub enob: f64,
    /// Oscillator 3-dB linewidth, Hz.
    pub linewidth: f64,
    /// Bandwidth entering Gamma_LO, Hz.
    pub signal_bandwidth: f64,
    /// Bandwidth the profile operates at (noise, frame timing, net rate), Hz.
    pub operating_bandwidth: f64,
    /// Breakdown derived from the component figures.
    pub gamma_breakdown: GammaBreakdown,
    /// System-level Gamma_eff quoted for the class, if any. Kept separate
    /// from the component sum; the two are never reconciled.
    pub gamma_eff_asserted: Option<f64>,
}

impl HardwareProfile {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        evm_pa: f64,
        jitter_rms: f64,
        enob: f64,
        linewidth: f64,
        signal_bandwidth: f64,
        operating_bandwidth: f64,
        gamma_eff_asserted: Option<f64>,
    ) -> Result<Self> {
        require_non_negative("linewidth", linewidth)?;
        require_positive("operating bandwidth", operating_bandwidth)?;
        if let Some(g) = gamma_eff_asserted {
            require_non_negative("asserted gamma_eff", g)?;
        }
        let gamma_breakdown = gamma_components(evm_pa, signal_bandwidth, jitter_rms, enob)?;
        Ok(Self {
            name: name.into(),
            evm_pa,
            jitter_rms,
            enob,
            linewidth,
            signal_bandwidth,
            operating_bandwidth,
            gamma_breakdown,
            gamma_eff_asserted,
        })
    }

    /// The quality factor used downstream: the asserted class value when
    /// present, otherwise the component sum.
    pub fn gamma_eff(&self) -> f64 {
        self.gamma_eff_asserted
            .unwrap_or(self.gamma_breakdown.total)
    }

    /// Recomputes the breakdown after component fields were edited.
    pub fn recompute(&mut self) -> Result<()> {
        self.gamma_breakdown = gamma_components(
            self.evm_pa,
            self.signal_bandwidth,
            self.jitter_rms,
            self.enob,
        )?;
        Ok(())
    }
}

/// The four reference transceiver classes.
///
/// High-Performance and SWaP-Efficient carry published component figures.
/// The State-of-the-Art and Low-Cost component figures are illustrative
/// values chosen so their sums land near the class Gamma_eff.
pub fn builtin_profiles() -> Vec<HardwareProfile> {
    let spec = [
        ("state_of_the_art", 0.068, 10e-15, 7.0, 100e9, 0.005),
        ("high_performance", 0.106, 20.9e-15, 6.0, 20e9, 0.01),
        ("swap_efficient", 0.2093, 70e-15, 5.0, 10e9, 0.025),
        ("low_cost", 0.22, 100e-15, 5.0, 5e9, 0.05),
    ];
    spec.iter()
        .map(|&(name, evm, jitter, enob, bw, gamma)| {
            HardwareProfile::new(name, evm, jitter, enob, 100e3, 10e9, bw, Some(gamma))
                .expect("built-in profile parameters are valid")
        })
        .collect()
}

pub fn builtin_profile(name: &str) -> Option<HardwareProfile> {
    builtin_profiles().into_iter().find(|p| p.name == name)
}

/// Warns when the drive level leaves the quasi-linear region where a
/// power-independent Gamma_eff is meaningful.
pub fn saturation_warning(kappa: f64) -> Option<String> {
    if kappa > 1.0 {
        let msg = format!(
            "input back-off ratio {kappa:.3} exceeds 1: PA is in deep saturation and a constant \
             Gamma_eff underestimates distortion"
        );
        log::warn!("{msg}");
        Some(msg)
    } else {
        None
    }
}
