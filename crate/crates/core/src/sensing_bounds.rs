//! Bayesian Cramer-Rao bounds for range, range-rate and pointing error.
//!
//! The pilot observations follow the Gaussian-equivalent model
//! y_k = e^{-sigma_phi^2/2} m_k + w_k with w ~ CN(0, Sigma), where
//! m_k = g(eta, t_k) B s_k is the conditional mean and
//! Sigma = (m m^H) o R_phi + sigma_add^2 I. Sigma follows m, so the
//! Doppler rotation across the frame enters the covariance too.
//!
//! Parameters are perturbations around a nominal state so that the
//! carrier phase k R is never formed in absolute terms.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use std::fmt;

use crate::error::{domain, require_non_negative, require_positive, Error, Result};
use crate::hardware_impairments::{phase_correlation_matrix, sample_phase_trajectory, PhaseNoiseModel};
use crate::link_channel::{friis_gain, AntennaConfig, NoiseBudget, ScenarioGeometry};
use crate::random::rng_for;
use crate::units::SPEED_OF_LIGHT;

/// Observable parameters along the link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Param {
    Range,
    RangeRate,
    PointingX,
    PointingY,
}

impl Param {
    pub const ALL: [Param; 4] = [Param::Range, Param::RangeRate, Param::PointingX, Param::PointingY];

    pub fn label(&self) -> &'static str {
        match self {
            Param::Range => "range",
            Param::RangeRate => "range_rate",
            Param::PointingX => "pointing_x",
            Param::PointingY => "pointing_y",
        }
    }

    pub fn unit(&self) -> &'static str {
        match self {
            Param::Range => "m",
            Param::RangeRate => "m/s",
            Param::PointingX | Param::PointingY => "rad",
        }
    }

    pub fn from_label(label: &str) -> Result<Self> {
        Param::ALL
            .into_iter()
            .find(|p| p.label() == label)
            .ok_or_else(|| Error::UnknownParameter(label.to_string()))
    }

    pub fn index(&self) -> usize {
        *self as usize
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Pilot layout within one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotFrame {
    pub m_pilots: usize,
    pub frame_symbols: usize,
    /// Observation instants, s, relative to the frame centre.
    pub times: Vec<f64>,
    /// Per-pilot amplitude |s_k|, sqrt(W).
    pub symbol_amp: Vec<f64>,
    pub frame_duration: f64,
}

impl PilotFrame {
    /// M constant-modulus pilots spread uniformly over a frame of K symbols
    /// at symbol rate `bandwidth_hz`, centred on the frame midpoint.
    pub fn uniform(m_pilots: usize, frame_symbols: usize, bandwidth_hz: f64, power_w: f64) -> Result<Self> {
        require_positive("bandwidth", bandwidth_hz)?;
        require_positive("pilot power", power_w)?;
        if m_pilots < 2 {
            return domain("need at least two pilots");
        }
        if m_pilots > frame_symbols {
            return domain(format!("{m_pilots} pilots do not fit in {frame_symbols} symbols"));
        }
        let frame_duration = frame_symbols as f64 / bandwidth_hz;
        let spacing = frame_duration / m_pilots as f64;
        let mid = (m_pilots as f64 - 1.0) / 2.0;
        let times = (0..m_pilots).map(|k| (k as f64 - mid) * spacing).collect();
        Ok(Self {
            m_pilots,
            frame_symbols,
            times,
            symbol_amp: vec![power_w.sqrt(); m_pilots],
            frame_duration,
        })
    }

    /// Frame with an explicit time grid.
    pub fn with_times(times: Vec<f64>, frame_symbols: usize, frame_duration: f64, power_w: f64) -> Result<Self> {
        require_positive("pilot power", power_w)?;
        require_positive("frame duration", frame_duration)?;
        let m = times.len();
        if m < 2 || m > frame_symbols {
            return domain("pilot count must lie in [2, frame_symbols]");
        }
        if times.windows(2).any(|w| w[1].is_nan() || w[0].is_nan() || w[1] <= w[0]) {
            return domain("pilot times must be strictly increasing");
        }
        Ok(Self {
            m_pilots: m,
            frame_symbols,
            times,
            symbol_amp: vec![power_w.sqrt(); m],
            frame_duration,
        })
    }

    /// Returns a copy with every pilot at amplitude sqrt(power_w).
    pub fn with_power(&self, power_w: f64) -> Self {
        let mut f = self.clone();
        f.symbol_amp = vec![power_w.sqrt(); self.m_pilots];
        f
    }

    pub fn is_constant_modulus(&self) -> bool {
        let a0 = self.symbol_amp[0];
        self.symbol_amp.iter().all(|&a| (a - a0).abs() <= 1e-12 * a0.abs())
    }

    pub fn power(&self) -> f64 {
        self.symbol_amp[0] * self.symbol_amp[0]
    }
}

/// Everything the Fisher computation needs about one link state.
#[derive(Debug, Clone, PartialEq)]
pub struct SensingScenario {
    pub geometry: ScenarioGeometry,
    pub antenna: AntennaConfig,
    pub frame: PilotFrame,
    /// Nominal pointing error [theta_x, theta_y], rad.
    pub pointing: [f64; 2],
    pub bussgang_gain: Complex64,
    /// sigma_eta^2 at the transmitter, W.
    pub distortion_power: f64,
    pub thermal_w: f64,
    pub dse_residual_w: f64,
    pub phase_noise: PhaseNoiseModel,
}

/// Per-parameter finite-difference scale: one radian of carrier phase for
/// range and range-rate, one beamwidth for pointing.
pub fn parameter_scale(scenario: &SensingScenario, param: Param) -> f64 {
    let k = scenario.antenna.wavenumber();
    match param {
        Param::Range => 1.0 / k,
        Param::RangeRate => 1.0 / (k * scenario.frame.frame_duration),
        Param::PointingX | Param::PointingY => scenario.antenna.beamwidth_rad,
    }
}

impl SensingScenario {
    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        require_non_negative("distortion power", self.distortion_power)?;
        require_non_negative("thermal noise", self.thermal_w)?;
        require_non_negative("DSE residual", self.dse_residual_w)?;
        if self.bussgang_gain.norm() == 0.0 || !self.bussgang_gain.norm().is_finite() {
            return domain("Bussgang gain must be finite and non-zero");
        }
        Ok(())
    }

    /// Free-space gain at the nominal state (no pointing loss).
    fn friis(&self) -> Result<Complex64> {
        friis_gain(&self.geometry, &self.antenna)
    }

    /// |g|^2 at offset `delta` = [dR, dRdot, dthx, dthy] (time independent).
    fn gain_power(&self, delta: &[f64; 4]) -> Result<f64> {
        let g0 = self.friis()?.norm_sqr();
        let r0 = self.geometry.range_m;
        let ratio = r0 / (r0 + delta[0]);
        let tx = self.pointing[0] + delta[2];
        let ty = self.pointing[1] + delta[3];
        Ok(g0 * ratio * ratio * (-self.antenna.power_rolloff * (tx * tx + ty * ty)).exp())
    }

    /// Channel gain magnitude at the nominal state, including pointing loss.
    pub fn gain_magnitude(&self) -> Result<f64> {
        Ok(self.gain_power(&[0.0; 4])?.sqrt())
    }

    /// Conditional mean m_k(eta) at offset `delta`.
    pub fn mean_vector(&self, delta: &[f64; 4]) -> Result<Vec<Complex64>> {
        let g0 = self.friis()?;
        let k = self.antenna.wavenumber();
        let gamma = self.antenna.amp_rolloff;
        let r0 = self.geometry.range_m;
        let [px, py] = self.pointing;
        let (tx, ty) = (px + delta[2], py + delta[3]);
        // exp(-gamma(|theta0 + d|^2 - |theta0|^2)) relative to the nominal point,
        // times the nominal factor
        let point = (-gamma * (px * px + py * py)).exp()
            * (-gamma * ((tx * tx + ty * ty) - (px * px + py * py))).exp();
        let amp = r0 / (r0 + delta[0]) * point;
        let rate = self.geometry.range_rate_mps + delta[1];
        Ok(self
            .frame
            .times
            .iter()
            .zip(&self.frame.symbol_amp)
            .map(|(&t, &s)| {
                let phase = -k * (delta[0] + rate * t);
                g0 * self.bussgang_gain * s * Complex64::from_polar(amp, phase)
            })
            .collect())
    }

    /// Analytic derivative of the conditional mean.
    pub fn mean_gradient(&self, param: Param) -> Result<Vec<Complex64>> {
        let m = self.mean_vector(&[0.0; 4])?;
        let k = self.antenna.wavenumber();
        let gamma = self.antenna.amp_rolloff;
        let out = match param {
            Param::Range => {
                let f = Complex64::new(-1.0 / self.geometry.range_m, -k);
                m.iter().map(|&x| x * f).collect()
            }
            Param::RangeRate => m
                .iter()
                .zip(&self.frame.times)
                .map(|(&x, &t)| x * Complex64::new(0.0, -k * t))
                .collect(),
            Param::PointingX | Param::PointingY => {
                let th = self.pointing[param.index() - 2];
                m.iter().map(|&x| x * (-2.0 * gamma * th)).collect()
            }
        };
        Ok(out)
    }

    pub fn noise_budget(&self) -> Result<NoiseBudget> {
        let g2 = self.gain_power(&[0.0; 4])?;
        let distortion_w = g2 * self.distortion_power;
        Ok(NoiseBudget {
            thermal_w: self.thermal_w,
            distortion_w,
            dse_residual_w: self.dse_residual_w,
            effective_w: self.thermal_w + distortion_w + self.dse_residual_w,
        })
    }

    /// d ln|g|^2 / d eta.
    fn log_gain_power_derivative(&self, param: Param) -> f64 {
        match param {
            Param::Range => -2.0 / self.geometry.range_m,
            Param::RangeRate => 0.0,
            Param::PointingX | Param::PointingY => {
                -2.0 * self.antenna.power_rolloff * self.pointing[param.index() - 2]
            }
        }
    }

    /// d sigma_eff^2 / d eta through the |g|^2 dependence of the distortion term.
    pub fn noise_sensitivity(&self, param: Param) -> Result<f64> {
        Ok(self.noise_budget()?.distortion_w * self.log_gain_power_derivative(param))
    }

    /// sigma_eff^2 at offset `delta` (for finite-difference checks).
    pub fn effective_noise_at(&self, delta: &[f64; 4]) -> Result<f64> {
        Ok(self.thermal_w + self.gain_power(delta)? * self.distortion_power + self.dse_residual_w)
    }

    /// Sigma at the nominal state. The phase-noise part follows the
    /// conditional mean, Doppler rotation included.
    pub fn covariance(&self) -> Result<ObservationCovariance> {
        if !self.frame.is_constant_modulus() {
            return Err(Error::Unsupported(
                "covariance model requires constant-modulus pilots".into(),
            ));
        }
        let m = self.mean_vector(&[0.0; 4])?;
        covariance_from_mean(&self.frame.times, &m, &self.phase_noise, self.noise_budget()?.effective_w)
    }

    /// d Sigma / d eta = (d m^H + m d^H) o R_phi + (d sigma_eff^2 / d eta) I.
    pub fn covariance_derivative(&self, param: Param, cov: &ObservationCovariance) -> Result<DMatrix<Complex64>> {
        let m = self.mean_vector(&[0.0; 4])?;
        let d = self.mean_gradient(param)?;
        let n = m.len();
        let noise = self.noise_sensitivity(param)?;
        let mut out = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
        for k in 0..n {
            for l in k..n {
                let v = (d[k] * m[l].conj() + m[k] * d[l].conj()) * cov.correlation[(k, l)];
                out[(k, l)] = v;
                out[(l, k)] = v.conj();
            }
            out[(k, k)] = Complex64::new(out[(k, k)].re + noise, 0.0);
        }
        Ok(out)
    }
}

/// Sigma = phase_part + additive_part I, complex Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationCovariance {
    pub matrix: DMatrix<Complex64>,
    /// (m m^H) o R_phi.
    pub phase_part: DMatrix<Complex64>,
    /// R_phi itself.
    pub correlation: DMatrix<f64>,
    pub additive_part: f64,
}

impl ObservationCovariance {
    /// Largest |A - A^H| entry relative to the largest entry.
    pub fn asymmetry(&self) -> f64 {
        hermitian_defect(&self.matrix)
    }

    pub fn eigenvalues(&self) -> DVector<f64> {
        SymmetricEigen::new(self.matrix.clone()).eigenvalues
    }

    pub fn condition_number(&self) -> f64 {
        let ev = self.eigenvalues();
        let (lo, hi) = (ev.min(), ev.max());
        if lo <= 0.0 {
            f64::INFINITY
        } else {
            hi / lo
        }
    }
}

pub fn hermitian_defect(a: &DMatrix<Complex64>) -> f64 {
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    (a - a.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max) / scale
}

pub fn relative_asymmetry(a: &DMatrix<f64>) -> f64 {
    let scale = a.amax();
    if scale == 0.0 {
        return 0.0;
    }
    (a - a.transpose()).amax() / scale
}

/// Smallest eigenvalue of D^{-1/2} A D^{-1/2}, D = diag(A) (zero diagonal
/// entries left unscaled). Puts matrices with mixed-unit entries on a
/// common footing before a PSD check.
pub fn normalized_min_eigenvalue(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let d: Vec<f64> = (0..n)
        .map(|i| if a[(i, i)] > 0.0 { 1.0 / a[(i, i)].sqrt() } else { 1.0 })
        .collect();
    let mut s = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            s[(i, j)] = a[(i, j)] * d[i] * d[j];
        }
    }
    let s = (&s + s.transpose()) * 0.5;
    SymmetricEigen::new(s).eigenvalues.min()
}

/// Sigma = (m m^H) o R_phi + sigma_add^2 I for a per-pilot signal vector m.
pub fn covariance_from_mean(
    times: &[f64],
    mean: &[Complex64],
    pn: &PhaseNoiseModel,
    additive_w: f64,
) -> Result<ObservationCovariance> {
    require_positive("effective noise", additive_w)?;
    if times.len() != mean.len() {
        return domain("time grid and signal vector lengths differ");
    }
    let correlation = phase_correlation_matrix(times, pn)?;
    let n = mean.len();
    let mut phase_part = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for k in 0..n {
        phase_part[(k, k)] = Complex64::new(mean[k].norm_sqr() * correlation[(k, k)], 0.0);
        for l in k + 1..n {
            let v = mean[k] * mean[l].conj() * correlation[(k, l)];
            phase_part[(k, l)] = v;
            phase_part[(l, k)] = v.conj();
        }
    }
    let mut matrix = phase_part.clone();
    for k in 0..n {
        matrix[(k, k)] += additive_w;
    }
    Ok(ObservationCovariance {
        matrix,
        phase_part,
        correlation,
        additive_part: additive_w,
    })
}

/// Sigma = |g|^2 |B|^2 (s s^H o R_phi) + sigma_add^2 I for a static link
/// (no Doppler rotation across the pilots).
pub fn build_covariance(
    frame: &PilotFrame,
    g: Complex64,
    bussgang_gain: Complex64,
    pn: &PhaseNoiseModel,
    noise: &NoiseBudget,
) -> Result<ObservationCovariance> {
    if !frame.is_constant_modulus() {
        return Err(Error::Unsupported(
            "covariance model requires constant-modulus pilots".into(),
        ));
    }
    let signal: Vec<Complex64> = frame.symbol_amp.iter().map(|&s| g * bussgang_gain * s).collect();
    covariance_from_mean(&frame.times, &signal, pn, noise.effective_w)
}

/// Fisher information and its inverse over a labelled parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct FisherResult {
    pub params: Vec<Param>,
    /// Total information J_B = J_D + J_P.
    pub fim: DMatrix<f64>,
    /// Inverse over the identifiable block, NaN rows/columns elsewhere.
    pub bcrlb: DMatrix<f64>,
    pub identifiable: Vec<bool>,
    pub prior_fim: Option<DMatrix<f64>>,
    /// Condition number of the observation covariance.
    pub covariance_condition: f64,
}

impl FisherResult {
    /// Variance bound for `param`; `None` when the parameter is not
    /// identifiable from this observation.
    pub fn bcrlb(&self, param: Param) -> Result<Option<f64>> {
        let i = self
            .params
            .iter()
            .position(|&p| p == param)
            .ok_or_else(|| Error::UnknownParameter(param.label().into()))?;
        Ok(self.identifiable[i].then(|| self.bcrlb[(i, i)]))
    }

    pub fn rmse(&self, param: Param) -> Result<Option<f64>> {
        Ok(self.bcrlb(param)?.map(f64::sqrt))
    }
}

/// Slepian-Bangs information for y ~ CN(mu(eta), Sigma(eta)):
/// [J]_ij = w 2 Re(d_i^H Sigma^-1 d_j) + tr(Sigma^-1 dSigma_i Sigma^-1 dSigma_j),
/// with `mean_weight` w scaling the mean term (1 for the conditional FIM).
pub fn slepian_bangs_fim(
    gradients: &[Vec<Complex64>],
    covariance: &ObservationCovariance,
    derivatives: &[DMatrix<Complex64>],
    mean_weight: f64,
) -> Result<DMatrix<f64>> {
    let n = gradients.len();
    if derivatives.len() != n {
        return domain("one covariance derivative per gradient is required");
    }
    let chol = Cholesky::new(covariance.matrix.clone()).ok_or_else(|| Error::SingularCovariance {
        condition: covariance.condition_number(),
    })?;
    let solved: Vec<DVector<Complex64>> = gradients
        .iter()
        .map(|d| chol.solve(&DVector::from_column_slice(d)))
        .collect();
    // Sigma^-1 dSigma_i; skipped when the derivative vanishes
    let whitened: Vec<Option<DMatrix<Complex64>>> = derivatives
        .iter()
        .map(|ds| (ds.iter().any(|z| z.norm() != 0.0)).then(|| chol.solve(ds)))
        .collect();
    let mut j = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let mean: f64 = gradients[a]
                .iter()
                .zip(solved[b].iter())
                .map(|(x, y)| (x.conj() * y).re)
                .sum::<f64>()
                * 2.0
                * mean_weight;
            let trace = match (&whitened[a], &whitened[b]) {
                (Some(x), Some(y)) => x.component_mul(&y.transpose()).sum().re,
                _ => 0.0,
            };
            let v = mean + trace;
            j[(a, b)] = v;
            j[(b, a)] = v;
        }
    }
    if j.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical("non-finite Fisher information".into()));
    }
    Ok(j)
}

/// Inverts `fim` on its identifiable subspace.
///
/// The matrix is first scaled to unit diagonal. A parameter is flagged
/// unidentifiable when it has no information at all or when a null
/// direction of the scaled matrix has a non-negligible component along it
/// (e.g. two pointing axes seen only through the same amplitude rolloff).
/// Identifiable entries come from the pseudo-inverse.
pub fn invert_fim(fim: &DMatrix<f64>) -> (DMatrix<f64>, Vec<bool>) {
    const NULL_TOL: f64 = 1e-10;
    const LEAK_TOL: f64 = 1e-6;
    let n = fim.nrows();
    let mut ident: Vec<bool> = (0..n).map(|i| fim[(i, i)] > 0.0).collect();
    let mut out = DMatrix::from_element(n, n, f64::NAN);
    let keep: Vec<usize> = (0..n).filter(|&i| ident[i]).collect();
    if keep.is_empty() {
        return (out, ident);
    }
    let k = keep.len();
    let d: Vec<f64> = keep.iter().map(|&i| fim[(i, i)].sqrt()).collect();
    let mut s = DMatrix::zeros(k, k);
    for (a, &i) in keep.iter().enumerate() {
        for (b, &j) in keep.iter().enumerate() {
            s[(a, b)] = fim[(i, j)] / (d[a] * d[b]);
        }
    }
    let s = (&s + s.transpose()) * 0.5;
    let eig = SymmetricEigen::new(s);
    let top = eig.eigenvalues.max();
    let mut pinv = DMatrix::zeros(k, k);
    for (c, &lam) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvectors.column(c);
        if lam > NULL_TOL * top {
            pinv += v * v.transpose() / lam;
        } else {
            for (a, &i) in keep.iter().enumerate() {
                if v[a].abs() > LEAK_TOL {
                    ident[i] = false;
                }
            }
        }
    }
    for (a, &i) in keep.iter().enumerate() {
        for (b, &j) in keep.iter().enumerate() {
            if ident[i] && ident[j] {
                out[(i, j)] = pinv[(a, b)] / (d[a] * d[b]);
            }
        }
    }
    (out, ident)
}

/// Bayesian FIM J_B = J_D + J_P, with the coherent-power factor
/// e^{-sigma_phi^2} on the mean term of J_D. `prior` defaults to zero.
pub fn bayesian_fim(
    scenario: &SensingScenario,
    params: &[Param],
    prior: Option<&DMatrix<f64>>,
) -> Result<FisherResult> {
    scenario.validate()?;
    if params.is_empty() {
        return domain("at least one parameter is required");
    }
    let cov = scenario.covariance()?;
    let grads = params
        .iter()
        .map(|&p| scenario.mean_gradient(p))
        .collect::<Result<Vec<_>>>()?;
    let derivs = params
        .iter()
        .map(|&p| scenario.covariance_derivative(p, &cov))
        .collect::<Result<Vec<_>>>()?;
    let weight = scenario.phase_noise.coherent_power_factor();
    let mut fim = slepian_bangs_fim(&grads, &cov, &derivs, weight)?;
    if let Some(jp) = prior {
        if jp.nrows() != params.len() || jp.ncols() != params.len() {
            return domain("prior information has the wrong shape");
        }
        fim += jp;
    }
    let (bcrlb, identifiable) = invert_fim(&fim);
    Ok(FisherResult {
        params: params.to_vec(),
        fim,
        bcrlb,
        identifiable,
        prior_fim: prior.cloned(),
        covariance_condition: cov.condition_number(),
    })
}

/// Conservative pointing bound at boresight, where the first-order
/// information vanishes: sigma_eff^2 e^{sigma_phi^2} / (2 gamma^2 M |g|^2 |B|^2 |s|^2).
pub fn pointing_bcrlb_at_boresight(scenario: &SensingScenario) -> Result<f64> {
    let noise = scenario.noise_budget()?.effective_w;
    let gamma = scenario.antenna.amp_rolloff;
    let signal = scenario.gain_magnitude()?.powi(2)
        * scenario.bussgang_gain.norm_sqr()
        * scenario.frame.power()
        * scenario.frame.m_pilots as f64;
    if gamma == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(noise * scenario.phase_noise.variance.exp() / (2.0 * gamma * gamma * signal))
}

/// Empirical first and second moments of the pilot observations, drawn
/// with explicit phase trajectories: y_k = m_k e^{j phi_k} + w_k with
/// w ~ CN(0, sigma_eff^2 I). Used to check the Gaussian-equivalent model.
pub fn sample_observation_moments(
    scenario: &SensingScenario,
    samples: usize,
    seed: u64,
) -> Result<(Vec<Complex64>, DMatrix<Complex64>)> {
    if samples < 2 {
        return domain("need at least two samples");
    }
    let m = scenario.mean_vector(&[0.0; 4])?;
    let noise_sd = (scenario.noise_budget()?.effective_w / 2.0).sqrt();
    let n = m.len();
    let mut rng = rng_for(seed, 0x5E45);
    let mut mean = vec![Complex64::new(0.0, 0.0); n];
    let mut second = DMatrix::<Complex64>::zeros(n, n);
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    for _ in 0..samples {
        let phi = sample_phase_trajectory(&scenario.frame.times, &scenario.phase_noise, &mut rng);
        for k in 0..n {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            y[k] = m[k] * Complex64::from_polar(1.0, phi[k]) + Complex64::new(a, b) * noise_sd;
            mean[k] += y[k];
        }
        for k in 0..n {
            for l in 0..n {
                second[(k, l)] += y[k] * y[l].conj();
            }
        }
    }
    let nf = samples as f64;
    let mean: Vec<Complex64> = mean.into_iter().map(|x| x / nf).collect();
    let mut cov = second / Complex64::new(nf, 0.0);
    for k in 0..n {
        for l in 0..n {
            cov[(k, l)] -= mean[k] * mean[l].conj();
        }
    }
    Ok((mean, cov))
}

/// Convenience: wavenumber-scaled carrier phase per metre of range.
pub fn range_phase_ratio(scenario: &SensingScenario) -> f64 {
    2.0 * std::f64::consts::PI * scenario.antenna.carrier_hz * scenario.geometry.range_m / SPEED_OF_LIGHT
}
