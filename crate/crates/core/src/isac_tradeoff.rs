//! Capacity-distortion trade-off via a modified Blahut-Arimoto ascent.
//!
//! The input distribution p_X over a fixed constellation sets the average
//! transmit power, which drives both the mutual information and the
//! sensing bound. Points are normalized once to unit power under the
//! uniform distribution; any other p_X changes the average power.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use std::f64::consts::{LN_2, PI};

use crate::error::{domain, require_non_negative, require_positive, Result};
use crate::random::rng_for;
use crate::sensing_bounds::{bayesian_fim, Param, SensingScenario};

#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    pub points: Vec<Complex64>,
    pub labels: Vec<String>,
}

impl Constellation {
    /// Accepts arbitrary points and scales them to unit mean power under
    /// the uniform distribution.
    pub fn custom(points: Vec<Complex64>) -> Result<Self> {
        if points.len() < 2 {
            return domain("a constellation needs at least two points");
        }
        if points.iter().any(|p| !p.re.is_finite() || !p.im.is_finite()) {
            return domain("constellation points must be finite");
        }
        for (i, a) in points.iter().enumerate() {
            if points[i + 1..].iter().any(|b| (a - b).norm() == 0.0) {
                return domain("constellation points must be distinct");
            }
        }
        let mean_power = points.iter().map(|p| p.norm_sqr()).sum::<f64>() / points.len() as f64;
        let s = 1.0 / mean_power.sqrt();
        let labels = (0..points.len()).map(|i| i.to_string()).collect();
        Ok(Self {
            points: points.into_iter().map(|p| p * s).collect(),
            labels,
        })
    }

    /// Square M-QAM grid (M = 4, 16, 64, ...).
    pub fn square_qam(order: usize) -> Result<Self> {
        let side = (order as f64).sqrt().round() as usize;
        if side < 2 || side * side != order {
            return domain(format!("{order}-QAM is not a square grid"));
        }
        let pts = (0..order)
            .map(|k| {
                let (i, q) = (k % side, k / side);
                Complex64::new(2.0 * i as f64 - (side - 1) as f64, 2.0 * q as f64 - (side - 1) as f64)
            })
            .collect();
        let mut c = Self::custom(pts)?;
        c.labels = (0..order).map(|k| format!("qam{order}_{k}")).collect();
        Ok(c)
    }

    /// Constant-modulus ring (PSK).
    pub fn psk(order: usize) -> Result<Self> {
        if order < 2 {
            return domain("PSK needs at least two points");
        }
        let pts = (0..order)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / order as f64))
            .collect();
        let mut c = Self::custom(pts)?;
        c.labels = (0..order).map(|k| format!("psk{order}_{k}")).collect();
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn average_power(&self, dist: &InputDistribution) -> f64 {
        self.points
            .iter()
            .zip(&dist.probs)
            .map(|(x, p)| p * x.norm_sqr())
            .sum()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.points.iter().map(|x| x.norm_sqr()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputDistribution {
    pub probs: Vec<f64>,
}

impl InputDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() || probs.iter().any(|&p| p.is_nan() || p < 0.0 || !p.is_finite()) {
            return domain("probabilities must be finite and non-negative");
        }
        let s: f64 = probs.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return domain(format!("probabilities sum to {s}, not 1"));
        }
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            probs: vec![1.0 / n as f64; n],
        }
    }

    /// Index of the point carrying all the mass, if any.
    pub fn degenerate_index(&self) -> Option<usize> {
        self.probs.iter().position(|&p| p == 1.0)
    }

    pub fn l1_distance(&self, other: &Self) -> f64 {
        self.probs.iter().zip(&other.probs).map(|(a, b)| (a - b).abs()).sum()
    }
}

/// Euclidean projection onto the probability simplex (sort-and-threshold).
pub fn project_simplex(v: &[f64]) -> Result<InputDistribution> {
    if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
        return domain("projection input must be a non-empty finite vector");
    }
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (k, &x) in u.iter().enumerate() {
        cum += x;
        let t = (cum - 1.0) / (k + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    let mut probs: Vec<f64> = v.iter().map(|&x| (x - theta).max(0.0)).collect();
    // absorb rounding so the result sums to one
    let s: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= s);
    Ok(InputDistribution { probs })
}

/// y = a x + n with n ~ CN(0, N0 + distortion_scale * P_avg + dse). `a`
/// already carries the coherent phase-noise factor e^{-sigma_phi^2/2}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianEquivalentChannel {
    pub coefficient: Complex64,
    pub thermal_w: f64,
    /// Gamma_eff |g|^2 |B|^2 P: distortion per unit constellation power.
    pub distortion_scale: f64,
    pub dse_w: f64,
}

impl GaussianEquivalentChannel {
    #[allow(clippy::too_many_arguments)]
    pub fn from_link(
        p_w: f64,
        g: Complex64,
        bussgang_gain: Complex64,
        n0_w: f64,
        sigma_phi2: f64,
        gamma_eff: f64,
        dse_w: f64,
    ) -> Result<Self> {
        require_positive("transmit power", p_w)?;
        require_positive("noise power", n0_w)?;
        require_non_negative("phase-noise variance", sigma_phi2)?;
        require_non_negative("gamma_eff", gamma_eff)?;
        require_non_negative("DSE residual", dse_w)?;
        let rx = g.norm_sqr() * bussgang_gain.norm_sqr() * p_w;
        Ok(Self {
            coefficient: g * bussgang_gain * p_w.sqrt() * (-sigma_phi2 / 2.0).exp(),
            thermal_w: n0_w,
            distortion_scale: gamma_eff * rx,
            dse_w,
        })
    }

    /// Channel with SINR `sinr` at unit constellation power and no
    /// signal-dependent distortion.
    pub fn awgn(sinr: f64) -> Self {
        Self {
            coefficient: Complex64::new(sinr.sqrt(), 0.0),
            thermal_w: 1.0,
            distortion_scale: 0.0,
            dse_w: 0.0,
        }
    }

    pub fn noise_variance(&self, p_avg: f64) -> f64 {
        self.thermal_w + self.distortion_scale * p_avg + self.dse_w
    }

    pub fn sinr(&self, p_avg: f64) -> f64 {
        self.coefficient.norm_sqr() * p_avg / self.noise_variance(p_avg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MiEstimate {
    pub bits: f64,
    pub std_error: f64,
    /// D(p(y|x_i) || p(y)) in bits for every letter, including those with
    /// zero probability. Its p-weighted sum is `bits`.
    pub letter_divergence: Vec<f64>,
    pub samples: usize,
}

pub const MIN_MI_SAMPLES: usize = 10_000;
const MI_BATCH: usize = 1024;

/// Monte Carlo I(X;Y) over the Gaussian-equivalent channel.
///
/// Each letter is pushed through the same noise draws (common random
/// numbers), so estimates at nearby distributions are smoothly related.
pub fn mutual_information_mc(
    constellation: &Constellation,
    dist: &InputDistribution,
    channel: &GaussianEquivalentChannel,
    n_samples: usize,
    seed: u64,
) -> Result<MiEstimate> {
    let n = constellation.len();
    if dist.probs.len() != n {
        return domain("distribution and constellation sizes differ");
    }
    if n_samples < MIN_MI_SAMPLES {
        return domain(format!("at least {MIN_MI_SAMPLES} samples are required"));
    }
    if dist.degenerate_index().is_some() {
        return Ok(MiEstimate {
            bits: 0.0,
            std_error: 0.0,
            letter_divergence: vec![0.0; n],
            samples: n_samples,
        });
    }
    let p_avg = constellation.average_power(dist);
    let var = channel.noise_variance(p_avg);
    require_positive("noise variance", var)?;
    let sd = (var / 2.0).sqrt();
    let per_letter = n_samples.div_ceil(n);
    let ax: Vec<Complex64> = constellation.points.iter().map(|&x| channel.coefficient * x).collect();
    let log_p: Vec<f64> = dist.probs.iter().map(|&p| if p > 0.0 { p.ln() } else { f64::NEG_INFINITY }).collect();
    let batches = per_letter.div_ceil(MI_BATCH);

    // per batch: per-letter sums, then sum and sum of squares of the mixed term
    let partial: Vec<(Vec<f64>, f64, f64)> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = rng_for(seed, b as u64);
            let count = MI_BATCH.min(per_letter - b * MI_BATCH);
            let mut sums = vec![0.0; n];
            let (mut s1, mut s2) = (0.0, 0.0);
            let mut expo = vec![0.0; n];
            for _ in 0..count {
                let z = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)) * sd;
                let mut mixed = 0.0;
                for i in 0..n {
                    let y = ax[i] + z;
                    let own = -z.norm_sqr() / var;
                    let mut max = f64::NEG_INFINITY;
                    for l in 0..n {
                        let e = log_p[l] - (y - ax[l]).norm_sqr() / var;
                        expo[l] = e;
                        max = max.max(e);
                    }
                    let lse = max + expo.iter().map(|e| (e - max).exp()).sum::<f64>().ln();
                    let t = (own - lse) / LN_2;
                    sums[i] += t;
                    mixed += dist.probs[i] * t;
                }
                s1 += mixed;
                s2 += mixed * mixed;
            }
            (sums, s1, s2)
        })
        .collect();

    let mut sums = vec![0.0; n];
    let (mut s1, mut s2) = (0.0, 0.0);
    for (ps, a, b) in &partial {
        for (s, x) in sums.iter_mut().zip(ps) {
            *s += x;
        }
        s1 += a;
        s2 += b;
    }
    let m = per_letter as f64;
    let letter_divergence: Vec<f64> = sums.iter().map(|s| s / m).collect();
    let bits = s1 / m;
    let var_t = (s2 / m - bits * bits).max(0.0) * m / (m - 1.0);
    Ok(MiEstimate {
        bits,
        std_error: (var_t / m).sqrt(),
        letter_divergence,
        samples: per_letter * n,
    })
}

/// Sensing distortion as a function of the average constellation power.
pub trait DistortionModel: Sync {
    fn distortion(&self, p_avg: f64) -> Result<f64>;
}

impl<F> DistortionModel for F
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    fn distortion(&self, p_avg: f64) -> Result<f64> {
        self(p_avg)
    }
}

/// Normalized BCRLB trace over [R, Rdot] for pilots sent at the average
/// power implied by p_X.
#[derive(Debug, Clone, PartialEq)]
pub struct SensingDistortion {
    /// Scenario evaluated at unit constellation power.
    pub scenario: SensingScenario,
    pub tx_power_w: f64,
    pub gamma_eff: f64,
    /// Reference variances dividing each diagonal entry: m^2, (m/s)^2.
    pub reference: [f64; 2],
}

impl SensingDistortion {
    pub fn new(scenario: SensingScenario, tx_power_w: f64, gamma_eff: f64) -> Self {
        Self {
            scenario,
            tx_power_w,
            gamma_eff,
            reference: [1e-6, 1e-6],
        }
    }
}

impl DistortionModel for SensingDistortion {
    fn distortion(&self, p_avg: f64) -> Result<f64> {
        require_positive("average power", p_avg)?;
        let p = self.tx_power_w * p_avg;
        let mut s = self.scenario.clone();
        s.frame = s.frame.with_power(p);
        s.distortion_power = self.gamma_eff * p;
        let r = bayesian_fim(&s, &[Param::Range, Param::RangeRate], None)?;
        let mut d = 0.0;
        for (p, r0) in [Param::Range, Param::RangeRate].iter().zip(self.reference) {
            match r.bcrlb(*p)? {
                Some(v) => d += v / r0,
                None => return Ok(f64::INFINITY),
            }
        }
        Ok(d)
    }
}

/// Output of the trade-off ascent.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffPoint {
    pub distortion: f64,
    pub rate: f64,
    pub rate_std_error: f64,
    pub distribution: InputDistribution,
    pub lambda: f64,
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaOptions {
    /// Distortion ceiling; `f64::INFINITY` for the unconstrained problem.
    pub d_target: f64,
    /// Relative slack on the target accepted at convergence.
    pub tolerance: f64,
    pub max_iters: usize,
    pub mi_samples: usize,
    pub seed: u64,
    pub initial_step: f64,
}

impl Default for BaOptions {
    fn default() -> Self {
        Self {
            d_target: f64::INFINITY,
            tolerance: 0.05,
            max_iters: 200,
            mi_samples: 100_000,
            seed: 0,
            initial_step: 0.05,
        }
    }
}

pub const LAMBDA_UP: f64 = 1.5;
pub const LAMBDA_DOWN: f64 = 0.8;
const MIN_STEP: f64 = 1e-6;
const CHANGE_TOL: f64 = 1e-4;
const STABLE_ITERS: usize = 3;
// constrained runs: stop once the best feasible rate has not improved by
// more than RATE_TOL bits for this many iterations
const PLATEAU_ITERS: usize = 25;
const RATE_TOL: f64 = 1e-4;

struct Evaluated {
    dist: InputDistribution,
    mi: MiEstimate,
    d: f64,
}

/// Distortion of p_X through the model.
pub fn distortion_of<D: DistortionModel + ?Sized>(
    constellation: &Constellation,
    dist: &InputDistribution,
    model: &D,
) -> Result<f64> {
    model.distortion(constellation.average_power(dist))
}

/// Modified Blahut-Arimoto: projected ascent on
/// L = I(X;Y) - lambda (D / D_target - 1) with multiplicative lambda
/// updates (x1.5 when D exceeds the target, x0.8 otherwise) and
/// backtracking on the step size.
///
/// A constrained call first solves the unconstrained problem; when that
/// optimum already meets the target it is returned with lambda = 0, so every
/// target above its distortion yields the same point.
pub fn ba_optimize<D: DistortionModel + ?Sized>(
    constellation: &Constellation,
    channel: &GaussianEquivalentChannel,
    model: &D,
    opts: &BaOptions,
) -> Result<TradeoffPoint> {
    if opts.d_target.is_nan() || opts.d_target <= 0.0 {
        return domain("distortion target must be > 0");
    }
    require_positive("tolerance", opts.tolerance)?;
    if opts.max_iters == 0 {
        return domain("max_iters must be at least 1");
    }
    let constrained = opts.d_target.is_finite();
    if constrained {
        let free = ba_optimize(constellation, channel, model, &BaOptions { d_target: f64::INFINITY, ..*opts })?;
        if free.distortion <= opts.d_target {
            return Ok(TradeoffPoint { lambda: 0.0, ..free });
        }
    }
    let energies = constellation.energies();
    let evaluate = |dist: InputDistribution| -> Result<Evaluated> {
        let mi = mutual_information_mc(constellation, &dist, channel, opts.mi_samples, opts.seed)?;
        let d = distortion_of(constellation, &dist, model)?;
        Ok(Evaluated { dist, mi, d })
    };
    let lagrangian = |e: &Evaluated, lambda: f64| {
        if constrained {
            e.mi.bits - lambda * (e.d / opts.d_target - 1.0)
        } else {
            e.mi.bits
        }
    };
    let feasible = |d: f64| !constrained || d <= opts.d_target;

    let mut lambda = 1.0;
    let mut step = opts.initial_step;
    let mut cur = evaluate(InputDistribution::uniform(constellation.len()))?;
    let mut best: Option<(f64, f64, f64, InputDistribution)> = None;
    let consider = |e: &Evaluated, best: &mut Option<(f64, f64, f64, InputDistribution)>| -> bool {
        if !feasible(e.d) {
            return false;
        }
        let gain = best.as_ref().map_or(f64::INFINITY, |b| e.mi.bits - b.0);
        if gain > 0.0 {
            *best = Some((e.mi.bits, e.mi.std_error, e.d, e.dist.clone()));
        }
        gain > RATE_TOL
    };
    consider(&cur, &mut best);
    let mut last_gain = 0;
    let mut stable = 0;
    let mut converged = false;
    let mut iterations = 0;
    let mut was_over = constrained && cur.d > opts.d_target;

    for it in 0..opts.max_iters {
        iterations = it + 1;
        // dD/dP_avg by central difference
        let slope = if constrained && cur.d.is_finite() {
            let p = constellation.average_power(&cur.dist);
            let h = 1e-4 * p;
            (model.distortion(p + h)? - model.distortion(p - h)?) / (2.0 * h)
        } else {
            0.0
        };
        let grad: Vec<f64> = cur
            .mi
            .letter_divergence
            .iter()
            .zip(&energies)
            .map(|(d, e)| d - lambda * slope * e / opts.d_target)
            .collect();
        let l_cur = lagrangian(&cur, lambda);
        let mut accepted = None;
        while step >= MIN_STEP {
            let trial: Vec<f64> = cur.dist.probs.iter().zip(&grad).map(|(p, g)| p + step * g).collect();
            let cand = evaluate(project_simplex(&trial)?)?;
            if lagrangian(&cand, lambda) >= l_cur {
                accepted = Some(cand);
                break;
            }
            step *= 0.5;
        }
        let change = match accepted {
            Some(next) => {
                let change = next.dist.l1_distance(&cur.dist);
                cur = next;
                step = (step * 1.5).min(1.0);
                change
            }
            None => {
                step = opts.initial_step * 1e-2;
                0.0
            }
        };
        if consider(&cur, &mut best) {
            last_gain = it;
        }
        let over = constrained && cur.d > opts.d_target;
        lambda *= if over { LAMBDA_UP } else { LAMBDA_DOWN };
        if over != was_over {
            // crossing the constraint boundary: shrink the step
            step *= 0.5;
        }
        was_over = over;
        let within = !constrained || cur.d <= opts.d_target * (1.0 + opts.tolerance);
        stable = if change < CHANGE_TOL && within { stable + 1 } else { 0 };
        let plateau = constrained && best.is_some() && it - last_gain >= PLATEAU_ITERS;
        if stable >= STABLE_ITERS || plateau {
            converged = true;
            break;
        }
    }

    if !constrained {
        lambda = 0.0;
    }
    match best {
        Some((rate, se, d, dist)) => Ok(TradeoffPoint {
            distortion: d,
            rate,
            rate_std_error: se,
            distribution: dist,
            lambda,
            converged,
            iterations,
        }),
        None => {
            log::warn!("no feasible point found for distortion target {}", opts.d_target);
            Ok(TradeoffPoint {
                distortion: cur.d,
                rate: cur.mi.bits,
                rate_std_error: cur.mi.std_error,
                distribution: cur.dist,
                lambda,
                converged: false,
                iterations,
            })
        }
    }
}

/// Distortion of the power-maximizing distribution (all mass on the
/// highest-energy points): the smallest D reachable on this constellation.
pub fn minimum_distortion<D: DistortionModel + ?Sized>(constellation: &Constellation, model: &D) -> Result<f64> {
    let emax = constellation.energies().into_iter().fold(0.0, f64::max);
    model.distortion(emax)
}

/// Pairwise squared distances, handy for constellation diagnostics.
pub fn distance_matrix(c: &Constellation) -> DMatrix<f64> {
    let n = c.len();
    DMatrix::from_fn(n, n, |i, j| (c.points[i] - c.points[j]).norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constellations_are_unit_power_under_uniform() {
        for c in [Constellation::square_qam(16).unwrap(), Constellation::square_qam(64).unwrap(), Constellation::psk(8).unwrap()] {
            let p = c.average_power(&InputDistribution::uniform(c.len()));
            assert!((p - 1.0).abs() < 1e-12);
        }
        assert!(Constellation::square_qam(8).is_err());
        assert!(Constellation::custom(vec![Complex64::new(1.0, 0.0)]).is_err());
        assert!(Constellation::custom(vec![Complex64::new(1.0, 0.0); 2]).is_err());
    }

    #[test]
    fn distribution_validation() {
        assert!(InputDistribution::new(vec![0.5, 0.5]).is_ok());
        assert!(InputDistribution::new(vec![0.5, 0.6]).is_err());
        assert!(InputDistribution::new(vec![1.5, -0.5]).is_err());
    }

    #[test]
    fn simplex_projection_cases() {
        let p = project_simplex(&[0.2, 0.3, 0.5]).unwrap();
        assert!((p.probs[0] - 0.2).abs() < 1e-15 && (p.probs[2] - 0.5).abs() < 1e-15);
        assert_eq!(project_simplex(&[1.2, -0.2]).unwrap().probs, vec![1.0, 0.0]);
        let q = project_simplex(&[3.0, 1.0, -2.0, 0.7]).unwrap();
        assert_eq!(project_simplex(&q.probs).unwrap(), q);
        assert!(project_simplex(&[f64::NAN]).is_err());
    }

    #[test]
    fn degenerate_distribution_has_zero_information() {
        let c = Constellation::psk(4).unwrap();
        let d = InputDistribution::new(vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        let mi = mutual_information_mc(&c, &d, &GaussianEquivalentChannel::awgn(10.0), 20_000, 1).unwrap();
        assert_eq!(mi.bits, 0.0);
    }

    #[test]
    fn bpsk_reaches_one_bit_at_high_snr() {
        let c = Constellation::psk(2).unwrap();
        let mi = mutual_information_mc(&c, &InputDistribution::uniform(2), &GaussianEquivalentChannel::awgn(1e3), 20_000, 2).unwrap();
        assert!((mi.bits - 1.0).abs() < 1e-6);
        assert!(mutual_information_mc(&c, &InputDistribution::uniform(2), &GaussianEquivalentChannel::awgn(1.0), 100, 2).is_err());
    }

    #[test]
    fn sixteen_qam_stays_below_gaussian_bound() {
        let c = Constellation::square_qam(16).unwrap();
        let ch = GaussianEquivalentChannel::from_link(1.0, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), 1e-3, 0.0, 0.01, 0.0).unwrap();
        let mi = mutual_information_mc(&c, &InputDistribution::uniform(16), &ch, 100_000, 3).unwrap();
        let cap = (1.0 + ch.sinr(1.0)).log2().min(4.0);
        assert!(mi.bits <= cap + 3.0 * mi.std_error);
        assert!(mi.bits > 3.9, "{}", mi.bits);
    }

    #[test]
    fn mi_is_deterministic_for_a_seed() {
        let c = Constellation::square_qam(16).unwrap();
        let ch = GaussianEquivalentChannel::awgn(5.0);
        let d = InputDistribution::uniform(16);
        let a = mutual_information_mc(&c, &d, &ch, 30_000, 9).unwrap();
        let b = mutual_information_mc(&c, &d, &ch, 30_000, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn letter_divergences_average_to_the_rate() {
        let c = Constellation::square_qam(4).unwrap();
        let d = InputDistribution::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let mi = mutual_information_mc(&c, &d, &GaussianEquivalentChannel::awgn(2.0), 40_000, 4).unwrap();
        let avg: f64 = mi.letter_divergence.iter().zip(&d.probs).map(|(a, b)| a * b).sum();
        assert!((avg - mi.bits).abs() < 1e-12);
    }

    #[test]
    fn unconstrained_ring_stays_uniform() {
        let c = Constellation::psk(8).unwrap();
        let flat = |_p: f64| -> Result<f64> { Ok(1.0) };
        let opts = BaOptions { mi_samples: 20_000, max_iters: 30, ..BaOptions::default() };
        let r = ba_optimize(&c, &GaussianEquivalentChannel::awgn(3.0), &flat, &opts).unwrap();
        for p in &r.distribution.probs {
            assert!((p - 0.125).abs() < 0.02, "{p}");
        }
    }

    #[test]
    fn ba_rejects_bad_target() {
        let c = Constellation::psk(2).unwrap();
        let flat = |_p: f64| -> Result<f64> { Ok(1.0) };
        let opts = BaOptions { d_target: 0.0, ..BaOptions::default() };
        assert!(ba_optimize(&c, &GaussianEquivalentChannel::awgn(1.0), &flat, &opts).is_err());
    }
}
