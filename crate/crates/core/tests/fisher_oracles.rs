mod common;

use common::Setup;
use isl_isac::hardware_impairments::{phase_correlation_matrix, PhaseNoiseModel};
use isl_isac::link_channel::{AntennaConfig, GainMode};
use isl_isac::random::rng_for;
use isl_isac::sensing_bounds::{
    bayesian_fim, pointing_bcrlb_at_boresight, sample_observation_moments, slepian_bangs_fim,
    ObservationCovariance, Param,
};
use isl_isac::stats::log_log_slope;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Toy model: mu(eta) = eta * a, Sigma(eta) = (s0 + s1 eta) I + (c0 + c1 eta) P
/// with P complex Hermitian.
struct Toy {
    a: Vec<Complex64>,
    p: DMatrix<Complex64>,
    s0: f64,
    s1: f64,
    c0: f64,
    c1: f64,
}

impl Toy {
    fn sigma(&self, eta: f64) -> DMatrix<Complex64> {
        let n = self.a.len();
        let eye = DMatrix::<Complex64>::identity(n, n);
        eye * Complex64::from(self.s0 + self.s1 * eta) + &self.p * Complex64::from(self.c0 + self.c1 * eta)
    }

    fn log_lik(&self, y: &[Complex64], eta: f64) -> f64 {
        let chol = self.sigma(eta).cholesky().unwrap();
        let logdet: f64 = 2.0 * chol.l().diagonal().iter().map(|d| d.re.ln()).sum::<f64>();
        let r = DVector::from_iterator(y.len(), y.iter().zip(&self.a).map(|(y, a)| y - a * eta));
        let quad = r.dotc(&chol.solve(&r)).re;
        -logdet - quad
    }
}

#[test]
fn slepian_bangs_matches_score_function_oracle() {
    let times = [0.0, 1e-6, 2e-6, 3e-6];
    let pn = PhaseNoiseModel::new(0.4, 3e4, 0.0).unwrap();
    let r = phase_correlation_matrix(&times, &pn).unwrap();
    // rotating signal vector, as under a Doppler ramp
    let v: Vec<Complex64> = (0..4).map(|k| Complex64::from_polar(1.0, 0.7 * k as f64)).collect();
    let p = DMatrix::from_fn(4, 4, |k, l| v[k] * v[l].conj() * r[(k, l)]);
    let toy = Toy {
        a: vec![
            Complex64::new(0.3, 0.1),
            Complex64::new(-0.2, 0.25),
            Complex64::new(0.1, -0.3),
            Complex64::new(0.25, 0.05),
        ],
        p,
        s0: 1.0,
        s1: 0.8,
        c0: 0.5,
        c1: 0.6,
    };
    let eta = 0.0;
    let sigma = toy.sigma(eta);
    let cov = ObservationCovariance {
        matrix: sigma.clone(),
        phase_part: &toy.p * Complex64::from(toy.c0),
        correlation: r,
        additive_part: toy.s0,
    };
    let deriv = DMatrix::<Complex64>::identity(4, 4) * Complex64::from(toy.s1) + &toy.p * Complex64::from(toy.c1);
    let analytic = slepian_bangs_fim(std::slice::from_ref(&toy.a), &cov, &[deriv], 1.0).unwrap()[(0, 0)];

    let l = sigma.cholesky().unwrap().l();
    let mut rng = rng_for(21, 0);
    let n = 400_000;
    let h = 1e-5;
    let (mut s1, mut s2) = (0.0, 0.0);
    for _ in 0..n {
        let w: Vec<Complex64> = (0..4)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)) * 0.5f64.sqrt())
            .collect();
        let y: Vec<Complex64> = (0..4)
            .map(|k| toy.a[k] * eta + (0..4).map(|j| w[j] * l[(k, j)]).sum::<Complex64>())
            .collect();
        let score = (toy.log_lik(&y, eta + h) - toy.log_lik(&y, eta - h)) / (2.0 * h);
        s1 += score;
        s2 += score * score;
    }
    let numeric = s2 / n as f64 - (s1 / n as f64).powi(2);
    assert!((numeric / analytic - 1.0).abs() < 0.02, "numeric {numeric} analytic {analytic}");
}

#[test]
fn gaussian_equivalent_moments_match_phase_trajectories() {
    let s = Setup {
        pilots: 4,
        range_rate: 0.0,
        phase_noise: PhaseNoiseModel::new(0.3, 2e6, 0.0).unwrap(),
        ..Setup::default()
    }
    .with_snr_db(10.0)
    .build();
    let (mean, cov) = sample_observation_moments(&s, 200_000, 3).unwrap();
    let m = s.mean_vector(&[0.0; 4]).unwrap();
    let c = s.covariance().unwrap();
    let scale = m[0].norm_sqr();
    for k in 0..4 {
        let expect = m[k] * (-0.15f64).exp();
        assert!((mean[k] - expect).norm() < 0.01 * m[k].norm(), "mean {k}");
        for l in 0..4 {
            let e = c.matrix[(k, l)];
            assert!((cov[(k, l)] - e).norm() < 0.02 * scale, "cov {k},{l}");
        }
    }
}

#[test]
fn range_rmse_scales_inversely_with_carrier() {
    let freqs: Vec<f64> = (0..10).map(|i| 100e9 * 10f64.powf(i as f64 / 9.0)).collect();
    let rmse: Vec<f64> = freqs
        .iter()
        .map(|&f| {
            let s = Setup {
                carrier_hz: f,
                gain_mode: GainMode::ConstantReceivedPower { efficiency: 0.7, reference_hz: 300e9 },
                ..Setup::default()
            }
            .build();
            bayesian_fim(&s, &[Param::Range, Param::RangeRate], None)
                .unwrap()
                .rmse(Param::Range)
                .unwrap()
                .unwrap()
        })
        .collect();
    let slope = log_log_slope(&freqs, &rmse).unwrap();
    assert!((slope + 1.0).abs() < 0.02, "{slope}");
}

#[test]
fn velocity_bound_improves_with_observation_time_squared() {
    let bound = |bw: f64| {
        let s = Setup { bandwidth_hz: bw, ..Setup::default() }.build();
        bayesian_fim(&s, &[Param::Range, Param::RangeRate], None).unwrap().bcrlb(Param::RangeRate).unwrap().unwrap()
    };
    // halving the symbol rate doubles the frame duration
    let ratio = bound(20e9) / bound(10e9);
    assert!((ratio - 4.0).abs() < 1e-6, "{ratio}");
}

#[test]
fn dense_pilots_saturate_under_correlated_phase_noise() {
    let bound = |m: usize| {
        let s = Setup {
            pilots: m,
            phase_noise: PhaseNoiseModel::new(0.064, 100e3, 0.0).unwrap(),
            ..Setup::default()
        }
        .with_snr_db(30.0)
        .build();
        bayesian_fim(&s, &[Param::Range, Param::RangeRate], None).unwrap().bcrlb(Param::Range).unwrap().unwrap()
    };
    let b64 = bound(64);
    let b256 = bound(256);
    assert!(b64 / b256 < 1.05, "{}", b64 / b256);
    // without phase noise the same step would be a 4x gain
    let clean = |m: usize| {
        let s = Setup { pilots: m, ..Setup::default() }.with_snr_db(30.0).build();
        bayesian_fim(&s, &[Param::Range], None).unwrap().bcrlb(Param::Range).unwrap().unwrap()
    };
    assert!((clean(64) / clean(256) - 4.0).abs() < 1e-6);
}

#[test]
fn hardware_floor_scales_with_sqrt_gamma() {
    let floor = |gamma: f64| {
        let s = Setup { gamma_eff: gamma, pilots: 64, ..Setup::default() }.with_snr_db(80.0).build();
        bayesian_fim(&s, &[Param::Range, Param::RangeRate], None).unwrap().rmse(Param::Range).unwrap().unwrap()
    };
    let ratio = floor(0.05) / floor(0.005);
    assert!((ratio / 10f64.sqrt() - 1.0).abs() < 0.01, "{ratio}");
    let s = Setup { gamma_eff: 0.05, pilots: 64, ..Setup::default() };
    let hi = bayesian_fim(&s.with_snr_db(120.0).build(), &[Param::Range], None).unwrap().rmse(Param::Range).unwrap().unwrap();
    assert!(hi > 0.0 && (hi / floor(0.05) - 1.0).abs() < 0.01);
}

#[test]
fn off_boresight_first_order_bound_beats_curvature_bound() {
    // wide beam so that a large offset stays inside the main lobe
    let mut setup = Setup {
        carrier_hz: 100e9,
        diameter_m: 0.01,
        pointing: [0.55, 0.0],
        range_m: 1e5,
        ..Setup::default()
    };
    setup = setup.with_snr_db(20.0);
    let s = setup.build();
    let theta = AntennaConfig::new(0.01, 100e9, GainMode::Aperture { efficiency: 0.7 }).unwrap().beamwidth_rad;
    assert!(0.55 < 2.0 * theta);
    let first = bayesian_fim(&s, &[Param::Range, Param::PointingX], None).unwrap().bcrlb(Param::PointingX).unwrap().unwrap();
    let curvature = pointing_bcrlb_at_boresight(&s).unwrap();
    assert!(first.is_finite() && first < curvature, "{first} {curvature}");
}
