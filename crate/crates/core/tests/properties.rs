use isl_isac::comm_capacity::{capacity, ceiling, sinr_eff};
use isl_isac::hardware_impairments::{
    bussgang_gain_soft_limiter, gamma_components, phase_correlation_matrix, PhaseNoiseModel,
};
use isl_isac::isac_tradeoff::project_simplex;
use isl_isac::link_channel::{AntennaConfig, GainMode, ScenarioGeometry};
use isl_isac::sensing_bounds::{
    bayesian_fim, normalized_min_eigenvalue, parameter_scale, relative_asymmetry, Param, PilotFrame,
    SensingScenario,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

prop_compose! {
    fn scenario()(
        f_ghz in 100.0..1000.0f64,
        range_km in 500.0..5000.0f64,
        rate in -7e3..7e3f64,
        diameter in 0.3..1.5f64,
        pilots in 4usize..48,
        bw_ghz in 5.0..100.0f64,
        p_dbm in 10.0..40.0f64,
        gamma in 0.0..0.06f64,
        snr_db in -10.0..50.0f64,
        theta in (0.05..0.6f64, 0.05..0.6f64),
        signs in (any::<bool>(), any::<bool>()),
        sigma2 in 0.0..0.3f64,
        linewidth in 1e3..1e6f64,
    ) -> SensingScenario {
        let antenna = AntennaConfig::new(diameter, f_ghz * 1e9, GainMode::Aperture { efficiency: 0.7 }).unwrap();
        let p = 10f64.powf((p_dbm - 30.0) / 10.0);
        let frame = PilotFrame::uniform(pilots, 1024, bw_ghz * 1e9, p).unwrap();
        // offsets of at least 0.05 beamwidth keep the central differences
        // of the pointing gradient (which vanishes at boresight) above roundoff
        let sign = |b: bool| if b { 1.0 } else { -1.0 };
        let bw = antenna.beamwidth_rad;
        let pointing = [sign(signs.0) * theta.0 * bw, sign(signs.1) * theta.1 * bw];
        let mut s = SensingScenario {
            geometry: ScenarioGeometry::along_los(range_km * 1e3, rate, 0.0).unwrap(),
            antenna,
            frame,
            pointing,
            bussgang_gain: Complex64::new(0.9, 0.05),
            distortion_power: gamma * p,
            thermal_w: 1.0,
            dse_residual_w: 0.0,
            phase_noise: PhaseNoiseModel::new(sigma2, linewidth, 0.0).unwrap(),
        };
        let rx = s.gain_magnitude().unwrap().powi(2) * p;
        s.thermal_w = rx / 10f64.powf(snr_db / 10.0);
        s
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bussgang_gain_is_decreasing(a in 0.05..8.0f64, d in 1e-3..2.0f64) {
        let lo = bussgang_gain_soft_limiter(a).unwrap();
        let hi = bussgang_gain_soft_limiter(a + d).unwrap();
        prop_assert!(lo > hi && hi > 0.0 && lo <= 1.0);
    }

    #[test]
    fn phase_correlation_is_psd(
        gaps in prop::collection::vec(1e-12..1e-6f64, 1..40),
        sigma2 in 0.0..2.0f64,
        linewidth in 0.0..1e7f64,
    ) {
        let mut t = vec![0.0];
        for g in gaps {
            t.push(t.last().unwrap() + g);
        }
        let r = phase_correlation_matrix(&t, &PhaseNoiseModel::new(sigma2, linewidth, 0.0).unwrap()).unwrap();
        prop_assert_eq!(relative_asymmetry(&r), 0.0);
        prop_assert!(normalized_min_eigenvalue(&r) >= -1e-10);
    }

    #[test]
    fn gamma_components_add(evm in 0.0..0.5f64, bw in 1e9..1e11f64, jit in 0.0..2e-13f64, enob in 3.0..12.0f64) {
        let g = gamma_components(evm, bw, jit, enob).unwrap();
        prop_assert!((g.total - (g.pa + g.lo + g.adc)).abs() <= 1e-15 * g.total);
        prop_assert!(g.pa >= 0.0 && g.lo >= 0.0 && g.adc > 0.0);
    }

    #[test]
    fn simplex_projection_is_idempotent_and_nearest(
        v in prop::collection::vec(-3.0..3.0f64, 2..10),
        probes in prop::collection::vec(prop::collection::vec(0.0..1.0f64, 10), 200),
    ) {
        let p = project_simplex(&v).unwrap();
        prop_assert!((p.probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(p.probs.iter().all(|&x| x >= 0.0));
        let again = project_simplex(&p.probs).unwrap();
        for (a, b) in again.probs.iter().zip(&p.probs) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        let dist = |q: &[f64]| q.iter().zip(&v).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
        let best = dist(&p.probs);
        for raw in probes {
            let raw = &raw[..v.len()];
            let s: f64 = raw.iter().sum();
            if s == 0.0 {
                continue;
            }
            let q: Vec<f64> = raw.iter().map(|x| x / s).collect();
            prop_assert!(dist(&q) >= best - 1e-12);
        }
    }

    #[test]
    fn capacity_is_monotone_and_capped(
        s1 in 0.0..1e6f64, ds in 1e-6..1e3f64, sigma2 in 0.0..0.5f64, gamma in 1e-4..0.1f64
    ) {
        let a = capacity(sinr_eff(s1, sigma2, gamma).unwrap()).unwrap();
        let b = capacity(sinr_eff(s1 + ds, sigma2, gamma).unwrap()).unwrap();
        prop_assert!(b >= a);
        prop_assert!(b < ceiling(sigma2, gamma).unwrap());
    }

    #[test]
    fn covariance_and_information_are_psd(s in scenario()) {
        let c = s.covariance().unwrap();
        prop_assert!(c.asymmetry() <= 1e-12);
        let ev = c.eigenvalues();
        prop_assert!(ev.min() / ev.max() >= -1e-10);
        let r = bayesian_fim(&s, &Param::ALL, None).unwrap();
        prop_assert!(relative_asymmetry(&r.fim) <= 1e-12);
        prop_assert!(normalized_min_eigenvalue(&r.fim) >= -1e-10);
        prop_assert!(r.bcrlb(Param::Range).unwrap().is_some());
    }

    #[test]
    fn gradients_match_finite_differences(s in scenario()) {
        for p in Param::ALL {
            let h = 1e-6 * parameter_scale(&s, p);
            let mut plus = [0.0; 4];
            plus[p.index()] = h;
            let mut minus = [0.0; 4];
            minus[p.index()] = -h;
            let a = s.mean_vector(&plus).unwrap();
            let b = s.mean_vector(&minus).unwrap();
            let g = s.mean_gradient(p).unwrap();
            let err: f64 = g.iter().zip(a.iter().zip(&b)).map(|(g, (a, b))| (g - (a - b) / (2.0 * h)).norm_sqr()).sum();
            let norm: f64 = g.iter().map(|z| z.norm_sqr()).sum();
            if norm > 0.0 {
                prop_assert!((err / norm).sqrt() < 1e-6, "{}", p);
            }
        }
    }

    #[test]
    fn prior_information_only_tightens(s in scenario(), scale in 1e-3..10.0f64) {
        let params = [Param::Range, Param::RangeRate];
        let r0 = bayesian_fim(&s, &params, None).unwrap();
        let jp = DMatrix::from_diagonal(&(r0.fim.diagonal() * scale));
        let r1 = bayesian_fim(&s, &params, Some(&jp)).unwrap();
        for p in params {
            prop_assert!(r1.bcrlb(p).unwrap().unwrap() <= r0.bcrlb(p).unwrap().unwrap());
        }
    }
}
