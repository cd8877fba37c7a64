use isl_isac::hardware_impairments::{
    bussgang_decompose, bussgang_gain_soft_limiter, bussgang_monte_carlo, PaModel, SalehParams,
};

#[test]
fn soft_limiter_closed_form_matches_sampling() {
    let a_sat: f64 = 1.0;
    for (i, kappa) in [0.1, 0.25, 0.5, 1.0, 2.0, 4.0].into_iter().enumerate() {
        let p_in = kappa * a_sat * a_sat;
        let est = bussgang_monte_carlo(&PaModel::SoftLimiter { a_sat }, p_in, 2_000_000, 100 + i as u64).unwrap();
        let b = bussgang_gain_soft_limiter(kappa).unwrap();
        assert!(
            (est.gain_b.re - b).abs() < 4.0 * est.gain_std_error + 1e-4,
            "kappa {kappa}: mc {} closed {b}",
            est.gain_b.re
        );
        assert!(est.gain_b.im.abs() < 1e-2);
        let d = bussgang_decompose(&PaModel::SoftLimiter { a_sat }, p_in).unwrap();
        assert!((d.output_power - est.output_power).abs() < 4.0 * est.output_power_std_error);
    }
}

#[test]
fn saleh_quadrature_matches_sampling() {
    let params = SalehParams::default();
    for (i, p_in) in [0.05, 0.5, 1.0, 4.0, 20.0].into_iter().enumerate() {
        let pa = PaModel::Saleh(params);
        let q = bussgang_decompose(&pa, p_in).unwrap();
        let mc = bussgang_monte_carlo(&pa, p_in, 1_000_000, 7 + i as u64).unwrap();
        assert!((q.gain_b - mc.gain_b).norm() < 5.0 * mc.gain_std_error * 2f64.sqrt(), "p_in {p_in}");
        assert!((q.output_power - mc.output_power).abs() < 4.0 * mc.output_power_std_error, "p_in {p_in}");
    }
}

#[test]
fn power_bookkeeping_holds_for_every_model() {
    let models = [
        PaModel::Linear,
        PaModel::SoftLimiter { a_sat: 0.8 },
        PaModel::Saleh(SalehParams::default()),
        PaModel::Saleh(SalehParams::new(1.2, 0.3, 0.2, 2.5).unwrap()),
    ];
    for (i, pa) in models.iter().enumerate() {
        for p_in in [0.1, 1.0, 3.0] {
            let mc = bussgang_monte_carlo(pa, p_in, 500_000, 40 + i as u64).unwrap();
            let d = bussgang_decompose(pa, p_in).unwrap();
            // E|U|^2 = |B|^2 P + sigma_eta^2, sampled power against the decomposition
            let lhs = mc.output_power;
            let rhs = d.gain_b.norm_sqr() * p_in + d.distortion_power;
            assert!((lhs - rhs).abs() <= 3.0 * mc.output_power_std_error + 1e-12, "{pa:?} {p_in}");
            assert!(d.distortion_power >= 0.0);
        }
    }
}

#[test]
fn saleh_gain_is_linear_at_small_drive() {
    let p = SalehParams::default();
    let d = bussgang_decompose(&PaModel::Saleh(p), 1e-6).unwrap();
    assert!((d.gain_b.re - p.alpha_a).abs() < 1e-4);
    assert!(d.distortion_power / (d.gain_b.norm_sqr() * 1e-6) < 1e-3);
}

#[test]
fn monte_carlo_is_reproducible() {
    let pa = PaModel::Saleh(SalehParams::default());
    let a = bussgang_monte_carlo(&pa, 1.0, 200_000, 5).unwrap();
    let b = bussgang_monte_carlo(&pa, 1.0, 200_000, 5).unwrap();
    assert_eq!(a, b);
}
