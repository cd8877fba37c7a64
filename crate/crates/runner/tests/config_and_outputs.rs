use isl_isac_runner::experiments::CLASSES;
use isl_isac_runner::{load_config, parse_config, run_experiment, run_experiment_with_threads, RunnerError};

fn cfg(text: &str) -> isl_isac_runner::ExperimentConfig {
    parse_config(text, "inline").unwrap().resolve().unwrap()
}

#[test]
fn empty_config_resolves_to_defaults_and_echoes_them() {
    let c = cfg("");
    let s = &c.scenario;
    assert_eq!((s.carrier_ghz, s.range_km, s.diameter_m, s.tx_power_dbm), (300.0, 1000.0, 1.0, 30.0));
    assert_eq!((s.pilots, s.frame_symbols), (64, 1024));
    assert_eq!(s.pointing_rms_urad, 1.0);
    assert_eq!((c.monte_carlo.samples, c.monte_carlo.seed), (1000, 1));
    assert_eq!(c.profiles.len(), 4);
    let echoed = c.to_toml().unwrap();
    for key in ["carrier_ghz = 300.0", "pilots = 64", "seed = 1", "[sweep]", "points = 36"] {
        assert!(echoed.contains(key), "missing `{key}` in\n{echoed}");
    }
    // the echo is itself a complete config with the same hash
    let again = cfg(&echoed);
    assert_eq!(again, c);
    assert_eq!(again.hash().unwrap(), c.hash().unwrap());
}

#[test]
fn unknown_fields_are_rejected_with_a_line_number() {
    for text in ["bogus = 1\n", "experiment = \"gamma_sweep\"\n\n[scenario]\ncarier_ghz = 300\n"] {
        match parse_config(text, "x.toml") {
            Err(RunnerError::Parse { message, .. }) => {
                assert!(message.contains("unknown field"), "{message}");
                assert!(message.contains("line"), "{message}");
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }
}

#[test]
fn invalid_profile_and_axis_are_config_errors() {
    let e = parse_config("profiles = [\"gold_plated\"]", "x").unwrap().resolve().unwrap_err();
    assert!(matches!(&e, RunnerError::Config(m) if m.contains("gold_plated")), "{e}");

    let text = "experiment = \"freq_sweep\"\n[sweep]\nstart = 50.0\nstop = 1000.0\npoints = 4\nscale = \"log\"\n";
    let e = parse_config(text, "x").unwrap().resolve().unwrap_err();
    assert!(matches!(&e, RunnerError::Config(m) if m.contains("extrapolate")), "{e}");
    let ok = format!("{text}extrapolate = true\n");
    assert!(parse_config(&ok, "x").unwrap().resolve().is_ok());

    let e = parse_config("[scenario]\nrange_km = 40000.0", "x").unwrap().resolve().unwrap_err();
    assert!(matches!(e, RunnerError::Config(_)));
}

#[test]
fn load_config_reports_missing_files() {
    let e = load_config(std::path::Path::new("/nonexistent/cfg.toml")).unwrap_err();
    assert!(matches!(e, RunnerError::Read { .. }));
}

#[test]
fn component_override_recomputes_the_reported_sum() {
    let text = r#"
experiment = "gamma_sweep"
profiles = ["swap_efficient"]
[sweep]
start = 0.01
stop = 0.02
points = 2
[[profile_override]]
name = "swap_efficient"
evm_pa = 0.1
enob = 8.0
"#;
    let r = run_experiment(&cfg(text)).unwrap();
    let p = &r.metadata.profiles[0];
    assert!((p.gamma_pa - 0.01).abs() < 1e-15);
    assert!((p.gamma_component_sum - (p.gamma_pa + p.gamma_lo + p.gamma_adc)).abs() < 1e-15);
    assert_eq!(p.gamma_eff, p.gamma_component_sum);

    let asserted = format!("{text}gamma_eff = 0.02\n");
    let r = run_experiment(&cfg(&asserted)).unwrap();
    assert_eq!(r.metadata.profiles[0].gamma_eff, 0.02);
}

#[test]
fn files_carry_units_and_the_config_hash() {
    let dir = tempfile::tempdir().unwrap();
    let c = cfg("experiment = \"rmse_vs_snr\"\nprofiles = [\"high_performance\", \"low_cost\"]\n[sweep]\nstart = 0.0\nstop = 40.0\npoints = 5\n");
    let r = run_experiment(&c).unwrap();
    let files = r.write(&c, dir.path()).unwrap();
    let hash = c.hash().unwrap();
    assert_eq!(r.metadata.config_hash, hash);

    let csv_text = std::fs::read_to_string(dir.path().join("rmse_vs_snr.csv")).unwrap();
    let mut rows = csv::Reader::from_reader(csv_text.as_bytes());
    let headers = rows.headers().unwrap().clone();
    assert_eq!(headers.len(), 1 + r.series.len());
    for h in headers.iter() {
        let open = h.find('(').unwrap_or_else(|| panic!("no unit in `{h}`"));
        assert!(h.ends_with(')') && open > 0 && h.len() > open + 2, "{h}");
    }
    assert_eq!(rows.records().count(), 5);

    let svgs: Vec<_> = files.iter().filter(|f| f.extension().is_some_and(|e| e == "svg")).collect();
    assert!(!svgs.is_empty());
    for f in svgs {
        assert!(std::fs::read_to_string(f).unwrap().contains(&hash), "{}", f.display());
    }
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("rmse_vs_snr.metadata.json")).unwrap()).unwrap();
    assert_eq!(meta["seed"], 1);
    assert_eq!(meta["config_hash"], hash.as_str());
    assert!(meta["wall_clock_s"].as_f64().unwrap() >= 0.0);
    let echoed = std::fs::read_to_string(dir.path().join("rmse_vs_snr.resolved.toml")).unwrap();
    assert_eq!(cfg(&echoed).hash().unwrap(), hash);
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let c = cfg("profiles = [\"state_of_the_art\", \"low_cost\"]\n[sweep]\nstart = 0.0\nstop = 40.0\npoints = 4\n[monte_carlo]\nmi_samples = 20000\n");
    let a = run_experiment_with_threads(&c, Some(1)).unwrap();
    let b = run_experiment_with_threads(&c, Some(3)).unwrap();
    assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap());
    let seeded = cfg("profiles = [\"state_of_the_art\", \"low_cost\"]\n[sweep]\nstart = 0.0\nstop = 40.0\npoints = 4\n[monte_carlo]\nmi_samples = 20000\nseed = 2\n");
    assert_ne!(a.to_csv().unwrap(), run_experiment(&seeded).unwrap().to_csv().unwrap());
}

const SMALL_MAP: &str = r#"
experiment = "feasibility_map"
[sweep]
start = 10.0
stop = 40.0
points = 7
[options.diameter_axis]
start = 0.4
stop = 1.2
points = 5
"#;

#[test]
fn loose_targets_make_the_whole_map_feasible() {
    let text = SMALL_MAP.replace(
        "[options.diameter_axis]",
        "[options]\nmin_capacity_bits = 0.0\nmax_rmse_m = inf\n[options.diameter_axis]",
    );
    let c = cfg(&text);
    let r = run_experiment(&c).unwrap();
    assert_eq!(r.labels.len(), 4);
    for l in &r.labels {
        assert_eq!(l.values.len(), 35);
        assert!(l.values.iter().all(|v| v == CLASSES[3].0), "{}: {:?}", l.name, l.values);
    }
}

#[test]
fn larger_dish_flips_the_classification_at_long_range() {
    let text = SMALL_MAP
        .replace("[sweep]", "profiles = [\"high_performance\"]\n[scenario]\nrange_km = 5000.0\n[sweep]")
        .replace("start = 0.4\nstop = 1.2\npoints = 5", "start = 0.6\nstop = 1.0\npoints = 2");
    let r = run_experiment(&cfg(&text)).unwrap();
    let cls = &r.label("high_performance").unwrap().values;
    let d = &r.series("diameter").unwrap().values;
    let np = 7;
    assert_eq!((d[0], d[np]), (0.6, 1.0));
    let flipped = (0..np).any(|i| cls[i] != "feasible" && cls[np + i] == "feasible");
    assert!(flipped, "{cls:?}");
    // more aperture never loses a class
    for i in 0..np {
        assert!(!(cls[i] == "feasible" && cls[np + i] != "feasible"));
    }
}
