//! The eight sweep experiments.
//!
//! Grid points run in parallel; results are assembled by axis index and
//! every Monte Carlo stream is seeded from the master seed plus a label, so
//! thread count and scheduling never change the output.

use std::time::Instant;

use isl_isac::comm_capacity::capacity;
use isl_isac::hardware_impairments::PhaseNoiseModel;
use isl_isac::isac_tradeoff::{
    ba_optimize, minimum_distortion, mutual_information_mc, BaOptions, Constellation, InputDistribution,
    SensingDistortion,
};
use isl_isac::random::{derive_seed, tag_of};
use isl_isac::stats::log_log_slope;
use isl_isac::units::{db_to_linear, dbm_to_watts};
use rayon::prelude::*;

use crate::config::{ExperimentConfig, ExperimentId, ResolvedProfile};
use crate::error::{Result, RunnerError};
use crate::model::{LinkModel, NoiseSpec, OperatingPoint};
use crate::output::{LabelSeries, Metadata, OperatingRates, ProfileSummary, Series, SweepResult};
use crate::svg::{class_map, line_chart, LineChart, LineSeries};

pub const CLASSES: [(&str, &str); 4] = [
    ("fail", "#d9d9d9"),
    ("comm-only", "#9ecae1"),
    ("sense-only", "#fdae6b"),
    ("feasible", "#31a354"),
];

/// Evaluates `f(profile index, point index)` over the full grid in parallel
/// and returns rows grouped by profile, in axis order.
fn grid<T: Send>(
    n_profiles: usize,
    n_points: usize,
    f: impl Fn(usize, usize) -> Result<T> + Sync,
) -> Result<Vec<Vec<T>>> {
    let flat: Vec<T> = (0..n_profiles * n_points)
        .into_par_iter()
        .map(|k| f(k / n_points, k % n_points))
        .collect::<Result<_>>()?;
    let mut out: Vec<Vec<T>> = (0..n_profiles).map(|_| Vec::with_capacity(n_points)).collect();
    for (k, v) in flat.into_iter().enumerate() {
        out[k / n_points].push(v);
    }
    Ok(out)
}

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    profiles: Vec<ResolvedProfile>,
    axis: Vec<f64>,
    hash: String,
}

impl<'a> Ctx<'a> {
    fn model(&self, i: usize) -> LinkModel<'_> {
        LinkModel::new(self.cfg, &self.profiles[i])
    }

    fn names(&self) -> Vec<&str> {
        self.profiles.iter().map(|p| p.name()).collect()
    }

    fn seed(&self, label: &str) -> u64 {
        derive_seed(self.cfg.monte_carlo.seed, tag_of(label))
    }

    fn point(&self) -> OperatingPoint {
        OperatingPoint::from_config(self.cfg)
    }
}

struct Partial {
    series: Vec<Series>,
    labels: Vec<LabelSeries>,
    charts: Vec<(String, String)>,
    notes: Vec<String>,
    axis: Option<Vec<f64>>,
    axis_column: Option<String>,
    operating_point: Vec<OperatingRates>,
}

impl Partial {
    fn new(series: Vec<Series>, charts: Vec<(String, String)>) -> Self {
        Self {
            series,
            labels: Vec::new(),
            charts,
            notes: Vec::new(),
            axis: None,
            axis_column: None,
            operating_point: Vec::new(),
        }
    }
}

/// Runs `cfg` on a pool with `threads` workers (default: all cores).
pub fn run_experiment_with_threads(cfg: &ExperimentConfig, threads: Option<usize>) -> Result<SweepResult> {
    match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| RunnerError::Config(format!("thread pool: {e}")))?;
            pool.install(|| run_experiment(cfg))
        }
        None => run_experiment(cfg),
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let start = Instant::now();
    let cfg = cfg.clone().resolve()?;
    let ctx = Ctx {
        cfg: &cfg,
        profiles: cfg.resolved_profiles()?,
        axis: cfg.sweep_axis().values(),
        hash: cfg.hash()?,
    };
    log::info!("running {} over {} points, config {}", cfg.experiment, ctx.axis.len(), &ctx.hash[..12]);
    let part = match cfg.experiment {
        ExperimentId::CapacityVsSnr => capacity_vs_snr(&ctx)?,
        ExperimentId::RmseVsSnr => rmse_vs_snr(&ctx)?,
        ExperimentId::FreqSweep => freq_sweep(&ctx)?,
        ExperimentId::DistanceSweep => distance_sweep(&ctx)?,
        ExperimentId::GammaSweep => gamma_sweep(&ctx)?,
        ExperimentId::CdFrontier => cd_frontier(&ctx)?,
        ExperimentId::FeasibilityMap => feasibility_map(&ctx)?,
        ExperimentId::AwgnComparison => awgn_comparison(&ctx)?,
    };
    let metadata = Metadata {
        experiment: cfg.experiment.name().into(),
        config_hash: ctx.hash.clone(),
        seed: cfg.monte_carlo.seed,
        toolkit_version: env!("CARGO_PKG_VERSION").into(),
        wall_clock_s: start.elapsed().as_secs_f64(),
        threads: rayon::current_num_threads(),
        profiles: ctx.profiles.iter().map(summary).collect(),
        notes: part.notes,
        operating_point: part.operating_point,
    };
    let result = SweepResult {
        axis_column: part.axis_column.unwrap_or_else(|| cfg.experiment.axis_quantity().column().into()),
        axis: part.axis.unwrap_or(ctx.axis),
        series: part.series,
        labels: part.labels,
        charts: part.charts,
        metadata,
    };
    result.check_shape()?;
    Ok(result)
}

fn summary(p: &ResolvedProfile) -> ProfileSummary {
    let b = p.hardware.gamma_breakdown;
    ProfileSummary {
        name: p.name().into(),
        gamma_eff: p.gamma_eff(),
        gamma_pa: b.pa,
        gamma_lo: b.lo,
        gamma_adc: b.adc,
        gamma_component_sum: b.total,
        sigma_phi2: p.sigma_phi2,
        bandwidth_hz: p.bandwidth_hz(),
        linewidth_hz: p.hardware.linewidth,
    }
}

fn chart(ctx: &Ctx, file: &str, c: LineChart) -> (String, String) {
    (file.to_string(), line_chart(&c, &ctx.hash))
}

fn lines<'a>(series: &'a [Series], suffix: &str, dashed: bool) -> Vec<LineSeries<'a>> {
    series
        .iter()
        .filter(|s| s.name.ends_with(suffix))
        .map(|s| LineSeries {
            label: &s.name,
            values: &s.values,
            dashed,
        })
        .collect()
}

fn capacity_vs_snr(ctx: &Ctx) -> Result<Partial> {
    let cfg = ctx.cfg;
    let order = cfg.options.rate_qam_order;
    let qam = Constellation::square_qam(order)?;
    let uniform = InputDistribution::uniform(order);
    let payload = 1.0 - cfg.scenario.pilots as f64 / cfg.scenario.frame_symbols as f64;
    let rows = grid(ctx.profiles.len(), ctx.axis.len(), |p, i| {
        let m = ctx.model(p);
        let snr0 = db_to_linear(ctx.axis[i]);
        let c = m.capacity_at_snr0(snr0)?;
        let seed = ctx.seed(&format!("capacity_vs_snr/{}", m.profile.name()));
        let mi = mutual_information_mc(&qam, &uniform, &m.channel_at_snr0(snr0)?, cfg.monte_carlo.mi_samples, seed)?;
        Ok((c, m.ceiling()?, mi.bits, mi.std_error))
    })?;
    let mut series = Vec::new();
    for (p, name) in ctx.names().into_iter().enumerate() {
        let bw = ctx.profiles[p].bandwidth_hz();
        let r = &rows[p];
        series.push(Series::new(format!("{name}_capacity"), "bit/symbol", r.iter().map(|x| x.0).collect()));
        series.push(Series::new(format!("{name}_ceiling"), "bit/symbol", r.iter().map(|x| x.1).collect()));
        series.push(Series::new(format!("{name}_qam{order}_mi"), "bit/symbol", r.iter().map(|x| x.2).collect()));
        series.push(Series::new(format!("{name}_qam{order}_mi_se"), "bit/symbol", r.iter().map(|x| x.3).collect()));
        series.push(Series::new(
            format!("{name}_net_rate_gaussian"),
            "Gbit/s",
            r.iter().map(|x| payload * x.0 * bw / 1e9).collect(),
        ));
        series.push(Series::new(
            format!("{name}_net_rate_qam{order}"),
            "Gbit/s",
            r.iter().map(|x| payload * x.2 * bw / 1e9).collect(),
        ));
    }
    let pt = ctx.point();
    let operating_point = (0..ctx.profiles.len())
        .into_par_iter()
        .map(|p| {
            let m = ctx.model(p);
            let b = m.budget(&pt)?;
            let seed = ctx.seed(&format!("operating_point/{}", m.profile.name()));
            let mi = mutual_information_mc(&qam, &uniform, &m.channel_at_snr0(b.snr0)?, cfg.monte_carlo.mi_samples, seed)?;
            let bw = m.profile.bandwidth_hz();
            Ok(OperatingRates {
                profile: m.profile.name().into(),
                snr0_db: 10.0 * b.snr0.log10(),
                capacity_bits: b.capacity_bits,
                ceiling_bits: b.ceiling_bits,
                qam_order: order,
                qam_mi_bits: mi.bits,
                qam_mi_std_error: mi.std_error,
                net_rate_gaussian_gbps: b.net_rate_bps / 1e9,
                net_rate_qam_gbps: payload * mi.bits * bw / 1e9,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let notes = operating_point
        .iter()
        .map(|o| {
            format!(
                "{} at the operating point: SNR0 {:.1} dB, net rate {:.1} Gbit/s ({}-QAM), {:.1} Gbit/s (Gaussian bound)",
                o.profile, o.snr0_db, o.net_rate_qam_gbps, o.qam_order, o.net_rate_gaussian_gbps
            )
        })
        .collect();
    let mut ls = lines(&series, "_capacity", false);
    ls.extend(lines(&series, "_ceiling", true));
    let charts = vec![chart(
        ctx,
        "capacity_vs_snr.svg",
        LineChart {
            title: "Capacity vs SNR0 (dashed: saturation ceiling)",
            x_label: "SNR0 (dB)",
            y_label: "capacity (bit/symbol)",
            x: &ctx.axis,
            series: ls,
            log_x: false,
            log_y: false,
        },
    )];
    let mut part = Partial::new(series, charts);
    part.notes = notes;
    part.operating_point = operating_point;
    Ok(part)
}

fn awgn_comparison(ctx: &Ctx) -> Result<Partial> {
    let pt = ctx.point();
    let rows = grid(ctx.profiles.len(), ctx.axis.len(), |p, i| {
        let m = ctx.model(p);
        let snr0 = db_to_linear(ctx.axis[i]);
        let sc = m.sensing_scenario(&pt, NoiseSpec::PilotSnrDb(ctx.axis[i]), m.profile.gamma_eff())?;
        let mut ideal = m.sensing_scenario(&pt, NoiseSpec::PilotSnrDb(ctx.axis[i]), 0.0)?;
        ideal.phase_noise = PhaseNoiseModel::none();
        Ok((m.capacity_at_snr0(snr0)?, m.rmse(&sc)?.0, m.rmse(&ideal)?.0))
    })?;
    let awgn: Vec<f64> = ctx
        .axis
        .iter()
        .map(|&db| capacity(db_to_linear(db)))
        .collect::<isl_isac::Result<_>>()?;
    let mut series = vec![Series::new("awgn_capacity", "bit/symbol", awgn.clone())];
    series.push(Series::new("awgn_range_rmse", "m", rows[0].iter().map(|x| x.2).collect()));
    for (p, name) in ctx.names().into_iter().enumerate() {
        let r = &rows[p];
        series.push(Series::new(format!("{name}_capacity"), "bit/symbol", r.iter().map(|x| x.0).collect()));
        series.push(Series::new(
            format!("{name}_divergence"),
            "bit/symbol",
            r.iter().zip(&awgn).map(|(x, a)| a - x.0).collect(),
        ));
        series.push(Series::new(format!("{name}_range_rmse"), "m", r.iter().map(|x| x.1).collect()));
    }
    let mut cap = lines(&series, "_capacity", false);
    cap[0].dashed = true;
    let mut rm = lines(&series, "_range_rmse", false);
    rm[0].dashed = true;
    let charts = vec![
        chart(
            ctx,
            "awgn_comparison_capacity.svg",
            LineChart {
                title: "Hardware-aware vs AWGN capacity (dashed: AWGN)",
                x_label: "SNR0 (dB)",
                y_label: "capacity (bit/symbol)",
                x: &ctx.axis,
                series: cap,
                log_x: false,
                log_y: false,
            },
        ),
        chart(
            ctx,
            "awgn_comparison_rmse.svg",
            LineChart {
                title: "Range bound vs conventional CRLB (dashed)",
                x_label: "SNR0 (dB)",
                y_label: "range RMSE (m)",
                x: &ctx.axis,
                series: rm,
                log_x: false,
                log_y: true,
            },
        ),
    ];
    Ok(Partial::new(series, charts))
}

fn rmse_vs_snr(ctx: &Ctx) -> Result<Partial> {
    let pt = ctx.point();
    let rows = grid(ctx.profiles.len(), ctx.axis.len(), |p, i| {
        let m = ctx.model(p);
        let sc = m.sensing_scenario(&pt, NoiseSpec::PilotSnrDb(ctx.axis[i]), m.profile.gamma_eff())?;
        m.rmse(&sc)
    })?;
    let mut series = Vec::new();
    for (p, name) in ctx.names().into_iter().enumerate() {
        series.push(Series::new(format!("{name}_range_rmse"), "m", rows[p].iter().map(|x| x.0).collect()));
        series.push(Series::new(format!("{name}_range_rate_rmse"), "m/s", rows[p].iter().map(|x| x.1).collect()));
    }
    let charts = vec![chart(
        ctx,
        "rmse_vs_snr.svg",
        LineChart {
            title: "Range RMSE bound vs pilot SNR",
            x_label: "SNR0 (dB)",
            y_label: "range RMSE (m)",
            x: &ctx.axis,
            series: lines(&series, "_range_rmse", false),
            log_x: false,
            log_y: true,
        },
    )];
    Ok(Partial::new(series, charts))
}

fn freq_sweep(ctx: &Ctx) -> Result<Partial> {
    let base = ctx.point();
    let snr = ctx.cfg.scenario.fixed_snr_db;
    let rows = grid(ctx.profiles.len(), ctx.axis.len(), |p, i| {
        let m = ctx.model(p);
        let pt = OperatingPoint {
            carrier_hz: ctx.axis[i] * 1e9,
            ..base
        };
        let sc = m.sensing_scenario(&pt, NoiseSpec::PilotSnrDb(snr), m.profile.gamma_eff())?;
        m.rmse(&sc)
    })?;
    let mut series = Vec::new();
    let mut notes = Vec::new();
    for (p, name) in ctx.names().into_iter().enumerate() {
        let range: Vec<f64> = rows[p].iter().map(|x| x.0).collect();
        if ctx.axis.len() >= 2 {
            let slope = log_log_slope(&ctx.axis, &range)?;
            notes.push(format!("{name}: log-log slope of range RMSE vs carrier = {slope:.4}"));
        }
        series.push(Series::new(format!("{name}_range_rmse"), "m", range));
        series.push(Series::new(format!("{name}_range_rate_rmse"), "m/s", rows[p].iter().map(|x| x.1).collect()));
    }
    let charts = vec![chart(
        ctx,
        "freq_sweep.svg",
        LineChart {
            title: "Range RMSE bound vs carrier at fixed SNR",
            x_label: "carrier (GHz)",
            y_label: "range RMSE (m)",
            x: &ctx.axis,
            series: lines(&series, "_range_rmse", false),
            log_x: true,
            log_y: true,
        },
    )];
    let mut part = Partial::new(series, charts);
    part.notes = notes;
    Ok(part)
}

fn carrier_tag(f_ghz: f64) -> String {
    format!("{}ghz", f_ghz.to_string().replace('.', "p"))
}

fn distance_sweep(ctx: &Ctx) -> Result<Partial> {
    let base = ctx.point();
    let carriers = &ctx.cfg.options.carriers_ghz;
    let nc = carriers.len();
    let rows = grid(ctx.profiles.len() * nc, ctx.axis.len(), |pc, i| {
        let m = ctx.model(pc / nc);
        let pt = OperatingPoint {
            carrier_hz: carriers[pc % nc] * 1e9,
            range_m: ctx.axis[i] * 1e3,
            ..base
        };
        let b = m.budget(&pt)?;
        Ok((b.capacity_bits, 10.0 * b.snr0.log10()))
    })?;
    let mut series = Vec::new();
    let mut notes = Vec::new();
    for (p, name) in ctx.names().into_iter().enumerate() {
        for (c, &f) in carriers.iter().enumerate() {
            let r = &rows[p * nc + c];
            let tag = carrier_tag(f);
            let cap: Vec<f64> = r.iter().map(|x| x.0).collect();
            notes.push(format!(
                "{name} at {f} GHz: capacity drop over the sweep = {:.4} bit/symbol",
                cap[0] - cap[cap.len() - 1]
            ));
            series.push(Series::new(format!("{name}_{tag}_capacity"), "bit/symbol", cap));
            series.push(Series::new(format!("{name}_{tag}_snr0"), "dB", r.iter().map(|x| x.1).collect()));
        }
    }
    let charts = vec![chart(
        ctx,
        "distance_sweep.svg",
        LineChart {
            title: "Capacity vs link distance (aperture-scaled gains)",
            x_label: "range (km)",
            y_label: "capacity (bit/symbol)",
            x: &ctx.axis,
            series: lines(&series, "_capacity", false),
            log_x: false,
            log_y: false,
        },
    )];
    let mut part = Partial::new(series, charts);
    part.notes = notes;
    Ok(part)
}

fn gamma_sweep(ctx: &Ctx) -> Result<Partial> {
    let pt = ctx.point();
    let rows = grid(ctx.profiles.len(), ctx.axis.len(), |p, i| {
        let m = ctx.model(p);
        let gamma = ctx.axis[i];
        let b = m.budget_with_gamma(&pt, gamma)?;
        let sc = m.sensing_scenario(&pt, NoiseSpec::Thermal, gamma)?;
        Ok((b.ceiling_bits, b.capacity_bits, m.rmse(&sc)?.0))
    })?;
    let mut series = Vec::new();
    for (p, name) in ctx.names().into_iter().enumerate() {
        let r = &rows[p];
        series.push(Series::new(format!("{name}_ceiling"), "bit/symbol", r.iter().map(|x| x.0).collect()));
        series.push(Series::new(format!("{name}_capacity"), "bit/symbol", r.iter().map(|x| x.1).collect()));
        series.push(Series::new(format!("{name}_range_rmse"), "m", r.iter().map(|x| x.2).collect()));
    }
    let mut cap = lines(&series, "_capacity", false);
    cap.extend(lines(&series, "_ceiling", true));
    let charts = vec![
        chart(
            ctx,
            "gamma_sweep_capacity.svg",
            LineChart {
                title: "Capacity vs hardware quality factor (dashed: ceiling)",
                x_label: "Gamma_eff",
                y_label: "capacity (bit/symbol)",
                x: &ctx.axis,
                series: cap,
                log_x: true,
                log_y: false,
            },
        ),
        chart(
            ctx,
            "gamma_sweep_rmse.svg",
            LineChart {
                title: "Range RMSE bound vs hardware quality factor",
                x_label: "Gamma_eff",
                y_label: "range RMSE (m)",
                x: &ctx.axis,
                series: lines(&series, "_range_rmse", false),
                log_x: true,
                log_y: true,
            },
        ),
    ];
    Ok(Partial::new(series, charts))
}

fn cd_frontier(ctx: &Ctx) -> Result<Partial> {
    let cfg = ctx.cfg;
    let pt = ctx.point();
    let snr = cfg.scenario.fixed_snr_db;
    let qam = Constellation::square_qam(cfg.options.frontier_qam_order)?;
    // per profile: channel, distortion model and its floor
    let setups = ctx
        .profiles
        .iter()
        .enumerate()
        .map(|(p, prof)| {
            let m = ctx.model(p);
            let channel = m.channel_at_snr0(db_to_linear(snr))?;
            let sc = m.sensing_scenario(&pt, NoiseSpec::PilotSnrDb(snr), prof.gamma_eff())?;
            let sc = isl_isac::sensing_bounds::SensingScenario {
                frame: sc.frame.with_power(1.0),
                ..sc
            };
            let model = SensingDistortion::new(sc, pt.tx_power_w, prof.gamma_eff());
            let d_min = minimum_distortion(&qam, &model)?;
            Ok((channel, model, d_min))
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = grid(ctx.profiles.len(), ctx.axis.len(), |p, i| {
        let (channel, model, d_min) = &setups[p];
        let opts = BaOptions {
            d_target: ctx.axis[i] * d_min,
            max_iters: cfg.monte_carlo.ba_max_iters,
            mi_samples: cfg.monte_carlo.mi_samples,
            seed: ctx.seed(&format!("cd_frontier/{}", ctx.profiles[p].name())),
            ..BaOptions::default()
        };
        let r = ba_optimize(&qam, channel, model, &opts)?;
        Ok((opts.d_target, r.distortion, r.rate, r.rate_std_error, if r.converged { 1.0 } else { 0.0 }))
    })?;
    let mut series = Vec::new();
    for (p, name) in ctx.names().into_iter().enumerate() {
        let r = &rows[p];
        series.push(Series::new(format!("{name}_target_distortion"), "1", r.iter().map(|x| x.0).collect()));
        series.push(Series::new(format!("{name}_distortion"), "1", r.iter().map(|x| x.1).collect()));
        series.push(Series::new(format!("{name}_rate"), "bit/symbol", r.iter().map(|x| x.2).collect()));
        series.push(Series::new(format!("{name}_rate_se"), "bit/symbol", r.iter().map(|x| x.3).collect()));
        series.push(Series::new(format!("{name}_converged"), "1", r.iter().map(|x| x.4).collect()));
    }
    let charts = vec![chart(
        ctx,
        "cd_frontier.svg",
        LineChart {
            title: "Capacity-distortion frontier",
            x_label: "distortion target / minimum distortion",
            y_label: "rate (bit/symbol)",
            x: &ctx.axis,
            series: lines(&series, "_rate", false),
            log_x: true,
            log_y: false,
        },
    )];
    Ok(Partial::new(series, charts))
}

pub fn classify(capacity_ok: bool, sensing_ok: bool) -> usize {
    match (capacity_ok, sensing_ok) {
        (false, false) => 0,
        (true, false) => 1,
        (false, true) => 2,
        (true, true) => 3,
    }
}

fn feasibility_map(ctx: &Ctx) -> Result<Partial> {
    let cfg = ctx.cfg;
    let base = ctx.point();
    let powers = &ctx.axis;
    let diameters = cfg.options.diameter_axis.values();
    let (np, nd) = (powers.len(), diameters.len());
    // rows ordered diameter-major so each diameter is a block of powers
    let rows = grid(ctx.profiles.len(), np * nd, |p, k| {
        let m = ctx.model(p);
        let pt = OperatingPoint {
            tx_power_w: dbm_to_watts(powers[k % np]),
            diameter_m: diameters[k / np],
            ..base
        };
        let cap = m.budget(&pt)?.capacity_bits;
        let sc = m.sensing_scenario(&pt, NoiseSpec::Thermal, m.profile.gamma_eff())?;
        let rmse = m.rmse(&sc)?.0;
        Ok((cap, rmse))
    })?;
    let (cmin, rmax) = (cfg.options.min_capacity_bits, cfg.options.max_rmse_m);
    let mut series = vec![Series::new("diameter", "m", (0..np * nd).map(|k| diameters[k / np]).collect())];
    let mut labels = Vec::new();
    let mut charts = Vec::new();
    let mut notes = Vec::new();
    for (p, name) in ctx.names().into_iter().enumerate() {
        let r = &rows[p];
        let cls: Vec<usize> = r.iter().map(|&(c, e)| classify(c >= cmin, e <= rmax)).collect();
        let feasible = cls.iter().filter(|&&c| c == 3).count();
        notes.push(format!("{name}: {feasible} of {} grid points feasible", cls.len()));
        series.push(Series::new(format!("{name}_capacity"), "bit/symbol", r.iter().map(|x| x.0).collect()));
        series.push(Series::new(format!("{name}_range_rmse"), "m", r.iter().map(|x| x.1).collect()));
        labels.push(LabelSeries {
            name: name.to_string(),
            values: cls.iter().map(|&c| CLASSES[c].0.to_string()).collect(),
        });
        let cells: Vec<Vec<usize>> = (0..nd).map(|d| cls[d * np..(d + 1) * np].to_vec()).collect();
        let title = format!("Feasibility: {name} (C >= {cmin} bit/symbol, RMSE <= {rmax} m)");
        charts.push((
            format!("feasibility_map_{name}.svg"),
            class_map(&title, "tx power (dBm)", "diameter (m)", powers, &diameters, &cells, &CLASSES, &ctx.hash),
        ));
    }
    let mut part = Partial::new(series, charts);
    part.labels = labels;
    part.notes = notes;
    part.axis = Some((0..np * nd).map(|k| powers[k % np]).collect());
    Ok(part)
}
