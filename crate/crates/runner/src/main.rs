use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use isl_isac::hardware_impairments::builtin_profiles;
use isl_isac_runner::{load_config, run_experiment_with_threads, run_suite, ExperimentConfig, Result};

#[derive(Parser)]
#[command(name = "isl-isac", version, about = "THz inter-satellite ISAC limit experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct RunFlags {
    /// Output directory (overrides output.directory).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed (overrides monte_carlo.seed).
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment named in a config file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Run all eight experiments, sharing one (optional) base config.
    Suite {
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Print the built-in hardware profiles.
    ListProfiles,
    /// Parse and validate a config, then print it with defaults filled in.
    Validate { config: PathBuf },
}

fn apply(mut cfg: ExperimentConfig, flags: &RunFlags) -> (ExperimentConfig, PathBuf) {
    if let Some(s) = flags.seed {
        cfg.monte_carlo.seed = s;
    }
    if let Some(o) = &flags.out {
        cfg.output.directory = o.display().to_string();
    }
    let out = PathBuf::from(&cfg.output.directory);
    (cfg, out)
}

fn list_profiles() {
    println!(
        "{:<18} {:>9} {:>9} {:>10} {:>10} {:>10} {:>8} {:>9} {:>10}",
        "name", "gamma", "sum", "pa", "lo", "adc", "evm", "jitter_fs", "bw_GHz"
    );
    for p in builtin_profiles() {
        let b = p.gamma_breakdown;
        println!(
            "{:<18} {:>9.4} {:>9.4} {:>10.3e} {:>10.3e} {:>10.3e} {:>8.4} {:>9.1} {:>10.1}",
            p.name,
            p.gamma_eff(),
            b.total,
            b.pa,
            b.lo,
            b.adc,
            p.evm_pa,
            p.jitter_rms * 1e15,
            p.operating_bandwidth / 1e9
        );
    }
}

fn real_main(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, flags } => {
            let (cfg, out) = apply(load_config(&config)?, &flags);
            let cfg = cfg.resolve()?;
            let result = run_experiment_with_threads(&cfg, flags.threads)?;
            for f in result.write(&cfg, &out)? {
                println!("wrote {}", f.display());
            }
            for n in &result.metadata.notes {
                println!("note: {n}");
            }
        }
        Command::Suite { config, flags } => {
            let base = match config {
                Some(p) => load_config(&p)?,
                None => ExperimentConfig::default(),
            };
            let (cfg, out) = apply(base, &flags);
            for (id, r, files) in run_suite(&cfg, &out, flags.threads)? {
                println!("{id}: {} files, {:.1} s", files.len(), r.metadata.wall_clock_s);
            }
        }
        Command::ListProfiles => list_profiles(),
        Command::Validate { config } => {
            let cfg = load_config(&config)?.resolve()?;
            print!("{}", cfg.to_toml()?);
            for p in cfg.resolved_profiles()? {
                println!(
                    "# {}: gamma_eff = {} (components sum {}), sigma_phi2 = {}",
                    p.name(),
                    p.gamma_eff(),
                    p.hardware.gamma_breakdown.total,
                    p.sigma_phi2
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match real_main(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
