//! `diracsea`: run Dirac-sea experiments from a JSON configuration.
//!
//! Exit codes: 0 success, 1 i/o failure, 2 schema or validation failure,
//! 3 numerical guard.

mod config;
mod error;
mod experiments;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use config::{Axis, Config, Experiment};
use error::HarnessError;
use output::{sha256_hex, OutputDir};

#[derive(Parser, Debug)]
#[command(name = "diracsea", version, about = "Dirac-sea dynamics experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Overrides `kernel3p1.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the experiment named in the config.
    Run { config: PathBuf },
    /// Repeat the config's experiment over one axis.
    Sweep {
        config: PathBuf,
        /// One of N, e, amplitude, Λ.
        #[arg(long)]
        axis: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        values: Vec<f64>,
    },
}

fn calibration(cfg: &Config) -> serde_json::Value {
    use diracsea_core::{dirac1p1, kernel3p1, observables, wedge};
    json!({
        "support_threshold": dirac1p1::SUPPORT_THRESHOLD,
        "degeneracy_threshold": dirac1p1::DEGENERACY_THRESHOLD,
        "condition_limit": wedge::CONDITION_LIMIT,
        "two_pair_channel_cap": observables::TWO_PAIR_CHANNEL_CAP,
        "current_bump_widths": "sigma_t = 2 dt, sigma_x = 2 dx",
        "current_epsilon": cfg.observables.epsilon,
        "current_resolution": 0.05,
        "kernel_sign": cfg.polarization.kernel_sign,
        "class_probe_refinement_tolerance": 0.2,
        "sampler_chunk": kernel3p1::SamplerSpec::new(2, 0).chunk,
        "verdict": cfg.tolerances.thresholds(),
        "unitarity_tolerance": cfg.tolerances.unitarity,
    })
}

fn execute(cli: &Cli) -> Result<Option<HarnessError>, HarnessError> {
    let (path, sweep_args) = match &cli.command {
        Command::Run { config } => (config, None),
        Command::Sweep { config, axis, values } => (config, Some((Axis::parse(axis)?, values.clone()))),
    };
    let (mut cfg, raw) = Config::load(path)?;
    if let Some(seed) = cli.seed {
        cfg.override_seed(seed);
    }
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(HarnessError::schema("threads", "must be positive"));
        }
        // A second initialization only fails if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }

    let started = chrono::Utc::now();
    let clock = Instant::now();
    let (name, outcome, sweep_meta) = match (sweep_args, cfg.experiment) {
        (Some((axis, values)), exp) => {
            let exp = if exp == Experiment::Sweep {
                cfg.sweep.as_ref().map(|s| s.experiment).ok_or_else(|| HarnessError::schema("sweep", "section is required"))?
            } else {
                exp
            };
            let o = experiments::run_sweep(&cfg, exp, axis, &values)?;
            ("sweep", o, Some(json!({"experiment": exp.name(), "axis": axis.name(), "values": values})))
        }
        (None, Experiment::Sweep) => {
            let s = cfg.sweep.clone().ok_or_else(|| HarnessError::schema("sweep", "section is required"))?;
            let o = experiments::run_sweep(&cfg, s.experiment, s.axis, &s.values)?;
            ("sweep", o, Some(json!({"experiment": s.experiment.name(), "axis": s.axis.name(), "values": s.values})))
        }
        (None, exp) => (exp.name(), experiments::run(&cfg, exp)?, None),
    };
    let wall = clock.elapsed().as_secs_f64();

    let mut out = OutputDir::create(&cli.out)?;
    out.table(name, &outcome.table)?;
    out.json(name, &outcome.summary)?;
    let mut outputs = out.written.clone();
    outputs.push("manifest.json".to_string());
    let manifest = json!({
        "tool": "diracsea",
        "version": env!("CARGO_PKG_VERSION"),
        "schema": cfg.schema,
        "experiment": name,
        "sweep": sweep_meta,
        "config_path": path.display().to_string(),
        "config_sha256": sha256_hex(&raw),
        "seed": cfg.seed(),
        "threads": cli.threads.unwrap_or_else(rayon::current_num_threads),
        "started_at": started.to_rfc3339(),
        "wall_time_s": wall,
        "outputs": outputs,
        "status": match &outcome.guard { Some(g) => g.to_string(), None => "ok".to_string() },
        "calibration": calibration(&cfg),
    });
    output::write_json(&Path::new(&out.root).join("manifest.json"), &manifest)?;
    Ok(outcome.guard)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(guard)) | Err(guard) => {
            eprintln!("diracsea: {guard}");
            ExitCode::from(guard.exit_code() as u8)
        }
    }
}
