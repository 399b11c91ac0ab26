use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pa_fbl_cli::config::{Command, ConfigError, Param, Regime, SweepSpec};
use pa_fbl_cli::output::{write_csv_to, write_gnuplot};
use pa_fbl_cli::{exit_status, parse_config, presets, run_sweep, write_csv, RunOptions};
use pa_fbl_cli::{EXIT_CONFIG, EXIT_FAILURE};

#[derive(Parser)]
#[command(
    name = "pa-fbl",
    version,
    about = "Finite block-length throughput sweeps for predictor-antenna links"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed for Monte Carlo streams.
    #[arg(long, env = "PA_FBL_SEED")]
    seed: Option<u64>,
    /// Monte Carlo samples per grid point.
    #[arg(long)]
    mc_samples: Option<u64>,
    /// Also write a whitespace-separated .dat file next to the CSV.
    #[arg(long)]
    gnuplot: bool,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a sweep described by a configuration file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run one of the shipped figure presets.
    Preset {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(presets::names().collect::<Vec<_>>()))]
        name: String,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate a single operating point.
    Point {
        #[arg(long, allow_negative_numbers = true)]
        snr_db: f64,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        length: u64,
        /// Fixed transmit rate in npcu; rate adaptation when absent.
        #[arg(long)]
        rate: Option<f64>,
        #[arg(long, value_parser = parse_regime)]
        regime: Regime,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_regime(s: &str) -> Result<Regime, String> {
    s.parse()
}

fn point_spec(snr_db: f64, sigma: f64, length: u64, rate: Option<f64>, regime: Regime) -> SweepSpec {
    let mut fixed = std::collections::BTreeMap::from([
        (Param::SnrDb, snr_db),
        (Param::Sigma, sigma),
        (Param::Length, length as f64),
    ]);
    if let Some(r) = rate {
        fixed.insert(Param::Rate, r);
    }
    SweepSpec {
        command: Command::Point,
        axes: Vec::new(),
        fixed,
        regimes: vec![regime],
        output_path: None,
        mc: None,
    }
}

fn config_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("configuration error: {e}");
    ExitCode::from(EXIT_CONFIG as u8)
}

fn execute(spec: SweepSpec, common: Common) -> ExitCode {
    if spec.is_fixed_rate() && spec.regimes.contains(&Regime::Genie) {
        return config_error("regime `genie` cannot run at a fixed rate");
    }
    let opts = RunOptions {
        seed: common.seed,
        mc_samples: common.mc_samples,
        threads: common.threads,
    };
    if let Err(e) = opts.mc_config(&spec) {
        return config_error(e);
    }
    let out = common.out.or_else(|| spec.output_path.clone());
    if common.gnuplot && out.is_none() {
        return config_error("--gnuplot needs an output path");
    }
    let results = run_sweep(&spec, &opts);
    let written = match &out {
        Some(path) => write_csv(&results, path).map_err(|e| e.to_string()).and_then(|()| {
            if common.gnuplot {
                write_gnuplot(&results, &spec.regimes, &path.with_extension("dat")).map_err(|e| e.to_string())
            } else {
                Ok(())
            }
        }),
        None => write_csv_to(&results, io::stdout().lock()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_FAILURE as u8);
    }
    for row in results.iter().filter_map(|r| r.error.as_ref().map(|e| (r, e))) {
        eprintln!("point {} ({}): {}", row.0.point.index, row.0.regime, row.1);
    }
    ExitCode::from(exit_status(&results) as u8)
}

fn read_config(path: &Path) -> Result<SweepSpec, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        line: None,
        message: format!("{}: {e}", path.display()),
    })?;
    parse_config(&text).map_err(|e| ConfigError {
        line: None,
        message: format!("{}: {e}", path.display()),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Cmd::Run { config, common } => match read_config(&config) {
            Ok(spec) => execute(spec, common),
            Err(e) => config_error(e),
        },
        Cmd::Preset { name, common } => match presets::load_preset(&name) {
            Ok(spec) => execute(spec, common),
            Err(e) => config_error(e),
        },
        Cmd::Point {
            snr_db,
            sigma,
            length,
            rate,
            regime,
            common,
        } => execute(point_spec(snr_db, sigma, length, rate, regime), common),
    }
}
