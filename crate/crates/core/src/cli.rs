//! `lindblad-lab` command line.
//!
//! Exit codes: 0 success, 1 input or validation error, 2 verification
//! failure. `LINDBLAD_LAB_THREADS` caps the number of worker threads.

use std::ffi::OsString;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::{parse_config, sha256_hex, RunConfig};
use crate::report::{
    bounds_table, compose_table, fig1_table, fig2_table, run_trajectories, trajectory_table,
    write_table, write_table_file, Stamp, Table,
};
use crate::scenarios::ScenarioParams;
use crate::verify::{render, run_suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

pub const THREADS_ENV: &str = "LINDBLAD_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "lindblad-lab",
    version,
    about = "Lindblad dynamics and purity/entropy speed limits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate every initial state and write the trajectory CSV.
    Simulate {
        config: PathBuf,
        /// Output file; defaults to the config's `output`, then stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write rates, actions and the requested envelopes next to the simulated values.
    Bounds {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the datasets of the dephasing (fig1) or decay (fig2) figure.
    Figures {
        figure: Figure,
        #[arg(long, default_value_t = ScenarioParams::default().seed)]
        seed: u64,
        /// Directory receiving `<figure>.csv`.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run the invariant suite and print a pass/fail table.
    Verify {
        /// Reduced sample counts.
        #[arg(long)]
        quick: bool,
    },
    /// Rates and log-purity of 1..=M independent copies of the configured model.
    Compose {
        config: PathBuf,
        #[arg(long)]
        copies: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig1,
    Fig2,
}

impl Figure {
    fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let _ = e.print();
            return code;
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return EXIT_INVALID;
    }
    match execute(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_INVALID
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got `{value}`"))?;
    // A global pool may already exist when running in-process more than once.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn load(path: &Path) -> Result<RunConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(out: Option<&Path>, stamp: &Stamp, table: &Table) -> Result<(), String> {
    match out {
        Some(path) => write_table_file(path, stamp, table)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => write_table(io::stdout().lock(), stamp, table)
            .map_err(|e| format!("cannot write to stdout: {e}")),
    }
}

fn stamp_of(cfg: &RunConfig) -> Stamp {
    Stamp {
        config_sha256: cfg.sha256.clone(),
        seed: cfg.seed,
    }
}

fn execute(command: Command) -> Result<i32, String> {
    match command {
        Command::Simulate { config, out } => {
            let cfg = load(&config)?;
            let trajectories = run_trajectories(&cfg).map_err(|e| e.to_string())?;
            let out = out.or(cfg.output.clone());
            emit(
                out.as_deref(),
                &stamp_of(&cfg),
                &trajectory_table(&trajectories),
            )?;
        }
        Command::Bounds { config, out } => {
            let cfg = load(&config)?;
            let trajectories = run_trajectories(&cfg).map_err(|e| e.to_string())?;
            let table = bounds_table(&cfg, &trajectories).map_err(|e| e.to_string())?;
            let out = out.or(cfg.output.clone());
            emit(out.as_deref(), &stamp_of(&cfg), &table)?;
        }
        Command::Figures { figure, seed, out } => {
            let params = ScenarioParams {
                seed,
                ..ScenarioParams::default()
            };
            let table = match figure {
                Figure::Fig1 => fig1_table(&params),
                Figure::Fig2 => fig2_table(&params),
            }
            .map_err(|e| e.to_string())?;
            let description = format!(
                "figures {} seed={seed} count={} dt={}",
                figure.name(),
                params.count,
                params.dt
            );
            let stamp = Stamp {
                config_sha256: sha256_hex(&description),
                seed: Some(seed),
            };
            let path = out.join(format!("{}.csv", figure.name()));
            emit(Some(&path), &stamp, &table)?;
            eprintln!("wrote {}", path.display());
        }
        Command::Verify { quick } => {
            let outcomes = run_suite(quick);
            print!("{}", render(&outcomes));
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            if failed > 0 {
                eprintln!("{failed} of {} checks failed", outcomes.len());
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
        Command::Compose {
            config,
            copies,
            out,
        } => {
            let cfg = load(&config)?;
            let table = compose_table(&cfg, copies).map_err(|e| e.to_string())?;
            let out = out.or(cfg.output.clone());
            emit(out.as_deref(), &stamp_of(&cfg), &table)?;
        }
    }
    Ok(EXIT_OK)
}
