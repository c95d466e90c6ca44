//! `evostab` — command-line front door for the stability toolkit: ingest
//! family definitions, run analyses, emit deterministic reports and decay
//! certificates.

mod commands;
mod config;
mod records;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

/// Exit codes are a stable contract for CI:
/// 0 = pass, 1 = verified failure or a refused certificate,
/// 2 = inconclusive (window too small), 3 = bad configuration or input.
pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INCONCLUSIVE: u8 = 2;
pub const EXIT_CONFIG: u8 = 3;

#[derive(Parser)]
#[command(
    name = "evostab",
    version,
    about = "Analyze and certify (non)uniform exponential stability of discrete linear dynamics"
)]
pub struct Cli {
    /// JSON configuration file; command-line flags override its fields
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// family definition file (JSON); overrides the config file
    #[arg(long, global = true, value_name = "FILE")]
    pub family: Option<PathBuf>,

    /// window length N (slots 0..=N); default 512
    #[arg(long, global = true, value_name = "N")]
    pub horizon: Option<usize>,

    /// vector norm on the state space; default sup
    #[arg(long, global = true, value_parser = ["sup", "euclidean"])]
    pub norm: Option<String>,

    /// comma-separated exponent grid for `analyze`
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        allow_negative_numbers = true,
        value_name = "A,B,..."
    )]
    pub alpha_grid: Option<Vec<f64>>,

    /// number of seeded random probe windows; default 256
    #[arg(long, global = true, value_name = "K")]
    pub probes: Option<usize>,

    /// probe RNG seed; default 42
    #[arg(long, global = true, value_name = "S")]
    pub seed: Option<u64>,

    /// safety margin in (0,1) for decay constructions; default 0.5
    #[arg(long, global = true, allow_negative_numbers = true, value_name = "D")]
    pub delta: Option<f64>,

    /// step-chain and power-ladder depth; default 12
    #[arg(long, global = true, value_name = "K")]
    pub k_max: Option<usize>,

    /// write the report here instead of stdout (single write, never partial)
    #[arg(long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,

    /// report format; default records (JSON lines)
    #[arg(long, global = true, value_parser = ["records", "table"])]
    pub format: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Scan an exponent grid and report admissibility verdicts per exponent
    Analyze,
    /// Issue a decay certificate at one exponent and re-verify it
    Certify {
        /// weight exponent the certificate targets
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        /// also write the bare certificate JSON to this file
        #[arg(long, value_name = "FILE")]
        certificate_out: Option<PathBuf>,
    },
    /// Solve the generator equation G u = -v for an input window
    Solve {
        /// window file (JSON) holding v; slot 0 must be zero
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        /// also write the solution window JSON to this file
        #[arg(long, value_name = "FILE")]
        solution_out: Option<PathBuf>,
    },
    /// Run a named worked-example verification suite
    Example {
        /// which suite to run
        #[arg(value_parser = ["ex1", "ex2"])]
        name: String,
        /// lower exponent for ex2; default -0.5
        #[arg(long, allow_negative_numbers = true)]
        alpha: Option<f64>,
        /// upper exponent for ex2; default -0.2
        #[arg(long, allow_negative_numbers = true)]
        beta: Option<f64>,
        /// number of witness peaks for ex2; default 40
        #[arg(long, value_name = "N")]
        n_max: Option<usize>,
    },
    /// Re-check a previously issued certificate file
    Verify {
        /// certificate JSON produced by `certify`
        #[arg(long, value_name = "FILE")]
        certificate: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_CONFIG,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("evostab: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
