//! Command-line front end: parameter scans, witness reports, protocol
//! thresholds and Monte Carlo event generation/analysis.

mod mc_cmd;
mod parse;
mod scan_cmd;
mod witness_cmd;

use clap::{Parser, Subcommand};
use serde_json::Value;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_USAGE: u8 = 2;
const EXIT_STATISTICS: u8 = 3;

#[derive(Parser)]
#[command(
    name = "compton-witness",
    version,
    about = "Compton polarimetry cross sections and MUB/SIC entanglement witnesses",
    long_about = "Cross-section scans, entanglement-witness reports, protocol energy \
thresholds and Monte Carlo coincidence generation for back-to-back photon pairs \
measured through Compton scattering.\n\nAngles on the command line are degrees \
unless suffixed `rad`; energies are dimensionless multiples of the electron rest \
energy unless suffixed `keV`. Set COMPTON_WITNESS_THREADS to cap parallelism."
)]
struct Cli {
    /// JSON file supplying defaults for flags not given explicitly.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print a CSV grid of a channel quantity.
    Scan(scan_cmd::ScanArgs),
    /// Evaluate an entanglement witness and print a JSON report.
    Witness(witness_cmd::WitnessArgs),
    /// Print the protocol energy thresholds as JSON.
    Thresholds,
    /// Monte Carlo event generation and analysis.
    #[command(subcommand)]
    Mc(mc_cmd::McCmd),
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("COMPTON_WITNESS_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }
    let cli = Cli::parse();
    let cfg = match load_config(cli.config.as_deref()) {
        Ok(c) => c,
        Err(msg) => return usage_error(&msg),
    };
    let result = match cli.cmd {
        Cmd::Scan(args) => scan_cmd::run(args, cfg.as_ref()),
        Cmd::Witness(args) => witness_cmd::run(args, cfg.as_ref()),
        Cmd::Thresholds => run_thresholds(),
        Cmd::Mc(cmd) => mc_cmd::run(cmd, cfg.as_ref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CmdError::Usage(msg)) => usage_error(&msg),
        Err(CmdError::Statistics(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_STATISTICS)
        }
        Err(CmdError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

/// Command failures mapped to the exit-code contract: 2 usage, 3 statistics.
pub enum CmdError {
    Usage(String),
    Statistics(String),
    Io(String),
}

impl From<compton_witness::Error> for CmdError {
    fn from(e: compton_witness::Error) -> Self {
        match e {
            compton_witness::Error::InsufficientStatistics(msg) => CmdError::Statistics(msg),
            other => CmdError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> Self {
        CmdError::Io(e.to_string())
    }
}

fn load_config(path: Option<&std::path::Path>) -> Result<Option<Value>, String> {
    let Some(path) = path else {
        return Ok(None);
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| format!("bad config JSON: {e}"))?;
    Ok(Some(value))
}

fn run_thresholds() -> Result<(), CmdError> {
    let t = compton_witness::witness::protocol_thresholds::<f64>();
    let report = serde_json::json!({
        "k_ent": t.k_ent,
        "k_tel": t.k_tel,
        "k_chsh": t.k_chsh,
        "keV": {
            "ent": t.k_ent * parse::KEV_PER_UNIT,
            "tel": t.k_tel * parse::KEV_PER_UNIT,
            "chsh": t.k_chsh * parse::KEV_PER_UNIT,
        }
    });
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    Ok(())
}
