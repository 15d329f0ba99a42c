//! `mc generate` and `mc analyze`: event production and witness estimation.

use crate::parse::{merge_flag, merge_str, merge_u64, parse_angle, parse_energy, parse_window};
use crate::CmdError;
use clap::{Args, Subcommand};
use compton_witness::channel::max_visibility;
use compton_witness::montecarlo::{
    analytic_estimate, chi2_pvalue, delta_phi_histogram, estimate_witness, expected_delta_phi,
    read_events_csv, write_events_csv, EventSampler, RunConfig,
};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

#[derive(Subcommand)]
pub enum McCmd {
    /// Sample coincidence events and write them as CSV (plus a JSON sidecar
    /// with the full run configuration when --out is given).
    Generate(GenerateArgs),
    /// Estimate the witness from an event file and test the Δφ shape.
    Analyze(AnalyzeArgs),
}

#[derive(Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub state: Option<String>,
    #[arg(long)]
    pub energy: Option<String>,
    #[arg(long)]
    pub energy_a: Option<String>,
    #[arg(long)]
    pub energy_b: Option<String>,
    /// Number of events.
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Accepted scattering-angle window per arm, lo:hi; default is the
    /// visibility optimum ± 2°.
    #[arg(long)]
    pub window_a: Option<String>,
    #[arg(long)]
    pub window_b: Option<String>,
    /// Azimuth bins for later analysis (window width is one bin).
    #[arg(long)]
    pub bins: Option<u64>,
    #[arg(long)]
    pub frame_phi: Option<String>,
    /// Gaussian angular smearing in degrees.
    #[arg(long)]
    pub smear: Option<String>,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct AnalyzeArgs {
    /// Event CSV produced by `mc generate`.
    pub events: PathBuf,
    /// Run-configuration sidecar; defaults to <events>.meta.json.
    #[arg(long)]
    pub meta: Option<PathBuf>,
    /// Override the azimuth bin count from the sidecar.
    #[arg(long)]
    pub bins: Option<u64>,
    /// Skip the comparison against the analytic expectation.
    #[arg(long)]
    pub no_analytic: bool,
}

pub fn run(cmd: McCmd, cfg: Option<&Value>) -> Result<(), CmdError> {
    match cmd {
        McCmd::Generate(args) => generate(args, cfg),
        McCmd::Analyze(args) => analyze(args, cfg),
    }
}

fn build_config(args: GenerateArgs, cfg: Option<&Value>) -> Result<RunConfig<f64>, CmdError> {
    let u = CmdError::Usage;
    let state_spec =
        merge_str(args.state, cfg, "state").ok_or_else(|| u("--state is required".into()))?;
    let energy = merge_str(args.energy, cfg, "energy");
    let k_a = parse_energy(
        &merge_str(args.energy_a, cfg, "energy-a")
            .or_else(|| energy.clone())
            .unwrap_or_else(|| "1".into()),
    )
    .map_err(u)?;
    let k_b = parse_energy(
        &merge_str(args.energy_b, cfg, "energy-b")
            .or_else(|| energy)
            .unwrap_or_else(|| "1".into()),
    )
    .map_err(u)?;
    let n_events = merge_u64(args.n, cfg, "n").ok_or_else(|| u("--n is required".into()))?;
    let default_window = |k: f64| -> (f64, f64) {
        let (theta, _) = max_visibility(k);
        let half = 2f64.to_radians();
        ((theta - half).max(0.0), (theta + half).min(std::f64::consts::PI))
    };
    let theta_window_a = match merge_str(args.window_a, cfg, "window-a") {
        Some(s) => parse_window(&s).map_err(u)?,
        None => default_window(k_a),
    };
    let theta_window_b = match merge_str(args.window_b, cfg, "window-b") {
        Some(s) => parse_window(&s).map_err(u)?,
        None => default_window(k_b),
    };
    let frame_phi = match merge_str(args.frame_phi, cfg, "frame-phi") {
        Some(s) => parse_angle(&s).map_err(u)?,
        None => 0.0,
    };
    let smear_deg = match merge_str(args.smear, cfg, "smear") {
        Some(s) => s.parse::<f64>().map_err(|_| u(format!("bad --smear `{s}`")))?,
        None => 0.0,
    };
    let config = RunConfig {
        state_spec,
        k_a,
        k_b,
        n_events,
        seed: merge_u64(args.seed, cfg, "seed").unwrap_or(0),
        theta_window_a,
        theta_window_b,
        azimuth_bins: merge_u64(args.bins, cfg, "bins").unwrap_or(36) as usize,
        frame_phi,
        smear_deg,
    };
    config.validate()?;
    Ok(config)
}

fn generate(args: GenerateArgs, cfg: Option<&Value>) -> Result<(), CmdError> {
    let out_path = args.out.clone().or_else(|| {
        cfg.and_then(|c| c.get("out"))
            .and_then(Value::as_str)
            .map(PathBuf::from)
    });
    let config = build_config(args, cfg)?;
    let sampler = EventSampler::new(config.clone())?;
    // Events are keyed by index, so parallel generation stays deterministic.
    let events: Vec<_> = (0..config.n_events)
        .into_par_iter()
        .map(|i| sampler.event(i))
        .collect();
    match &out_path {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write_events_csv(events.into_iter(), &mut w)?;
            w.flush()?;
            let meta = sidecar_path(path);
            std::fs::write(&meta, serde_json::to_string_pretty(&config).unwrap())?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            write_events_csv(events.into_iter(), &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn sidecar_path(events: &std::path::Path) -> PathBuf {
    let mut name = events.as_os_str().to_os_string();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn analyze(args: AnalyzeArgs, cfg: Option<&Value>) -> Result<(), CmdError> {
    let u = CmdError::Usage;
    let meta_path = args.meta.unwrap_or_else(|| sidecar_path(&args.events));
    let meta_text = std::fs::read_to_string(&meta_path).map_err(|e| {
        u(format!(
            "cannot read run configuration {}: {e} (pass --meta)",
            meta_path.display()
        ))
    })?;
    let mut config: RunConfig<f64> =
        serde_json::from_str(&meta_text).map_err(|e| u(format!("bad sidecar JSON: {e}")))?;
    if let Some(bins) = merge_u64(args.bins, cfg, "bins") {
        config.azimuth_bins = bins as usize;
    }
    config.validate()?;
    let events = read_events_csv(BufReader::new(File::open(&args.events)?), &config)?;
    let estimate = estimate_witness(&events, &config)?;

    let hist = delta_phi_histogram(&events, config.azimuth_bins);
    let expected = expected_delta_phi(&config, config.azimuth_bins)?;
    let (chi2, pvalue) = chi2_pvalue(&hist, &expected);

    let mut report = json!({
        "n_events": estimate.n_events,
        "i3_estimate": estimate.i3,
        "sigma": estimate.sigma,
        "readings": estimate.readings,
        "window_phase_rad": [estimate.window_phase.0, estimate.window_phase.1],
        "visibility_window_avg": {"a": estimate.visibility_a, "b": estimate.visibility_b},
        "bounds": {
            "sep_lo": estimate.bounds.sep_lo, "sep_hi": estimate.bounds.sep_hi,
            "ent_lo": estimate.bounds.ent_lo, "ent_hi": estimate.bounds.ent_hi,
        },
        "delta_phi_chi2": {"chi2": chi2, "dof": config.azimuth_bins - 1, "p_value": pvalue},
        "verdict": if estimate.i3 - 3.0 * estimate.sigma > estimate.bounds.sep_hi {
            "ENTANGLED"
        } else {
            "INCONCLUSIVE"
        },
    });
    if !merge_flag(args.no_analytic, cfg, "no-analytic") {
        let (i3_analytic, readings) = analytic_estimate(&config)?;
        let delta = (estimate.i3 - i3_analytic).abs() / estimate.sigma;
        report["analytic"] = json!({
            "i3": i3_analytic,
            "readings": readings,
            "deviation_sigmas": delta,
        });
    }
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    Ok(())
}
