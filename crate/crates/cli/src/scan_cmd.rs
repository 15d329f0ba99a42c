//! `scan`: CSV grids of visibility, envelope and cross sections.

use crate::parse::{merge_str, parse_angle, parse_angle_range, parse_energy, AngleRange};
use crate::CmdError;
use clap::Args;
use compton_witness::channel::{back_to_back, envelope, max_visibility, sigma_multi, sigma_single, visibility};
use compton_witness::states::parse_state;
use serde_json::Value;

#[derive(Args)]
pub struct ScanArgs {
    /// One of: visibility, envelope, sigma-single, sigma-multi.
    pub quantity: String,
    /// Incoming energy for both arms.
    #[arg(long)]
    pub energy: Option<String>,
    #[arg(long)]
    pub energy_a: Option<String>,
    #[arg(long)]
    pub energy_b: Option<String>,
    /// Scattering-angle grid lo:hi[:step] (visibility, envelope,
    /// sigma-single) or a fixed value where another variable scans.
    #[arg(long)]
    pub theta: Option<String>,
    /// Scattering-plane azimuth: grid or fixed value (sigma-single).
    #[arg(long)]
    pub phi: Option<String>,
    /// Azimuth difference grid lo:hi[:step] (sigma-multi).
    #[arg(long)]
    pub dphi: Option<String>,
    /// Fixed scattering angles per arm (sigma-multi); default is the
    /// visibility optimum for each arm's energy.
    #[arg(long)]
    pub theta_a: Option<String>,
    #[arg(long)]
    pub theta_b: Option<String>,
    /// State spec, e.g. bell:psi+:lin, prod:H, iso:0.5.
    #[arg(long)]
    pub state: Option<String>,
    /// Reference-frame azimuth.
    #[arg(long)]
    pub frame_phi: Option<String>,
    /// Fixed azimuth of arm b (sigma-multi).
    #[arg(long)]
    pub phi_b: Option<String>,
}

struct Merged {
    quantity: String,
    k_a: f64,
    k_b: f64,
    theta: Option<String>,
    phi: Option<String>,
    dphi: Option<String>,
    theta_a: Option<String>,
    theta_b: Option<String>,
    state: Option<String>,
    frame_phi: f64,
    phi_b: f64,
}

fn merged(args: ScanArgs, cfg: Option<&Value>) -> Result<Merged, CmdError> {
    let u = CmdError::Usage;
    let energy = merge_str(args.energy, cfg, "energy");
    let energy_a = merge_str(args.energy_a, cfg, "energy-a").or_else(|| energy.clone());
    let energy_b = merge_str(args.energy_b, cfg, "energy-b").or_else(|| energy.clone());
    let k_a = parse_energy(&energy_a.ok_or_else(|| u("--energy (or --energy-a) is required".into()))?)
        .map_err(u)?;
    let k_b = parse_energy(&energy_b.unwrap_or_else(|| "1".into())).map_err(u)?;
    let angle_or = |s: Option<String>, key: &'static str, default: f64| -> Result<f64, CmdError> {
        match s {
            Some(v) => parse_angle(&v).map_err(|e| u(format!("--{key}: {e}"))),
            None => Ok(default),
        }
    };
    Ok(Merged {
        quantity: args.quantity,
        k_a,
        k_b,
        theta: merge_str(args.theta, cfg, "theta"),
        phi: merge_str(args.phi, cfg, "phi"),
        dphi: merge_str(args.dphi, cfg, "dphi"),
        theta_a: merge_str(args.theta_a, cfg, "theta-a"),
        theta_b: merge_str(args.theta_b, cfg, "theta-b"),
        state: merge_str(args.state, cfg, "state"),
        frame_phi: angle_or(merge_str(args.frame_phi, cfg, "frame-phi"), "frame-phi", 0.0)?,
        phi_b: angle_or(merge_str(args.phi_b, cfg, "phi-b"), "phi-b", 0.0)?,
    })
}

fn grid(range: &AngleRange) -> Vec<f64> {
    let n = ((range.hi - range.lo) / range.step).round() as usize;
    (0..=n).map(|i| range.lo + range.step * i as f64).collect()
}

pub fn run(args: ScanArgs, cfg: Option<&Value>) -> Result<(), CmdError> {
    let m = merged(args, cfg)?;
    let u = CmdError::Usage;
    match m.quantity.as_str() {
        "visibility" | "envelope" => {
            let range = parse_angle_range(
                &m.theta.ok_or_else(|| u("--theta lo:hi[:step] is required".into()))?,
            )
            .map_err(u)?;
            let is_vis = m.quantity == "visibility";
            println!("theta_deg,{}", if is_vis { "visibility" } else { "envelope" });
            for t in grid(&range) {
                let v = if is_vis { visibility(m.k_a, t) } else { envelope(m.k_a, t) };
                println!("{:.12e},{:.12e}", t.to_degrees(), v);
            }
        }
        "sigma-single" => {
            let spec = m.state.ok_or_else(|| u("--state is required".into()))?;
            let rho = parse_state::<f64>(&spec)?;
            if rho.dim() != 2 {
                return Err(u(format!("sigma-single needs a one-photon state, got dim {}", rho.dim())));
            }
            // Whichever of --theta/--phi holds a range is the scan variable.
            let theta_range = m.theta.as_deref().map(parse_angle_range).transpose().ok().flatten();
            let phi_range = m.phi.as_deref().map(parse_angle_range).transpose().ok().flatten();
            if let Some(range) = phi_range {
                let theta = parse_angle(
                    m.theta.as_deref().ok_or_else(|| u("--theta fixed value required".into()))?,
                )
                .map_err(u)?;
                println!("phi_deg,value,envelope,probability_part");
                for p in grid(&range) {
                    let pt = sigma_single(&rho, m.k_a, theta, p)?;
                    println!(
                        "{:.12e},{:.12e},{:.12e},{:.12e}",
                        p.to_degrees(),
                        pt.value,
                        pt.envelope,
                        pt.probability_part
                    );
                }
            } else if let Some(range) = theta_range {
                let phi = parse_angle(m.phi.as_deref().unwrap_or("0")).map_err(u)?;
                println!("theta_deg,value,envelope,probability_part");
                for t in grid(&range) {
                    let pt = sigma_single(&rho, m.k_a, t, phi)?;
                    println!(
                        "{:.12e},{:.12e},{:.12e},{:.12e}",
                        t.to_degrees(),
                        pt.value,
                        pt.envelope,
                        pt.probability_part
                    );
                }
            } else {
                return Err(u("give a range in --theta or --phi".into()));
            }
        }
        "sigma-multi" => {
            let spec = m.state.ok_or_else(|| u("--state is required".into()))?;
            let rho = parse_state::<f64>(&spec)?;
            if rho.dim() != 4 {
                return Err(u(format!("sigma-multi needs a two-photon state, got dim {}", rho.dim())));
            }
            let range = parse_angle_range(
                &m.dphi.ok_or_else(|| u("--dphi lo:hi[:step] is required".into()))?,
            )
            .map_err(u)?;
            let theta_a = match m.theta_a {
                Some(s) => parse_angle(&s).map_err(u)?,
                None => max_visibility(m.k_a).0,
            };
            let theta_b = match m.theta_b {
                Some(s) => parse_angle(&s).map_err(u)?,
                None => max_visibility(m.k_b).0,
            };
            println!("dphi_deg,value,envelope,probability_part");
            for d in grid(&range) {
                let phi_a = m.phi_b + d;
                let geoms =
                    back_to_back(m.k_a, (theta_a, phi_a), m.k_b, (theta_b, m.phi_b), m.frame_phi)?;
                let pt = sigma_multi(&rho, &geoms)?;
                println!(
                    "{:.12e},{:.12e},{:.12e},{:.12e}",
                    d.to_degrees(),
                    pt.value,
                    pt.envelope,
                    pt.probability_part
                );
            }
        }
        other => {
            return Err(u(format!(
                "unknown quantity `{other}` (visibility|envelope|sigma-single|sigma-multi)"
            )))
        }
    }
    Ok(())
}
