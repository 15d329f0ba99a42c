//! Monte Carlo sampling of two-photon Compton events from the joint
//! differential cross section, and witness estimation from event data.
//!
//! Generation is counter-based: every event owns a ChaCha8 substream keyed by
//! its index, so a run is reproducible event-by-event and order-independent.
//! The polar angles come from inverse-CDF lookup on a tabulated
//! envelope-weighted density; the azimuth pair is rejection-sampled against a
//! certified bound of the conditional density.

use crate::channel::{envelope, k_out, probability_part_two, visibility};
use crate::error::{Error, Result};
use crate::quantum::DensityMatrix;
use crate::scalar::{real, Real};
use crate::states::parse_state;
use crate::witness::{mub_bounds, WitnessBounds};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::io::{BufRead, Write};

/// One sampled coincidence: per-photon scattering angle, azimuth and
/// energies, plus the reproducibility lineage (run seed, event index).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EventRecord<T> {
    pub event_id: u64,
    pub seed_lineage: (u64, u64),
    pub theta_a: T,
    pub phi_a: T,
    pub k_in_a: T,
    pub k_out_a: T,
    pub theta_b: T,
    pub phi_b: T,
    pub k_in_b: T,
    pub k_out_b: T,
}

/// Full description of a generation run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig<T> {
    pub state_spec: String,
    pub k_a: T,
    pub k_b: T,
    pub n_events: u64,
    pub seed: u64,
    /// Accepted scattering-angle window per arm, radians.
    pub theta_window_a: (T, T),
    pub theta_window_b: (T, T),
    pub azimuth_bins: usize,
    pub frame_phi: T,
    /// Gaussian angular smearing applied after sampling, degrees.
    pub smear_deg: T,
}

impl<T: Real> RunConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.n_events == 0 {
            return Err(Error::BadConfig("n_events must be at least 1".into()));
        }
        for (lo, hi) in [self.theta_window_a, self.theta_window_b] {
            if !(T::zero() <= lo && lo < hi && hi <= T::PI()) {
                return Err(Error::BadConfig(format!(
                    "theta window [{lo}, {hi}] must lie inside [0, pi]"
                )));
            }
        }
        if self.azimuth_bins < 4 {
            return Err(Error::BadConfig("need at least 4 azimuth bins".into()));
        }
        if !(self.k_a > T::zero() && self.k_b > T::zero()) {
            return Err(Error::BadConfig("energies must be positive".into()));
        }
        if self.smear_deg < T::zero() {
            return Err(Error::BadConfig("smear must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn state(&self) -> Result<DensityMatrix<T>> {
        let rho = parse_state(&self.state_spec)?;
        if rho.dim() != 4 {
            return Err(Error::BadConfig(format!(
                "event generation needs a two-photon state, got dimension {}",
                rho.dim()
            )));
        }
        Ok(rho)
    }
}

/// Tabulated inverse CDF of the envelope-weighted polar density F(θ)·sinθ.
#[derive(Debug, Clone)]
struct CdfTable<T> {
    thetas: Vec<T>,
    cdf: Vec<T>,
}

const CDF_POINTS: usize = 2048;

impl<T: Real> CdfTable<T> {
    fn new(k_in: T, window: (T, T)) -> Self {
        let (lo, hi) = window;
        let n = CDF_POINTS;
        let step = (hi - lo) / real::<T>((n - 1) as f64);
        let thetas: Vec<T> = (0..n).map(|i| lo + step * real::<T>(i as f64)).collect();
        let density: Vec<T> = thetas
            .iter()
            .map(|&t| envelope(k_in, t) * t.sin())
            .collect();
        let mut cdf = vec![T::zero(); n];
        for i in 1..n {
            cdf[i] = cdf[i - 1] + (density[i - 1] + density[i]) * step * real::<T>(0.5);
        }
        let total = cdf[n - 1];
        for c in &mut cdf {
            *c /= total;
        }
        Self { thetas, cdf }
    }

    fn sample(&self, u: T) -> T {
        let n = self.cdf.len();
        let mut lo = 0usize;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.cdf[mid] <= u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let span = self.cdf[hi] - self.cdf[lo];
        let frac = if span > T::zero() { (u - self.cdf[lo]) / span } else { T::zero() };
        self.thetas[lo] + (self.thetas[hi] - self.thetas[lo]) * frac
    }
}

/// Event generator for one run configuration.
pub struct EventSampler<T> {
    cfg: RunConfig<T>,
    rho: DensityMatrix<T>,
    cdf_a: CdfTable<T>,
    cdf_b: CdfTable<T>,
}

impl<T: Real> EventSampler<T> {
    pub fn new(cfg: RunConfig<T>) -> Result<Self> {
        cfg.validate()?;
        let rho = cfg.state()?;
        let cdf_a = CdfTable::new(cfg.k_a, cfg.theta_window_a);
        let cdf_b = CdfTable::new(cfg.k_b, cfg.theta_window_b);
        Ok(Self { cfg, rho, cdf_a, cdf_b })
    }

    pub fn config(&self) -> &RunConfig<T> {
        &self.cfg
    }

    /// Generate event `i` from its own substream; identical for any call
    /// order or parallel split.
    pub fn event(&self, i: u64) -> EventRecord<T> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(i);
        let theta_a = self.cdf_a.sample(T::sample_unit(&mut rng));
        let theta_b = self.cdf_b.sample(T::sample_unit(&mut rng));
        // Conditional azimuth density, bounded by ¼(1+𝒱a)(1+𝒱b).
        let va = visibility(self.cfg.k_a, theta_a);
        let vb = visibility(self.cfg.k_b, theta_b);
        let bound = real::<T>(0.25) * (T::one() + va) * (T::one() + vb) * real::<T>(1.01);
        let tau = real::<T>(2.0) * T::PI();
        let (phi_a, phi_b) = loop {
            let pa = tau * T::sample_unit(&mut rng);
            let pb = tau * T::sample_unit(&mut rng);
            let h = bound * T::sample_unit(&mut rng);
            let pp = probability_part_two(
                &self.rho,
                self.cfg.k_a,
                theta_a,
                pa,
                self.cfg.k_b,
                theta_b,
                pb,
                self.cfg.frame_phi,
            )
            .expect("valid geometry");
            debug_assert!(pp <= bound);
            if h <= pp {
                break (pa, pb);
            }
        };
        let mut ev = EventRecord {
            event_id: i,
            seed_lineage: (self.cfg.seed, i),
            theta_a,
            phi_a,
            k_in_a: self.cfg.k_a,
            k_out_a: k_out(self.cfg.k_a, theta_a),
            theta_b,
            phi_b,
            k_in_b: self.cfg.k_b,
            k_out_b: k_out(self.cfg.k_b, theta_b),
        };
        if self.cfg.smear_deg > T::zero() {
            ev = smear_event(&ev, self.cfg.smear_deg);
        }
        ev
    }

    pub fn iter(&self) -> impl Iterator<Item = EventRecord<T>> + '_ {
        (0..self.cfg.n_events).map(|i| self.event(i))
    }
}

/// Stream of events for a configuration.
pub fn sample_events<T: Real>(cfg: &RunConfig<T>) -> Result<impl Iterator<Item = EventRecord<T>>> {
    let sampler = EventSampler::new(cfg.clone())?;
    Ok((0..cfg.n_events).map(move |i| sampler.event(i)))
}

const SMEAR_SALT: u64 = 0x5aea_70f0_a265;

/// Gaussian angular smearing of a single event; the noise stream is keyed by
/// the event lineage so smearing is as reproducible as generation.
fn smear_event<T: Real>(ev: &EventRecord<T>, sigma_deg: T) -> EventRecord<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(ev.seed_lineage.0 ^ SMEAR_SALT);
    rng.set_stream(ev.event_id);
    let sigma = sigma_deg.to_radians();
    let tau = real::<T>(2.0) * T::PI();
    let clamp_theta = |t: T| t.max(T::zero()).min(T::PI());
    let wrap_phi = |p: T| {
        let mut x = p % tau;
        if x < T::zero() {
            x += tau;
        }
        x
    };
    let theta_a = clamp_theta(ev.theta_a + sigma * T::sample_normal(&mut rng));
    let phi_a = wrap_phi(ev.phi_a + sigma * T::sample_normal(&mut rng));
    let theta_b = clamp_theta(ev.theta_b + sigma * T::sample_normal(&mut rng));
    let phi_b = wrap_phi(ev.phi_b + sigma * T::sample_normal(&mut rng));
    EventRecord {
        theta_a,
        phi_a,
        k_out_a: k_out(ev.k_in_a, theta_a),
        theta_b,
        phi_b,
        k_out_b: k_out(ev.k_in_b, theta_b),
        ..*ev
    }
}

/// Add Gaussian angular noise (standard deviation in degrees) to every
/// reconstructed angle, re-clamp to valid ranges and recompute the outgoing
/// energies. Zero sigma returns the events untouched.
pub fn smear<T: Real>(
    events: impl IntoIterator<Item = EventRecord<T>>,
    sigma_deg: T,
) -> impl Iterator<Item = EventRecord<T>> {
    events.into_iter().map(move |ev| {
        if sigma_deg > T::zero() {
            smear_event(&ev, sigma_deg)
        } else {
            ev
        }
    })
}

// ---------------------------------------------------------------------------
// Witness estimation from events
// ---------------------------------------------------------------------------

/// I₃ estimate from azimuthal window counts, with statistics.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessEstimate<T> {
    pub i3: T,
    pub sigma: T,
    /// The three correlation readings (aligned, 45°-rotated, worst co-rotation).
    pub readings: [T; 3],
    /// Fitted window phases per arm, radians.
    pub window_phase: (T, T),
    pub n_events: u64,
    /// Window-averaged visibilities and the resulting analytic bounds.
    pub visibility_a: T,
    pub visibility_b: T,
    pub bounds: WitnessBounds<T>,
}

/// Correlation estimator over the event sample.
///
/// Counts land in paired azimuth windows one bin wide at (φa, φb) and the
/// π/2-shifted complements, Bose-symmetrized by including the label-swapped
/// (φb, φa) counts. The window phases come from the second-harmonic Fourier
/// coefficients of the sample. Three readings are combined: the aligned
/// windows, the 45°-co-rotated windows, and the minimum over a coarse
/// co-rotation scan — the latter bounds the third unbiased-basis correlation
/// and is exact for rotation-covariant sources.
pub fn estimate_witness<T: Real>(
    events: &[EventRecord<T>],
    cfg: &RunConfig<T>,
) -> Result<WitnessEstimate<T>> {
    cfg.validate()?;
    if events.is_empty() {
        return Err(Error::InsufficientStatistics("no events".into()));
    }
    let fine = 8 * cfg.azimuth_bins;
    let mut hist = vec![vec![0u64; fine]; fine];
    let tau = 2.0 * std::f64::consts::PI;
    let mut kcc = 0.0f64;
    let mut kcs = 0.0f64;
    let mut ksc = 0.0f64;
    let mut kss = 0.0f64;
    for ev in events {
        let pa = ev.phi_a.to_f64().unwrap();
        let pb = ev.phi_b.to_f64().unwrap();
        let ia = fine_index(pa, fine);
        let ib = fine_index(pb, fine);
        hist[ia][ib] += 1;
        let (ca, sa) = ((2.0 * pa).cos(), (2.0 * pa).sin());
        let (cb, sb) = ((2.0 * pb).cos(), (2.0 * pb).sin());
        kcc += ca * cb;
        kcs += ca * sb;
        ksc += sa * cb;
        kss += sa * sb;
    }
    let n = events.len() as f64;
    let k_hat = [[4.0 * kcc / n, 4.0 * kcs / n], [4.0 * ksc / n, 4.0 * kss / n]];
    let (left_angle, right_angle) = svd2_angles(k_hat);
    // Window start = fitted alignment center minus half a window.
    let width = tau / cfg.azimuth_bins as f64;
    let wa = 0.5 * left_angle - 0.5 * width;
    let wb = 0.5 * right_angle - 0.5 * width;

    let prefix = PrefixTable::new(&hist);
    let win = fine / cfg.azimuth_bins; // fine bins per window (= 8)
    let quarter = fine / 4;
    let to_idx = |angle: f64| fine_index(angle.rem_euclid(tau), fine);

    let reading = |delta_deg: f64| -> Result<(T, f64)> {
        let d = delta_deg.to_radians();
        let ia = to_idx(wa + d);
        let ib = to_idx(wb + d);
        let cell = |da: usize, db: usize| -> u64 {
            let a0 = (ia + da) % fine;
            let b0 = (ib + db) % fine;
            // Bose symmetrization: include the label-swapped counts.
            prefix.rect(a0, win, b0, win) + prefix.rect(b0, win, a0, win)
        };
        let n11 = cell(0, 0);
        let n12 = cell(0, quarter);
        let n21 = cell(quarter, 0);
        let n22 = cell(quarter, quarter);
        for c in [n11, n12, n21, n22] {
            if c / 2 < 100 {
                return Err(Error::InsufficientStatistics(format!(
                    "window count {} below 100",
                    c / 2
                )));
            }
        }
        let total = (n11 + n12 + n21 + n22) as f64;
        let c = (n11 + n22).max(n12 + n21) as f64 / total;
        Ok((real::<T>(c), total / 2.0))
    };

    let (c1, n1) = reading(0.0)?;
    let (c2, n2) = reading(45.0)?;
    let mut c3 = c1;
    let mut n3 = n1;
    for d in [0.0, 15.0, 30.0, 45.0, 60.0, 75.0] {
        let (c, nn) = reading(d)?;
        if c < c3 {
            c3 = c;
            n3 = nn;
        }
    }
    let i3 = c1 + c2 + c3;
    let var = |c: T, nn: f64| -> f64 {
        let cf = c.to_f64().unwrap();
        cf * (1.0 - cf) / nn
    };
    let sigma = (var(c1, n1) + var(c2, n2) + var(c3, n3)).sqrt();

    let va = window_avg_visibility(cfg.k_a, cfg.theta_window_a);
    let vb = window_avg_visibility(cfg.k_b, cfg.theta_window_b);
    let bounds = mub_bounds(va * vb, 3)?;
    Ok(WitnessEstimate {
        i3,
        sigma: real(sigma),
        readings: [c1, c2, c3],
        window_phase: (real(wa.rem_euclid(tau)), real(wb.rem_euclid(tau))),
        n_events: events.len() as u64,
        visibility_a: va,
        visibility_b: vb,
        bounds,
    })
}

fn fine_index(phi: f64, fine: usize) -> usize {
    let tau = 2.0 * std::f64::consts::PI;
    let x = phi.rem_euclid(tau) / tau;
    ((x * fine as f64) as usize).min(fine - 1)
}

/// 2D prefix sums over the fine histogram with wrap-around rectangle counts.
struct PrefixTable {
    n: usize,
    p: Vec<u64>,
}

impl PrefixTable {
    fn new(hist: &[Vec<u64>]) -> Self {
        let n = hist.len();
        let mut p = vec![0u64; (n + 1) * (n + 1)];
        for i in 0..n {
            for j in 0..n {
                p[(i + 1) * (n + 1) + (j + 1)] =
                    hist[i][j] + p[i * (n + 1) + (j + 1)] + p[(i + 1) * (n + 1) + j]
                        - p[i * (n + 1) + j];
            }
        }
        Self { n, p }
    }

    fn plain(&self, a0: usize, a1: usize, b0: usize, b1: usize) -> u64 {
        let n1 = self.n + 1;
        self.p[a1 * n1 + b1] + self.p[a0 * n1 + b0] - self.p[a0 * n1 + b1] - self.p[a1 * n1 + b0]
    }

    /// Count in [a0, a0+alen) × [b0, b0+blen), indices wrapping mod n.
    fn rect(&self, a0: usize, alen: usize, b0: usize, blen: usize) -> u64 {
        let segs = |start: usize, len: usize| -> Vec<(usize, usize)> {
            if start + len <= self.n {
                vec![(start, start + len)]
            } else {
                vec![(start, self.n), (0, start + len - self.n)]
            }
        };
        let mut total = 0;
        for (a0, a1) in segs(a0, alen) {
            for &(b0, b1) in &segs(b0, blen) {
                total += self.plain(a0, a1, b0, b1);
            }
        }
        total
    }
}

/// Closed-form 2x2 SVD angles: returns (left, right) doubled-direction
/// angles of the leading singular pair.
fn svd2_angles(k: [[f64; 2]; 2]) -> (f64, f64) {
    let e = (k[0][0] + k[1][1]) * 0.5;
    let f = (k[0][0] - k[1][1]) * 0.5;
    let g = (k[1][0] + k[0][1]) * 0.5;
    let h = (k[1][0] - k[0][1]) * 0.5;
    let a1 = g.atan2(f);
    let a2 = h.atan2(e);
    let left = (a1 + a2) * 0.5;
    let right = (a1 - a2) * 0.5;
    (left, right)
}

/// Envelope-and-solid-angle weighted average of the visibility over a
/// scattering-angle window.
pub fn window_avg_visibility<T: Real>(k_in: T, window: (T, T)) -> T {
    let n = 512;
    let (lo, hi) = window;
    let step = (hi - lo) / real::<T>(n as f64);
    let mut num = T::zero();
    let mut den = T::zero();
    for i in 0..=n {
        let t = lo + step * real::<T>(i as f64);
        let w = envelope(k_in, t) * t.sin();
        let trap = if i == 0 || i == n { real::<T>(0.5) } else { T::one() };
        num = num + w * visibility(k_in, t) * trap;
        den = den + w * trap;
    }
    num / den
}

/// The estimator's infinite-statistics value for a configuration: the same
/// three readings computed from the analytic window-integrated cells.
pub fn analytic_estimate<T: Real>(cfg: &RunConfig<T>) -> Result<(T, [T; 3])> {
    cfg.validate()?;
    let rho = cfg.state()?;
    let k_hat = state_k_hat(&rho, cfg)?;
    let va = window_avg_visibility(cfg.k_a, cfg.theta_window_a);
    let vb = window_avg_visibility(cfg.k_b, cfg.theta_window_b);
    let v = (va * vb).to_f64().unwrap();
    let (left, right) = svd2_angles(k_hat);
    let width = 2.0 * std::f64::consts::PI / cfg.azimuth_bins as f64;
    // Window integration shrinks a second-harmonic amplitude by sin(w)/w.
    let s = (width.sin() / width).powi(2);
    let c_of = |delta_deg: f64| -> f64 {
        let d = delta_deg.to_radians();
        let ua = [(left + 2.0 * d).cos(), (left + 2.0 * d).sin()];
        let ub = [(right + 2.0 * d).cos(), (right + 2.0 * d).sin()];
        let mut q = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                q += ua[i] * k_hat[i][j] * ub[j];
            }
        }
        0.5 * (1.0 + v * s * q.abs())
    };
    let c1 = c_of(0.0);
    let c2 = c_of(45.0);
    let c3 = [0.0, 15.0, 30.0, 45.0, 60.0, 75.0]
        .into_iter()
        .map(c_of)
        .fold(f64::INFINITY, f64::min);
    Ok((real(c1 + c2 + c3), [real(c1), real(c2), real(c3)]))
}

/// Undamped second-harmonic correlation block of the state, extracted from
/// cross-section combinations at the window midpoints.
fn state_k_hat<T: Real>(rho: &DensityMatrix<T>, cfg: &RunConfig<T>) -> Result<[[f64; 2]; 2]> {
    let ta = (cfg.theta_window_a.0 + cfg.theta_window_a.1) * real::<T>(0.5);
    let tb = (cfg.theta_window_b.0 + cfg.theta_window_b.1) * real::<T>(0.5);
    let va = visibility(cfg.k_a, ta).to_f64().unwrap();
    let vb = visibility(cfg.k_b, tb).to_f64().unwrap();
    let pp = |pa: f64, pb: f64| -> Result<f64> {
        Ok(probability_part_two(
            rho,
            cfg.k_a,
            ta,
            real(pa),
            cfg.k_b,
            tb,
            real(pb),
            cfg.frame_phi,
        )?
        .to_f64()
        .unwrap())
    };
    let q = std::f64::consts::FRAC_PI_2;
    let o = std::f64::consts::FRAC_PI_4;
    let combo = |pa0: f64, pb0: f64| -> Result<f64> {
        Ok(pp(pa0, pb0)? - pp(pa0, pb0 + q)? - pp(pa0 + q, pb0)? + pp(pa0 + q, pb0 + q)?)
    };
    Ok([
        [combo(0.0, 0.0)? / (va * vb), combo(0.0, o)? / (va * vb)],
        [combo(o, 0.0)? / (va * vb), combo(o, o)? / (va * vb)],
    ])
}

// ---------------------------------------------------------------------------
// Delta-phi histogram and shape test
// ---------------------------------------------------------------------------

/// Histogram of Δφ = φa − φb (mod 2π).
pub fn delta_phi_histogram<T: Real>(events: &[EventRecord<T>], bins: usize) -> Vec<u64> {
    let mut hist = vec![0u64; bins];
    for ev in events {
        let d = (ev.phi_a - ev.phi_b).to_f64().unwrap();
        hist[fine_index(d, bins)] += 1;
    }
    hist
}

/// Expected Δφ bin probabilities for a configuration: the analytic marginal
/// A(1 + a cos2Δ + b sin2Δ) with window-averaged visibilities, integrated
/// exactly over each bin.
pub fn expected_delta_phi<T: Real>(cfg: &RunConfig<T>, bins: usize) -> Result<Vec<T>> {
    let rho = cfg.state()?;
    let k = state_k_hat(&rho, cfg)?;
    let va = window_avg_visibility(cfg.k_a, cfg.theta_window_a).to_f64().unwrap();
    let vb = window_avg_visibility(cfg.k_b, cfg.theta_window_b).to_f64().unwrap();
    // Average over the common azimuth at fixed Δ: cosine products halve.
    let a = 0.5 * va * vb * (k[0][0] + k[1][1]);
    let b = 0.5 * va * vb * (k[1][0] - k[0][1]);
    let tau = 2.0 * std::f64::consts::PI;
    let width = tau / bins as f64;
    let mut probs = Vec::with_capacity(bins);
    for i in 0..bins {
        let lo = i as f64 * width;
        let hi = lo + width;
        let integral = width
            + 0.5 * a * ((2.0 * hi).sin() - (2.0 * lo).sin())
            - 0.5 * b * ((2.0 * hi).cos() - (2.0 * lo).cos());
        probs.push(real::<T>(integral / tau));
    }
    Ok(probs)
}

/// Pearson χ² of observed counts against expected probabilities; returns
/// (χ², p-value) with bins−1 degrees of freedom.
pub fn chi2_pvalue<T: Real>(observed: &[u64], expected_probs: &[T]) -> (T, T) {
    assert_eq!(observed.len(), expected_probs.len());
    let n: u64 = observed.iter().sum();
    let mut chi2 = 0.0f64;
    for (&o, p) in observed.iter().zip(expected_probs) {
        let e = n as f64 * p.to_f64().unwrap();
        chi2 += (o as f64 - e).powi(2) / e;
    }
    let dof = (observed.len() - 1) as f64;
    let p = 1.0 - ChiSquared::new(dof).unwrap().cdf(chi2);
    (real(chi2), real(p))
}

// ---------------------------------------------------------------------------
// Event file I/O
// ---------------------------------------------------------------------------

pub const EVENT_CSV_HEADER: &str = "event_id,theta_a,phi_a,kout_a,theta_b,phi_b,kout_b";

/// Write events as CSV with 17 significant digits, byte-stable per platform.
pub fn write_events_csv<T: Real, W: Write>(
    events: impl IntoIterator<Item = EventRecord<T>>,
    out: &mut W,
) -> std::io::Result<()> {
    writeln!(out, "{EVENT_CSV_HEADER}")?;
    for ev in events {
        writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            ev.event_id,
            ev.theta_a.to_f64().unwrap(),
            ev.phi_a.to_f64().unwrap(),
            ev.k_out_a.to_f64().unwrap(),
            ev.theta_b.to_f64().unwrap(),
            ev.phi_b.to_f64().unwrap(),
            ev.k_out_b.to_f64().unwrap(),
        )?;
    }
    Ok(())
}

/// Read an event CSV back; incoming energies and lineage come from the run
/// configuration since the file stores only reconstructed quantities.
pub fn read_events_csv<T: Real, R: BufRead>(input: R, cfg: &RunConfig<T>) -> Result<Vec<EventRecord<T>>> {
    let mut events = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::BadConfig(format!("read error: {e}")))?;
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.starts_with("event_id")) {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::BadConfig(format!(
                "line {}: expected 7 fields, got {}",
                lineno + 1,
                fields.len()
            )));
        }
        let id: u64 = fields[0]
            .parse()
            .map_err(|_| Error::BadConfig(format!("line {}: bad event id", lineno + 1)))?;
        let num = |s: &str| -> Result<T> {
            s.parse::<f64>()
                .map(real::<T>)
                .map_err(|_| Error::BadConfig(format!("line {}: bad number `{s}`", lineno + 1)))
        };
        events.push(EventRecord {
            event_id: id,
            seed_lineage: (cfg.seed, id),
            theta_a: num(fields[1])?,
            phi_a: num(fields[2])?,
            k_in_a: cfg.k_a,
            k_out_a: num(fields[3])?,
            theta_b: num(fields[4])?,
            phi_b: num(fields[5])?,
            k_in_b: cfg.k_b,
            k_out_b: num(fields[6])?,
        });
    }
    Ok(events)
}
