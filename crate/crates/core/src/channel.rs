//! The Compton process as a two-operator Kraus channel: outgoing energy,
//! visibility and envelope functions, single-photon cross section in closed
//! form, and the tensor-product generalization to two and three photons.
//!
//! All cross sections are reported in units of the squared classical electron
//! radius (r₀ ≡ 1, r₀^{2z} for z photons); only shapes and ratios matter for
//! every quantity built on top. The normalization is fixed so that the
//! azimuthal average of the single-photon probability part is 1/2.

use crate::error::{Error, Result};
use crate::kinematics::{amplitudes, scattering_angle, Direction, ScatterGeometry};
use crate::linalg::{mat2, ComplexMatrix};
use crate::quantum::DensityMatrix;
use crate::scalar::{cre, real, Real};
use crate::states::BellKind;

/// Outgoing photon energy k′ = 1 / (1 − cos Θ̃ + 1/k_in).
pub fn k_out<T: Real>(k_in: T, theta: T) -> T {
    T::one() / (T::one() - theta.cos() + k_in.recip())
}

/// Energy ratio sum γ = k_in/k′ + k′/k_in; equals 2 at forward scattering.
pub fn gamma<T: Real>(k_in: T, theta: T) -> T {
    let kp = k_out(k_in, theta);
    k_in / kp + kp / k_in
}

/// Interference contrast 𝒱 = sin²Θ̃ / (γ − sin²Θ̃) of one Compton vertex.
pub fn visibility<T: Real>(k_in: T, theta: T) -> T {
    let s2 = theta.sin().powi(2);
    s2 / (gamma(k_in, theta) - s2)
}

/// Envelope ℱ = (k′/k_in)² (γ − sin²Θ̃), the polarization-independent shape.
pub fn envelope<T: Real>(k_in: T, theta: T) -> T {
    let kp = k_out(k_in, theta);
    let s2 = theta.sin().powi(2);
    (kp / k_in).powi(2) * (gamma(k_in, theta) - s2)
}

/// Scattering angle and visibility at the maximum of 𝒱(·, k) over Θ̃.
pub fn max_visibility<T: Real>(k_in: T) -> (T, T) {
    // Coarse scan then golden-section refinement; the curve has a single
    // interior maximum for the energies of interest.
    let n = 512;
    let step = T::PI() / real::<T>(n as f64);
    let mut best_i: usize = 0;
    let mut best = T::zero();
    for i in 0..=n {
        let th = step * real::<T>(i as f64);
        let v = visibility(k_in, th);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let mut lo = step * real::<T>((best_i.saturating_sub(1)) as f64);
    let mut hi = (step * real::<T>((best_i + 1) as f64)).min(T::PI());
    let gr = (real::<T>(5.0).sqrt() - T::one()) * real::<T>(0.5);
    for _ in 0..200 {
        let d = gr * (hi - lo);
        let x1 = hi - d;
        let x2 = lo + d;
        if visibility(k_in, x1) < visibility(k_in, x2) {
            lo = x1;
        } else {
            hi = x2;
        }
        if hi - lo < T::epsilon() * real::<T>(16.0) {
            break;
        }
    }
    let theta = (lo + hi) * real::<T>(0.5);
    (theta, visibility(k_in, theta))
}

/// The two Kraus operators of one Compton vertex in the linear basis.
#[derive(Debug, Clone)]
pub struct KrausPair<T> {
    /// √(γ − 2) times the identity.
    pub k1: ComplexMatrix<T>,
    /// √2 times the amplitude matrix [[f_HH, f_HV], [f_VH, f_VV]].
    pub k2: ComplexMatrix<T>,
    pub geometry: ScatterGeometry<T>,
}

/// Build the Kraus pair for one vertex. The completeness relation does not
/// hold: K₁†K₁ + K₂†K₂ = (γ−2)·I + 2·F†F, with the energy ratio factored out.
pub fn kraus_pair<T: Real>(g: &ScatterGeometry<T>) -> KrausPair<T> {
    let theta = scattering_angle(g);
    let gm = gamma(g.k_in, theta);
    // γ ≥ 2 holds exactly; clamp rounding at forward scattering.
    let c = (gm - real::<T>(2.0)).max(T::zero()).sqrt();
    let k1 = ComplexMatrix::identity(2).scaled(cre(c));
    let f = amplitudes(g);
    let sqrt2 = real::<T>(2.0).sqrt();
    let k2 = mat2(f.f_hh, f.f_hv, f.f_vh, f.f_vv).scaled(cre(sqrt2));
    KrausPair { k1, k2, geometry: *g }
}

/// One evaluated differential cross section.
#[derive(Debug, Clone, Copy)]
pub struct CrossSectionPoint<T> {
    /// Differential cross section in units of r₀² per photon set.
    pub value: T,
    /// Product of the envelope functions of all vertices.
    pub envelope: T,
    /// Normalized bracket: value / envelope.
    pub probability_part: T,
}

/// Generic Kraus-trace cross section for `z` photons, one geometry each:
/// (1/2)^z Π (k′/k)² Σ_l Tr[(K_{l1} ⊗ … ⊗ K_{lz}) ρ (…)†].
pub fn sigma_kraus<T: Real>(rho: &DensityMatrix<T>, geoms: &[ScatterGeometry<T>]) -> Result<T> {
    let z = geoms.len();
    if z == 0 || z > 3 {
        return Err(Error::DimMismatch(format!("{z} geometries, expected 1..=3")));
    }
    if rho.dim() != 1 << z {
        return Err(Error::DimMismatch(format!(
            "state dimension {} does not match {} photons",
            rho.dim(),
            z
        )));
    }
    let pairs: Vec<KrausPair<T>> = geoms.iter().map(kraus_pair).collect();
    let mut prefactor = T::one();
    for g in geoms {
        let theta = scattering_angle(g);
        prefactor = prefactor * real::<T>(0.5) * (k_out(g.k_in, theta) / g.k_in).powi(2);
    }
    let mut total = T::zero();
    for mask in 0..(1usize << z) {
        let mut op: Option<ComplexMatrix<T>> = None;
        for (i, pair) in pairs.iter().enumerate() {
            let k = if mask & (1 << i) == 0 { &pair.k1 } else { &pair.k2 };
            op = Some(match op {
                None => k.clone(),
                Some(acc) => acc.tensor(k),
            });
        }
        let op = op.unwrap();
        let term = op.mul(rho.matrix()).mul(&op.adjoint()).trace();
        total = total + term.re;
    }
    Ok(prefactor * total)
}

/// Single-photon cross section in the information-theoretic closed form:
/// ℱ · ½ {1 − 𝒱 [(ρ_HH − ρ_VV) cos 2Φ + 2 Im(ρ_HV) sin 2Φ]},
/// where Φ is the azimuth of the scattering plane against the {H, V} frame.
/// Agrees with the Kraus-trace form to machine precision.
pub fn sigma_single<T: Real>(rho: &DensityMatrix<T>, k_in: T, theta: T, phi: T) -> Result<CrossSectionPoint<T>> {
    if rho.dim() != 2 {
        return Err(Error::BadDim { expected: 2, got: rho.dim() });
    }
    let f = envelope(k_in, theta);
    let v = visibility(k_in, theta);
    let lin = rho.entry(0, 0).re - rho.entry(1, 1).re;
    let circ = real::<T>(2.0) * rho.entry(0, 1).im;
    let two_phi = phi + phi;
    let half = real::<T>(0.5);
    let bracket = half * (T::one() - v * (lin * two_phi.cos() + circ * two_phi.sin()));
    Ok(CrossSectionPoint {
        value: f * bracket,
        envelope: f,
        probability_part: bracket,
    })
}

/// Geometry whose Kraus-trace form reproduces [`sigma_single`]: photon
/// incoming along +z with the H axis at azimuth zero, scattered to (Θ̃, Φ).
pub fn single_vertex_geometry<T: Real>(k_in: T, theta: T, phi: T) -> Result<ScatterGeometry<T>> {
    ScatterGeometry::new(
        k_in,
        Direction::new(T::zero(), T::zero())?,
        Direction::new(theta, phi)?,
    )
}

/// Multi-photon cross section for z ∈ {2, 3} photons.
pub fn sigma_multi<T: Real>(rho: &DensityMatrix<T>, geoms: &[ScatterGeometry<T>]) -> Result<CrossSectionPoint<T>> {
    let z = geoms.len();
    if !(2..=3).contains(&z) {
        return Err(Error::DimMismatch(format!("{z} photons, expected 2 or 3")));
    }
    let value = sigma_kraus(rho, geoms)?;
    let mut env = T::one();
    for g in geoms {
        env = env * envelope(g.k_in, scattering_angle(g));
    }
    Ok(CrossSectionPoint {
        value,
        envelope: env,
        probability_part: value / env,
    })
}

/// Back-to-back pair geometry: photon a comes in along +z with the reference
/// frame azimuth `frame_phi` fixing the H axis, photon b along −z at azimuth
/// `frame_phi` + π. `out_a`/`out_b` are (scattering angle Θ̃, azimuth φ) per
/// arm; photon b's outgoing polar angle is π − Θ̃_b in the common frame.
pub fn back_to_back<T: Real>(
    k_a: T,
    out_a: (T, T),
    k_b: T,
    out_b: (T, T),
    frame_phi: T,
) -> Result<[ScatterGeometry<T>; 2]> {
    let ga = ScatterGeometry::new(
        k_a,
        Direction::new(T::zero(), frame_phi)?,
        Direction::new(out_a.0, out_a.1)?,
    )?;
    let gb = ScatterGeometry::new(
        k_b,
        Direction::new(T::PI(), frame_phi + T::PI())?,
        Direction::new(T::PI() - out_b.0, out_b.1)?,
    )?;
    Ok([ga, gb])
}

/// Normalized two-photon probability part at the given azimuths.
pub fn probability_part_two<T: Real>(
    rho: &DensityMatrix<T>,
    k_a: T,
    theta_a: T,
    phi_a: T,
    k_b: T,
    theta_b: T,
    phi_b: T,
    frame_phi: T,
) -> Result<T> {
    let geoms = back_to_back(k_a, (theta_a, phi_a), k_b, (theta_b, phi_b), frame_phi)?;
    Ok(sigma_multi(rho, &geoms)?.probability_part)
}

/// Closed form of the two-photon cross section for a Bell state prepared in
/// the linear basis (back-to-back kinematics):
///   ℱ_a ℱ_b · ¼ {1 + s·𝒱_a 𝒱_b cos 2[(φ_a − φ) − α (φ_b − φ)]},
/// with s = −1 for ψ^α and s = +1 for φ^α; α is the Bell-state sign. The
/// ψ⁺ and φ⁺ curves depend only on φ_a − φ_b and are frame independent.
pub fn bell_sigma_closed<T: Real>(
    kind: BellKind,
    k_a: T,
    theta_a: T,
    phi_a: T,
    k_b: T,
    theta_b: T,
    phi_b: T,
    frame_phi: T,
) -> T {
    let (s, alpha) = match kind {
        BellKind::PsiPlus => (-T::one(), T::one()),
        BellKind::PsiMinus => (-T::one(), -T::one()),
        BellKind::PhiPlus => (T::one(), T::one()),
        BellKind::PhiMinus => (T::one(), -T::one()),
    };
    let v = visibility(k_a, theta_a) * visibility(k_b, theta_b);
    let f = envelope(k_a, theta_a) * envelope(k_b, theta_b);
    let arg = real::<T>(2.0) * ((phi_a - frame_phi) - alpha * (phi_b - frame_phi));
    f * real::<T>(0.25) * (T::one() + s * v * arg.cos())
}

/// Closed form for the separable basis states |XY⟩ with X, Y ∈ {H, V}:
///   ℱ_a ℱ_b · ¼ (1 + s_X 𝒱_a cos 2(φ_a − φ)) (1 + s_Y 𝒱_b cos 2(φ_b − φ)),
/// s = −1 for H and +1 for V.
pub fn product_sigma_closed<T: Real>(
    a_vertical: bool,
    b_vertical: bool,
    k_a: T,
    theta_a: T,
    phi_a: T,
    k_b: T,
    theta_b: T,
    phi_b: T,
    frame_phi: T,
) -> T {
    let sa = if a_vertical { T::one() } else { -T::one() };
    let sb = if b_vertical { T::one() } else { -T::one() };
    let fa = envelope(k_a, theta_a);
    let fb = envelope(k_b, theta_b);
    let va = visibility(k_a, theta_a);
    let vb = visibility(k_b, theta_b);
    let two = real::<T>(2.0);
    let ca = (two * (phi_a - frame_phi)).cos();
    let cb = (two * (phi_b - frame_phi)).cos();
    fa * fb * real::<T>(0.25) * (T::one() + sa * va * ca) * (T::one() + sb * vb * cb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::PureState;
    use crate::scalar::{cim, cone, czero};
    use crate::states::{bell, BellBasis, BellLabel};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn plus45() -> DensityMatrix<f64> {
        let s = 1.0 / 2f64.sqrt();
        DensityMatrix::from_pure(&PureState::new(vec![cre(s), cre(s)]).unwrap())
    }

    fn ket_h() -> DensityMatrix<f64> {
        DensityMatrix::from_pure(&PureState::new(vec![cone(), czero()]).unwrap())
    }

    fn random_qubit(rng: &mut ChaCha8Rng) -> DensityMatrix<f64> {
        // Random pure state mixed with a random weight of identity.
        let a = num_complex::Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let b = num_complex::Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let psi = PureState::normalized(vec![a, b]).unwrap();
        let w: f64 = rng.gen_range(0.0..1.0);
        let m = psi
            .projector()
            .scaled(cre(w))
            .add(&ComplexMatrix::identity(2).scaled(cre(0.5 * (1.0 - w))));
        DensityMatrix::new(m).unwrap()
    }

    #[test]
    fn k_out_cases() {
        assert!((k_out(1.0f64, PI / 2.0) - 0.5).abs() < 1e-15);
        assert!((k_out(3.7f64, 0.0) - 3.7).abs() < 1e-12);
        assert!((k_out(1.0f64, PI) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn visibility_cases() {
        let v = visibility(1.0, 81.67f64.to_radians());
        assert!((v - 0.69).abs() < 0.005, "v = {v}");
        assert!(visibility(2.5f64, 0.0).abs() < 1e-15);
        assert!(visibility(2.5f64, PI).abs() < 1e-12);
        let v = visibility(2.0 / 3.0, 85f64.to_radians());
        assert!((v - 0.80).abs() < 0.005, "v = {v}");
    }

    #[test]
    fn envelope_cases() {
        assert!((envelope(1e-6f64, 0.0) - 2.0).abs() < 1e-4);
        assert!((envelope(1.0f64, PI / 2.0) - 0.375).abs() < 1e-15);
        assert!((envelope(1.0f64, 0.0) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn max_visibility_at_unit_energy() {
        let (theta, v) = max_visibility(1.0f64);
        assert!((theta.to_degrees() - 81.67).abs() < 0.05, "theta = {}", theta.to_degrees());
        assert!((v - 0.69).abs() < 0.005);
    }

    #[test]
    fn kraus_pair_examples() {
        // Scattering plane, Θ̃ = π/2, k = 1.
        let g = ScatterGeometry::new(
            1.0,
            Direction::new(0.0, 0.0).unwrap(),
            Direction::new(PI / 2.0, 0.0).unwrap(),
        )
        .unwrap();
        let kp = kraus_pair(&g);
        assert!((kp.k1[(0, 0)].re - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(kp.k2[(0, 0)].norm() < 1e-12);
        assert!((kp.k2[(1, 1)].re + 2f64.sqrt()).abs() < 1e-12);
        assert!(kp.k2[(0, 1)].norm() < 1e-15);

        // Forward scattering: K1 vanishes, K2 = √2 diag(1, −1).
        let d = Direction::new(0.7, 0.3).unwrap();
        let g = ScatterGeometry::new(2.0, d, d).unwrap();
        let kp = kraus_pair(&g);
        assert!(kp.k1[(0, 0)].norm() < 1e-6);
        assert!((kp.k2[(0, 0)].re - 2f64.sqrt()).abs() < 1e-12);
        assert!((kp.k2[(1, 1)].re + 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn kraus_completeness_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let g = ScatterGeometry::new(
                rng.gen_range(0.2..3.0),
                Direction::new(rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI)).unwrap(),
                Direction::new(rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI)).unwrap(),
            )
            .unwrap();
            let kp = kraus_pair(&g);
            let lhs = kp.k1.adjoint().mul(&kp.k1).add(&kp.k2.adjoint().mul(&kp.k2));
            let f = amplitudes(&g);
            let fm = mat2(f.f_hh, f.f_hv, f.f_vh, f.f_vv);
            let gm = gamma(g.k_in, scattering_angle(&g));
            let rhs = ComplexMatrix::identity(2)
                .scaled(cre(gm - 2.0))
                .add(&fm.adjoint().mul(&fm).scaled(cre(2.0)));
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);

            // Positivity of the channel output trace for any state.
            let rho = random_qubit(&mut rng);
            let total = kp.k1.mul(rho.matrix()).mul(&kp.k1.adjoint()).trace().re
                + kp.k2.mul(rho.matrix()).mul(&kp.k2.adjoint()).trace().re;
            assert!(total > 0.0);
        }
    }

    #[test]
    fn sigma_single_flat_for_diagonal_and_mixed() {
        for &(rho, label) in &[(&plus45(), "+45"), (&DensityMatrix::maximally_mixed(2), "mixed")] {
            for i in 0..16 {
                let phi = 2.0 * PI * (i as f64) / 16.0;
                let pt = sigma_single(rho, 1.0, 1.1, phi).unwrap();
                assert!(
                    (pt.value - pt.envelope / 2.0).abs() < 1e-14,
                    "{label} not flat"
                );
            }
        }
    }

    #[test]
    fn sigma_single_matches_kraus_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let rho = random_qubit(&mut rng);
            let k = rng.gen_range(0.1..4.0);
            let theta = rng.gen_range(0.0..PI);
            let phi = rng.gen_range(0.0..2.0 * PI);
            let closed = sigma_single(&rho, k, theta, phi).unwrap().value;
            let g = single_vertex_geometry(k, theta, phi).unwrap();
            let trace = sigma_kraus(&rho, std::slice::from_ref(&g)).unwrap();
            assert!((closed - trace).abs() < 1e-12, "closed {closed} vs trace {trace}");
        }
        // |H⟩ at Φ = 0 sits at the (1 − 𝒱) minimum.
        let theta = 81.67f64.to_radians();
        let pt = sigma_single(&ket_h(), 1.0, theta, 0.0).unwrap();
        let expect = envelope(1.0, theta) * 0.5 * (1.0 - visibility(1.0, theta));
        assert!((pt.value - expect).abs() < 1e-14);
    }

    #[test]
    fn phi_average_of_probability_part() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let n = 256;
        for _ in 0..10 {
            let rho = random_qubit(&mut rng);
            let k = rng.gen_range(0.2..3.0);
            let theta = rng.gen_range(0.1..PI - 0.1);
            let mut acc = 0.0;
            for i in 0..n {
                let phi = 2.0 * PI * (i as f64) / (n as f64);
                acc += sigma_single(&rho, k, theta, phi).unwrap().probability_part;
            }
            assert!((acc / n as f64 - 0.5).abs() < 1e-10);
        }
    }

    fn bell_rho(kind: BellKind) -> DensityMatrix<f64> {
        DensityMatrix::from_pure(&bell(&BellLabel { kind, basis: BellBasis::Lin }))
    }

    #[test]
    fn two_photon_bell_closed_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for kind in [BellKind::PsiPlus, BellKind::PsiMinus, BellKind::PhiPlus, BellKind::PhiMinus] {
            let rho = bell_rho(kind);
            for _ in 0..100 {
                let ka = rng.gen_range(0.2..3.0);
                let kb = rng.gen_range(0.2..3.0);
                let ta = rng.gen_range(0.05..PI - 0.05);
                let tb = rng.gen_range(0.05..PI - 0.05);
                let pa = rng.gen_range(0.0..2.0 * PI);
                let pb = rng.gen_range(0.0..2.0 * PI);
                let frame = rng.gen_range(0.0..2.0 * PI);
                let geoms = back_to_back(ka, (ta, pa), kb, (tb, pb), frame).unwrap();
                let generic = sigma_multi(&rho, &geoms).unwrap().value;
                let closed = bell_sigma_closed(kind, ka, ta, pa, kb, tb, pb, frame);
                assert!(
                    (generic - closed).abs() < 1e-12,
                    "{kind:?}: generic {generic} vs closed {closed}"
                );
            }
        }
    }

    #[test]
    fn two_photon_separable_closed_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let kets: [(bool, bool); 4] = [(false, false), (false, true), (true, false), (true, true)];
        for (av, bv) in kets {
            let a = if av { vec![czero(), cone()] } else { vec![cone(), czero()] };
            let b = if bv { vec![czero(), cone()] } else { vec![cone(), czero()] };
            let psi = PureState::new(a).unwrap().tensor(&PureState::new(b).unwrap());
            let rho = DensityMatrix::from_pure(&psi);
            for _ in 0..60 {
                let ka = rng.gen_range(0.2..3.0);
                let kb = rng.gen_range(0.2..3.0);
                let ta = rng.gen_range(0.05..PI - 0.05);
                let tb = rng.gen_range(0.05..PI - 0.05);
                let pa = rng.gen_range(0.0..2.0 * PI);
                let pb = rng.gen_range(0.0..2.0 * PI);
                let frame = rng.gen_range(0.0..2.0 * PI);
                let geoms = back_to_back(ka, (ta, pa), kb, (tb, pb), frame).unwrap();
                let generic = sigma_multi(&rho, &geoms).unwrap().value;
                let closed = product_sigma_closed(av, bv, ka, ta, pa, kb, tb, pb, frame);
                assert!((generic - closed).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mixture_degeneracy_with_psi_plus() {
        // ½|HV⟩⟨HV| + ½|VH⟩⟨VH| with the frame tied to φ_b reproduces the
        // ψ⁺ azimuthal curve exactly.
        let hv = PureState::<f64>::new(vec![czero(), cone(), czero(), czero()]).unwrap();
        let vh = PureState::<f64>::new(vec![czero(), czero(), cone(), czero()]).unwrap();
        let mix = DensityMatrix::mixture(&[
            (0.5, DensityMatrix::from_pure(&hv)),
            (0.5, DensityMatrix::from_pure(&vh)),
        ])
        .unwrap();
        let psi = bell_rho(BellKind::PsiPlus);
        let (ka, kb, ta, tb) = (1.0, 1.0, 81.67f64.to_radians(), 81.67f64.to_radians());
        let phi_b = 0.7;
        for i in 0..20 {
            let dphi = 2.0 * PI * (i as f64) / 20.0;
            let phi_a = phi_b + dphi;
            let geoms = back_to_back(ka, (ta, phi_a), kb, (tb, phi_b), phi_b).unwrap();
            let m = sigma_multi(&mix, &geoms).unwrap().value;
            let p = sigma_multi(&psi, &geoms).unwrap().value;
            assert!((m - p).abs() < 1e-12);
        }
    }

    #[test]
    fn delta_phi_average_of_two_photon_probability_part() {
        let psi = bell_rho(BellKind::PsiPlus);
        let n = 256;
        let mut acc = 0.0;
        for i in 0..n {
            let dphi = 2.0 * PI * (i as f64) / (n as f64);
            acc += probability_part_two(&psi, 1.0, 1.2, dphi, 1.0, 1.4, 0.0, 0.0).unwrap();
        }
        assert!((acc / n as f64 - 0.25).abs() < 1e-10);
    }

    #[test]
    fn visibility_bounds_and_trend() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..2000 {
            let k = rng.gen_range(1e-3..100.0);
            let th = rng.gen_range(0.0..PI);
            let v = visibility(k, th);
            assert!((0.0..=1.0).contains(&v), "v = {v} at k = {k}");
        }
        // Fig. 2a trend: the best attainable visibility decreases with energy.
        let ks = [0.1, 0.5, 1.0, 2.0, 3.0, 5.0];
        let maxima: Vec<f64> = ks.iter().map(|&k| max_visibility(k).1).collect();
        for w in maxima.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
    }

    #[test]
    fn f32_channel_instantiation() {
        let v = visibility(1.0f32, 81.67f32.to_radians());
        assert!((v - 0.69).abs() < 0.01);
        let _ = cim(0.5f32);
    }
}
