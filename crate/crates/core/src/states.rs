//! Factories for the polarization states used throughout: Bell states in the
//! linear, circular and diagonal bases, isotropic mixtures, the reduced
//! two-photon state of the three-photon decay, Bose/parity eigenstates, and
//! the concurrence measure.
//!
//! Basis conventions in the computational {H, V} ordering:
//!   |R⟩ = (|H⟩ + i|V⟩)/√2,  |L⟩ = (−|H⟩ + i|V⟩)/√2,
//!   |+45⟩ = (|H⟩ + |V⟩)/√2, |−45⟩ = (|H⟩ − |V⟩)/√2.

use crate::error::{Error, Result};
use crate::linalg::{pauli, ComplexMatrix};
use crate::quantum::{DensityMatrix, PureState};
use crate::scalar::{cim, cone, cre, czero, real, Cx, Real};

/// The four Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellKind {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

/// Single-qubit basis a Bell state is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellBasis {
    Lin,
    Circ,
    Diag,
}

/// A Bell state label: kind plus defining basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BellLabel {
    pub kind: BellKind,
    pub basis: BellBasis,
}

/// The pair of single-qubit basis vectors for a [`BellBasis`].
pub fn basis_kets<T: Real>(basis: BellBasis) -> (PureState<T>, PureState<T>) {
    let s = T::one() / real::<T>(2.0).sqrt();
    let (a, b) = match basis {
        BellBasis::Lin => (vec![cone(), czero()], vec![czero(), cone()]),
        BellBasis::Circ => (
            vec![cre(s), cim(s)],
            vec![cre(-s), cim(s)],
        ),
        BellBasis::Diag => (vec![cre(s), cre(s)], vec![cre(s), cre(-s)]),
    };
    (PureState::new(a).unwrap(), PureState::new(b).unwrap())
}

/// Bell state in the computational {H, V} ⊗ {H, V} representation.
pub fn bell<T: Real>(label: &BellLabel) -> PureState<T> {
    let (e1, e2) = basis_kets::<T>(label.basis);
    let s = real::<T>(0.5).sqrt();
    let (first, second, sign) = match label.kind {
        BellKind::PsiPlus => (e1.tensor(&e2), e2.tensor(&e1), T::one()),
        BellKind::PsiMinus => (e1.tensor(&e2), e2.tensor(&e1), -T::one()),
        BellKind::PhiPlus => (e1.tensor(&e1), e2.tensor(&e2), T::one()),
        BellKind::PhiMinus => (e1.tensor(&e1), e2.tensor(&e2), -T::one()),
    };
    let amps: Vec<Cx<T>> = first
        .amplitudes()
        .iter()
        .zip(second.amplitudes())
        .map(|(a, b)| (a + b * cre(sign)) * cre(s))
        .collect();
    PureState::new(amps).expect("bell states are normalized")
}

/// Isotropic state (1 − p)/4 · I₄ + p · |ψ⁺⟩⟨ψ⁺|; entangled iff p > 1/3.
pub fn isotropic<T: Real>(p: T) -> Result<DensityMatrix<T>> {
    if !(T::zero()..=T::one()).contains(&p) {
        return Err(Error::BadWeight(p.to_f64().unwrap_or(f64::NAN)));
    }
    let psi = bell::<T>(&BellLabel { kind: BellKind::PsiPlus, basis: BellBasis::Lin });
    let m = ComplexMatrix::identity(4)
        .scaled(cre((T::one() - p) * real::<T>(0.25)))
        .add(&psi.projector().scaled(cre(p)));
    DensityMatrix::new(m)
}

/// Reduced two-photon state of the symmetric three-photon decay for a given
/// spin-mixing weight p, together with its closed-form decomposition data.
#[derive(Debug, Clone)]
pub struct OrthoReduced<T> {
    pub p: T,
    pub rho: DensityMatrix<T>,
    pub p_plus: T,
    pub p_minus: T,
    /// |HH⟩ coefficients of the two unnormalized ψ̃± components.
    pub c_plus: T,
    pub c_minus: T,
}

/// ρ_p = (1/6)|ψ⁺⟩⟨ψ⁺| + p₊|ψ̃₊⟩⟨ψ̃₊| + p₋|ψ̃₋⟩⟨ψ̃₋| with
/// p± = (5 ± √(25 + 64 p(p−1)))/12 and ψ̃± ∝ c±|HH⟩ + |VV⟩,
/// c± = (8(p − 1/2) ± √(25 + 64 p(p−1)))/3.
pub fn ortho_reduced<T: Real>(p: T) -> Result<OrthoReduced<T>> {
    if !(T::zero()..=T::one()).contains(&p) {
        return Err(Error::BadWeight(p.to_f64().unwrap_or(f64::NAN)));
    }
    let disc = (real::<T>(25.0) + real::<T>(64.0) * p * (p - T::one())).sqrt();
    let twelfth = real::<T>(12.0).recip();
    let p_plus = (real::<T>(5.0) + disc) * twelfth;
    let p_minus = (real::<T>(5.0) - disc) * twelfth;
    let third = real::<T>(3.0).recip();
    let eight = real::<T>(8.0);
    let half = real::<T>(0.5);
    let c_plus = third * (eight * (p - half) + disc);
    let c_minus = third * (eight * (p - half) - disc);
    let tilde = |c: T| -> PureState<T> {
        PureState::normalized(vec![cre(c), czero(), czero(), cone()]).unwrap()
    };
    let psi = bell::<T>(&BellLabel { kind: BellKind::PsiPlus, basis: BellBasis::Lin });
    let m = psi
        .projector()
        .scaled(cre(real::<T>(6.0).recip()))
        .add(&tilde(c_plus).projector().scaled(cre(p_plus)))
        .add(&tilde(c_minus).projector().scaled(cre(p_minus)));
    Ok(OrthoReduced {
        p,
        rho: DensityMatrix::new(m)?,
        p_plus,
        p_minus,
        c_plus,
        c_minus,
    })
}

/// Two-qubit concurrence from the spin-flipped spectrum:
/// C = max(0, λ₁ − λ₂ − λ₃ − λ₄) where λᵢ are the square roots of the
/// eigenvalues of ρ (σy ⊗ σy) ρ* (σy ⊗ σy), descending.
///
/// The spin flip is σy ⊗ σy conjugation combined with complex conjugation in
/// the computational {H, V} ⊗ {H, V} basis; with σy = [[0, −i], [i, 0]] the
/// flipped ψ⁺ equals +ψ⁺, which fixes the sign convention.
pub fn concurrence<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    if rho.dim() != 4 {
        return Err(Error::BadDim { expected: 4, got: rho.dim() });
    }
    let yy = pauli::<T>(2).tensor(&pauli(2));
    let flipped = yy.mul(&rho.matrix().conj()).mul(&yy);
    // Eigenvalues of ρ·ρ̃ via the Hermitian product √ρ ρ̃ √ρ.
    let (vals, vecs) = rho.matrix().eigh()?;
    let mut sqrt_rho = ComplexMatrix::zeros(4, 4);
    for i in 0..4 {
        let s = vals[i].max(T::zero()).sqrt();
        for r in 0..4 {
            for c in 0..4 {
                sqrt_rho[(r, c)] = sqrt_rho[(r, c)] + vecs[(r, i)] * vecs[(c, i)].conj() * cre(s);
            }
        }
    }
    let h = sqrt_rho.mul(&flipped).mul(&sqrt_rho);
    let mu = h.eigvals_hermitian()?;
    // Zero modes of the flipped product come out as O(eps) noise; taking the
    // square root would blow that up to ~1e-8, so clamp them first.
    let floor = mu
        .iter()
        .fold(T::zero(), |a, &b| a.max(b.abs()))
        .max(T::one())
        * T::epsilon()
        * real::<T>(500.0);
    let mut lambdas: Vec<T> = mu
        .into_iter()
        .map(|x| if x < floor { T::zero() } else { x.sqrt() })
        .collect();
    lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(c.max(T::zero()))
}

/// Bose-symmetric parity eigenstates of the two-photon polarization part in
/// the helicity labels of each photon's own frame: parity +1 ↦ |ψ⁺⟩_circ,
/// parity −1 ↦ |ψ⁻⟩_circ.
pub fn bose_parity_states<T: Real>() -> [(i8, PureState<T>); 2] {
    [
        (1, bell(&BellLabel { kind: BellKind::PsiPlus, basis: BellBasis::Circ })),
        (-1, bell(&BellLabel { kind: BellKind::PsiMinus, basis: BellBasis::Circ })),
    ]
}

/// Re-express photon b's polarization in photon a's frame. For a circular
/// ket of the counter-propagating photon the map is |λ⟩ ↦ −|−λ⟩, which in
/// the {H, V} representation is σ_z on the second slot.
pub fn to_common_frame<T: Real>(state: &PureState<T>) -> Result<PureState<T>> {
    if state.dim() != 4 {
        return Err(Error::BadDim { expected: 4, got: state.dim() });
    }
    let op = ComplexMatrix::identity(2).tensor(&pauli(3));
    PureState::new(state.applied(&op).amplitudes().to_vec())
}

/// Single-photon parity action on a circular-basis ket: 𝒫|λ⟩ = −|−λ⟩.
pub fn parity_flip<T: Real>(state: &PureState<T>) -> Result<PureState<T>> {
    if state.dim() != 2 {
        return Err(Error::BadDim { expected: 2, got: state.dim() });
    }
    PureState::new(state.applied(&pauli(3)).amplitudes().to_vec())
}

/// The separable computational basis {|HH⟩, |HV⟩, |VH⟩, |VV⟩}.
pub fn separable_basis<T: Real>() -> [PureState<T>; 4] {
    let mut out = Vec::with_capacity(4);
    for i in 0..4 {
        let mut amps = vec![czero(); 4];
        amps[i] = cone();
        out.push(PureState::new(amps).unwrap());
    }
    out.try_into().unwrap()
}

/// Single-qubit kets addressable in state specs.
pub fn single_ket<T: Real>(c: char) -> Result<PureState<T>> {
    let s = T::one() / real::<T>(2.0).sqrt();
    let amps = match c.to_ascii_uppercase() {
        'H' => vec![cone(), czero()],
        'V' => vec![czero(), cone()],
        'D' => vec![cre(s), cre(s)],
        'A' => vec![cre(s), cre(-s)],
        'R' => vec![cre(s), cim(s)],
        'L' => vec![cre(-s), cim(s)],
        other => {
            return Err(Error::BadState(format!("unknown polarization token `{other}`")))
        }
    };
    PureState::new(amps)
}

/// Parse the state-spec grammar used by the CLI:
///   `bell:psi+:lin`, `iso:0.5`, `ortho:0.5`, `prod:HV`, `prod:H`,
///   `mix:0.5*prod:HV+0.5*prod:VH`.
pub fn parse_state<T: Real>(spec: &str) -> Result<DensityMatrix<T>> {
    let bad = |msg: &str| Error::BadSpec(spec.to_string(), msg.to_string());
    let spec = spec.trim();
    let (head, rest) = spec
        .split_once(':')
        .ok_or_else(|| bad("expected `kind:...`"))?;
    match head {
        "bell" => {
            let (kind_s, basis_s) = rest
                .split_once(':')
                .ok_or_else(|| bad("expected `bell:<kind>:<basis>`"))?;
            let kind = match kind_s {
                "psi+" => BellKind::PsiPlus,
                "psi-" => BellKind::PsiMinus,
                "phi+" => BellKind::PhiPlus,
                "phi-" => BellKind::PhiMinus,
                _ => return Err(bad("bell kind must be psi+|psi-|phi+|phi-")),
            };
            let basis = match basis_s {
                "lin" => BellBasis::Lin,
                "circ" => BellBasis::Circ,
                "diag" => BellBasis::Diag,
                _ => return Err(bad("bell basis must be lin|circ|diag")),
            };
            Ok(DensityMatrix::from_pure(&bell(&BellLabel { kind, basis })))
        }
        "iso" => {
            let p: f64 = rest.parse().map_err(|_| bad("iso weight must be a number"))?;
            isotropic(real::<T>(p))
        }
        "ortho" => {
            let p: f64 = rest.parse().map_err(|_| bad("ortho weight must be a number"))?;
            Ok(ortho_reduced(real::<T>(p))?.rho)
        }
        "prod" => {
            let chars: Vec<char> = rest.chars().collect();
            match chars.len() {
                1 => Ok(DensityMatrix::from_pure(&single_ket(chars[0])?)),
                2 => {
                    let a = single_ket::<T>(chars[0])?;
                    let b = single_ket::<T>(chars[1])?;
                    Ok(DensityMatrix::from_pure(&a.tensor(&b)))
                }
                _ => Err(bad("prod takes one or two polarization tokens")),
            }
        }
        "mix" => {
            let mut terms = Vec::new();
            for part in split_mix_terms(rest) {
                let (w_s, inner) = part
                    .split_once('*')
                    .ok_or_else(|| bad("mix terms look like `<weight>*<spec>`"))?;
                let w: f64 = w_s.trim().parse().map_err(|_| bad("bad mix weight"))?;
                terms.push((real::<T>(w), parse_state::<T>(inner)?));
            }
            if terms.is_empty() {
                return Err(bad("empty mixture"));
            }
            DensityMatrix::mixture(&terms)
        }
        _ => Err(bad("kind must be bell|iso|ortho|prod|mix")),
    }
}

/// Split mixture terms on `+` separators that start a new `weight*spec` term,
/// leaving the `+` inside tokens like `psi+` alone.
fn split_mix_terms(s: &str) -> Vec<&str> {
    let bytes = s.as_bytes();
    let mut parts = Vec::new();
    let mut start = 0;
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'+' && i > start {
            let tail = &s[i + 1..];
            let looks_like_weight = tail
                .split('*')
                .next()
                .map(|w| !w.is_empty() && w.trim().parse::<f64>().is_ok())
                .unwrap_or(false)
                && tail.contains('*');
            if looks_like_weight {
                parts.push(&s[start..i]);
                start = i + 1;
            }
        }
    }
    parts.push(&s[start..]);
    parts
}
