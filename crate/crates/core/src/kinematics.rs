//! Photon directions, polarization three-vectors, scattering angles and the
//! four Compton polarization amplitudes in the linear basis.
//!
//! Conventions: the circular vector for helicity λ along direction (θ, φ) is
//!   ε(k̂, λ) = (1/√2) (−λ cosθ cosφ + i sinφ, −λ cosθ sinφ − i cosφ, λ sinθ),
//! the overall phase ξ is fixed to zero, and the linear pair is
//!   ε_H = (ε(+1) − ε(−1))/√2 = −(cosθ cosφ, cosθ sinφ, −sinθ),
//!   ε_V = (ε(+1) + ε(−1))/√2 = −i (−sinφ, cosφ, 0).
//! For the scattered photon the V axis carries an extra sign so that the
//! in-plane transition V→V′ equals −1; summed-over outgoing polarizations are
//! insensitive to that row phase.

use crate::error::{Error, Result};
use crate::scalar::{cim, cre, czero, real, Cx, Real};
use num_complex::Complex;

/// Propagation direction in spherical coordinates, θ ∈ [0, π], φ ∈ [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction<T> {
    theta: T,
    phi: T,
}

impl<T: Real> Direction<T> {
    pub fn new(theta: T, phi: T) -> Result<Self> {
        if !(theta >= T::zero() && theta <= T::PI()) || !theta.is_finite() {
            return Err(Error::BadDirection(format!("polar angle {theta} outside [0, pi]")));
        }
        if !phi.is_finite() {
            return Err(Error::BadDirection("azimuth not finite".into()));
        }
        let tau = real::<T>(2.0) * T::PI();
        let mut p = phi % tau;
        if p < T::zero() {
            p += tau;
        }
        Ok(Self { theta, phi: p })
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn phi(&self) -> T {
        self.phi
    }

    pub fn unit_vector(&self) -> [T; 3] {
        let (st, ct) = (self.theta.sin(), self.theta.cos());
        let (sp, cp) = (self.phi.sin(), self.phi.cos());
        [st * cp, st * sp, ct]
    }
}

/// Complex transverse polarization three-vector of unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct PolVector<T> {
    components: [Cx<T>; 3],
}

impl<T: Real> PolVector<T> {
    pub fn components(&self) -> &[Cx<T>; 3] {
        &self.components
    }

    /// Conjugate-linear inner product <self, other> = Σ self_i* other_i.
    pub fn inner(&self, other: &Self) -> Cx<T> {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.conj() * b)
            .fold(czero(), |acc, x| acc + x)
    }

    pub fn norm(&self) -> T {
        self.components
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<T>()
            .sqrt()
    }

    /// k̂ · ε against a real direction vector.
    pub fn dot_direction(&self, dir: &Direction<T>) -> Cx<T> {
        let k = dir.unit_vector();
        self.components
            .iter()
            .zip(&k)
            .map(|(c, x)| c * cre(*x))
            .fold(czero(), |acc, v| acc + v)
    }

    pub fn negated(&self) -> Self {
        let c = self.components;
        Self { components: [-c[0], -c[1], -c[2]] }
    }
}

/// One Compton vertex: incoming energy in units of the electron rest energy
/// (511 keV ≡ 1), incoming and outgoing directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterGeometry<T> {
    pub k_in: T,
    pub dir_in: Direction<T>,
    pub dir_out: Direction<T>,
}

impl<T: Real> ScatterGeometry<T> {
    pub fn new(k_in: T, dir_in: Direction<T>, dir_out: Direction<T>) -> Result<Self> {
        if !(k_in > T::zero()) {
            return Err(Error::BadConfig(format!("incoming energy {k_in} must be positive")));
        }
        Ok(Self { k_in, dir_in, dir_out })
    }
}

/// Circular polarization vector for helicity `lambda` ∈ {+1, −1}.
///
/// Satisfies i k̂ × ε = λ ε and k̂ · ε = 0.
pub fn pol_vector<T: Real>(dir: &Direction<T>, lambda: i32) -> Result<PolVector<T>> {
    if lambda != 1 && lambda != -1 {
        return Err(Error::BadLambda(lambda));
    }
    let l = real::<T>(lambda as f64);
    let (st, ct) = (dir.theta.sin(), dir.theta.cos());
    let (sp, cp) = (dir.phi.sin(), dir.phi.cos());
    let inv_sqrt2 = T::one() / real::<T>(2.0).sqrt();
    let x = Complex::new(-l * ct * cp, sp) * inv_sqrt2;
    let y = Complex::new(-l * ct * sp, -cp) * inv_sqrt2;
    let z = cre(l * st * inv_sqrt2);
    Ok(PolVector { components: [x, y, z] })
}

/// The linear pair (ε_H, ε_V); ε_V has zero z-component for every direction.
pub fn linear_pol_vectors<T: Real>(dir: &Direction<T>) -> (PolVector<T>, PolVector<T>) {
    let (st, ct) = (dir.theta.sin(), dir.theta.cos());
    let (sp, cp) = (dir.phi.sin(), dir.phi.cos());
    let h = PolVector {
        components: [cre(-ct * cp), cre(-ct * sp), cre(st)],
    };
    let v = PolVector {
        components: [cim(sp), cim(-cp), czero()],
    };
    (h, v)
}

/// Compton scattering angle: cos Θ̃ = k̂_in · k̂_out, clamped into [−1, 1]
/// before the arccosine to guard collinear rounding.
pub fn scattering_angle<T: Real>(g: &ScatterGeometry<T>) -> T {
    let ti = g.dir_in.theta;
    let to = g.dir_out.theta;
    let dphi = g.dir_in.phi - g.dir_out.phi;
    let c = to.cos() * ti.cos() + dphi.cos() * to.sin() * ti.sin();
    c.min(T::one()).max(-T::one()).acos()
}

/// The four polarization transition amplitudes in the linear basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitudes<T> {
    pub f_hh: Cx<T>,
    pub f_hv: Cx<T>,
    pub f_vh: Cx<T>,
    pub f_vv: Cx<T>,
}

/// Amplitudes f_XY = ε′_X* · ε_Y for incoming (θ, φ) and outgoing (θ′, φ′):
///   f_HH = cosθ′ cosθ cos(φ−φ′) + sinθ′ sinθ,
///   f_VH = i cosθ sin(φ−φ′),
///   f_HV = −i cosθ′ sin(φ−φ′),
///   f_VV = −cos(φ−φ′).
/// In the scattering plane (φ = φ′) only f_HH = cos Θ̃ and f_VV = −1 survive.
pub fn amplitudes<T: Real>(g: &ScatterGeometry<T>) -> Amplitudes<T> {
    let ct = g.dir_in.theta.cos();
    let st = g.dir_in.theta.sin();
    let cto = g.dir_out.theta.cos();
    let sto = g.dir_out.theta.sin();
    let d = g.dir_in.phi - g.dir_out.phi;
    let (sd, cd) = (d.sin(), d.cos());
    Amplitudes {
        f_hh: cre(cto * ct * cd + sto * st),
        f_vh: cim(ct * sd),
        f_hv: cim(-cto * sd),
        f_vv: cre(-cd),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dir(theta: f64, phi: f64) -> Direction<f64> {
        Direction::new(theta, phi).unwrap()
    }

    fn random_dir(rng: &mut ChaCha8Rng) -> Direction<f64> {
        dir(
            rng.gen_range(0.0..std::f64::consts::PI),
            rng.gen_range(0.0..2.0 * std::f64::consts::PI),
        )
    }

    fn cross(k: [f64; 3], e: &[Cx<f64>; 3]) -> [Cx<f64>; 3] {
        [
            e[2] * k[1] - e[1] * k[2],
            e[0] * k[2] - e[2] * k[0],
            e[1] * k[0] - e[0] * k[1],
        ]
    }

    #[test]
    fn direction_normalizes_azimuth() {
        let d = dir(0.5, -1.0);
        assert!(d.phi() > 0.0 && d.phi() < 2.0 * std::f64::consts::PI);
        assert!(Direction::new(-0.1, 0.0).is_err());
        assert!(Direction::new(3.2, 0.0).is_err());
    }

    #[test]
    fn pol_vector_along_z() {
        let e = pol_vector(&dir(0.0, 0.0), 1).unwrap();
        let s = 1.0 / 2f64.sqrt();
        assert!((e.components()[0] - cre(-s)).norm() < 1e-15);
        assert!((e.components()[1] - cim(-s)).norm() < 1e-15);
        assert!(e.components()[2].norm() < 1e-15);
        assert!(matches!(pol_vector(&dir(0.0, 0.0), 2), Err(Error::BadLambda(2))));
    }

    #[test]
    fn pol_vector_equatorial_substitution() {
        // Direct substitution at (θ, φ) = (π/2, 0), λ = +1.
        let e = pol_vector(&dir(std::f64::consts::FRAC_PI_2, 0.0), 1).unwrap();
        let s = 1.0 / 2f64.sqrt();
        assert!((e.components()[0]).norm() < 1e-15);
        assert!((e.components()[1] - cim(-s)).norm() < 1e-15);
        assert!((e.components()[2] - cre(s)).norm() < 1e-15);
    }

    #[test]
    fn helicity_vectors_orthogonal_transverse_eigen() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..500 {
            let d = random_dir(&mut rng);
            let ep = pol_vector(&d, 1).unwrap();
            let em = pol_vector(&d, -1).unwrap();
            assert!(ep.inner(&em).norm() < 1e-12);
            assert!((ep.norm() - 1.0).abs() < 1e-12);
            for (e, lambda) in [(&ep, 1.0), (&em, -1.0)] {
                assert!(e.dot_direction(&d).norm() < 1e-12);
                let ik_cross = cross(d.unit_vector(), e.components());
                for (i, c) in ik_cross.iter().enumerate() {
                    let lhs = Complex::new(0.0, 1.0) * c;
                    let rhs = e.components()[i] * lambda;
                    assert!((lhs - rhs).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn linear_vectors_structure() {
        let (h, v) = linear_pol_vectors(&dir(0.0, 0.0));
        assert!((h.components()[0] - cre(-1.0)).norm() < 1e-15);
        assert!(h.components()[1].norm() < 1e-15);
        assert!((v.components()[1] - cim(-1.0)).norm() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let inv_sqrt2 = 1.0 / 2f64.sqrt();
        for _ in 0..200 {
            let d = random_dir(&mut rng);
            let (h, v) = linear_pol_vectors(&d);
            // ε_V is confined to the x-y plane for every direction.
            assert!(v.components()[2].norm() == 0.0);
            assert!((h.norm() - 1.0).abs() < 1e-12);
            assert!((v.norm() - 1.0).abs() < 1e-12);
            assert!(h.dot_direction(&d).norm() < 1e-12);
            assert!(v.dot_direction(&d).norm() < 1e-12);
            // ε_H = (ε(+1) − ε(−1))/√2 and ε_V = (ε(+1) + ε(−1))/√2 at ξ = 0.
            let ep = pol_vector(&d, 1).unwrap();
            let em = pol_vector(&d, -1).unwrap();
            for i in 0..3 {
                let diff = (ep.components()[i] - em.components()[i]) * inv_sqrt2;
                let sum = (ep.components()[i] + em.components()[i]) * inv_sqrt2;
                assert!((diff - h.components()[i]).norm() < 1e-12);
                assert!((sum - v.components()[i]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn scattering_angle_cases() {
        let g = ScatterGeometry::new(1.0, dir(0.0, 0.3), dir(std::f64::consts::FRAC_PI_2, 1.0)).unwrap();
        assert!((scattering_angle(&g) - std::f64::consts::FRAC_PI_2).abs() < 1e-14);

        let d = dir(1.1, 2.5);
        let g = ScatterGeometry::new(1.0, d, d).unwrap();
        assert!(scattering_angle(&g).abs() < 1e-7);

        // Vector oracle: angle from the explicit unit vectors.
        let g = ScatterGeometry::new(1.0, dir(std::f64::consts::FRAC_PI_3, 0.2), dir(1.1, 2.5)).unwrap();
        let a = g.dir_in.unit_vector();
        let b = g.dir_out.unit_vector();
        let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        assert!((scattering_angle(&g) - dot.acos()).abs() < 1e-13);
    }

    #[test]
    fn amplitudes_scattering_plane() {
        let g = ScatterGeometry::new(1.0, dir(0.4, 1.3), dir(1.5, 1.3)).unwrap();
        let f = amplitudes(&g);
        let theta = scattering_angle(&g);
        assert!((f.f_hh - cre(theta.cos())).norm() < 1e-14);
        assert!((f.f_vv - cre(-1.0)).norm() < 1e-14);
        assert!(f.f_hv.norm() < 1e-14);
        assert!(f.f_vh.norm() < 1e-14);

        let d = dir(0.7, 0.1);
        let g = ScatterGeometry::new(2.0, d, d).unwrap();
        let f = amplitudes(&g);
        assert!((f.f_hh - cre(1.0)).norm() < 1e-14);
        assert!((f.f_vv - cre(-1.0)).norm() < 1e-14);
    }

    #[test]
    fn amplitudes_match_polarization_dot_products() {
        // Oracle: f_XY = <ε′_X, ε_Y> with the outgoing V axis negated, the
        // convention that makes V→V′ = −1 in the scattering plane.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..500 {
            let din = random_dir(&mut rng);
            let dout = random_dir(&mut rng);
            let g = ScatterGeometry::new(1.0, din, dout).unwrap();
            let f = amplitudes(&g);
            let (h_in, v_in) = linear_pol_vectors(&din);
            let (h_out, v_out) = linear_pol_vectors(&dout);
            let v_out = v_out.negated();
            assert!((f.f_hh - h_out.inner(&h_in)).norm() < 1e-12);
            assert!((f.f_hv - h_out.inner(&v_in)).norm() < 1e-12);
            assert!((f.f_vh - v_out.inner(&h_in)).norm() < 1e-12);
            assert!((f.f_vv - v_out.inner(&v_in)).norm() < 1e-12);
        }
    }

    #[test]
    fn f_hh_square_root_form_magnitude() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..500 {
            let din = random_dir(&mut rng);
            let dout = random_dir(&mut rng);
            let g = ScatterGeometry::new(1.0, din, dout).unwrap();
            let f = amplitudes(&g);
            let theta = scattering_angle(&g);
            let sd = (din.phi() - dout.phi()).sin();
            let under = theta.cos().powi(2)
                - 0.5 * ((2.0 * din.theta()).cos() + (2.0 * dout.theta()).cos()) * sd * sd;
            assert!(under >= -1e-12);
            assert!((under.max(0.0).sqrt() - f.f_hh.norm()).abs() < 1e-10);
        }
    }

    #[test]
    fn f32_kinematics() {
        let d = Direction::<f32>::new(0.0, 0.0).unwrap();
        let e = pol_vector(&d, 1).unwrap();
        assert!((e.norm() - 1.0).abs() < 1e-6);
    }
}
