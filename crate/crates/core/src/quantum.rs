//! Validated quantum-state primitives on 2^n-dimensional polarization spaces.

use crate::error::{Error, Result};
use crate::linalg::{partial_transpose, ComplexMatrix};
use crate::scalar::{cre, czero, real, Cx, Real};
use num_complex::Complex;

/// Trace-one positive Hermitian operator.
#[derive(Debug, Clone)]
pub struct DensityMatrix<T> {
    dim: usize,
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validate and wrap a candidate density matrix.
    ///
    /// Checks Hermiticity and unit trace against [`Real::tol_hermitian`] and
    /// positivity against the [`Real::tol_psd`] eigenvalue floor.
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        let dim = matrix.rows();
        if !matrix.is_square() || !matches!(dim, 2 | 4 | 8) {
            return Err(Error::BadDim { expected: 4, got: dim });
        }
        let dev = matrix.hermitian_deviation();
        if dev > T::tol_hermitian() {
            return Err(Error::NotHermitian {
                deviation: dev.to_f64().unwrap_or(f64::NAN),
            });
        }
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > T::tol_hermitian() || tr.im.abs() > T::tol_hermitian() {
            return Err(Error::BadState(format!("trace {} is not 1", tr.re)));
        }
        let eigs = matrix.eigvals_hermitian()?;
        if let Some(min) = eigs.last() {
            if *min < -T::tol_psd() {
                return Err(Error::BadState(format!(
                    "negative eigenvalue {min}"
                )));
            }
        }
        Ok(Self { dim, matrix })
    }

    pub fn from_pure(psi: &PureState<T>) -> Self {
        Self {
            dim: psi.dim(),
            matrix: psi.projector(),
        }
    }

    /// Convex mixture; weights must be nonnegative and sum to one.
    pub fn mixture(terms: &[(T, DensityMatrix<T>)]) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::BadState("empty mixture".into()));
        }
        let dim = terms[0].1.dim;
        let mut m = ComplexMatrix::zeros(dim, dim);
        let mut total = T::zero();
        for (w, rho) in terms {
            if *w < -T::tol_hermitian() {
                return Err(Error::BadWeight(w.to_f64().unwrap_or(f64::NAN)));
            }
            if rho.dim != dim {
                return Err(Error::DimMismatch("mixture terms differ in dimension".into()));
            }
            m = m.add(&rho.matrix.scaled(cre(*w)));
            total += *w;
        }
        if (total - T::one()).abs() > real::<T>(1e-9) {
            return Err(Error::BadWeight(total.to_f64().unwrap_or(f64::NAN)));
        }
        Self::new(m)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let m = ComplexMatrix::identity(dim).scaled(cre(T::one() / real::<T>(dim as f64)));
        Self { dim, matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> Cx<T> {
        self.matrix[(i, j)]
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<T> {
        self.matrix.eigvals_hermitian().expect("validated Hermitian")
    }

    /// U rho U†, revalidated cheaply by construction.
    pub fn conjugated_by(&self, u: &ComplexMatrix<T>) -> Self {
        let m = u.mul(&self.matrix).mul(&u.adjoint());
        Self { dim: self.dim, matrix: m }
    }

    /// Transpose of the chosen tensor factor (dim-4 states only).
    pub fn partial_transpose(&self, subsystem: usize) -> Result<ComplexMatrix<T>> {
        partial_transpose(&self.matrix, subsystem)
    }

    /// Tr(rho · op).
    pub fn expect(&self, op: &ComplexMatrix<T>) -> Cx<T> {
        self.matrix.trace_product(op)
    }

    /// Swap the two qubits of a dim-4 state: rho_ab -> rho_ba.
    pub fn swapped(&self) -> Result<Self> {
        if self.dim != 4 {
            return Err(Error::BadDim { expected: 4, got: self.dim });
        }
        let s = swap_gate();
        Ok(self.conjugated_by(&s))
    }
}

/// The two-qubit SWAP operator.
pub fn swap_gate<T: Real>() -> ComplexMatrix<T> {
    let mut s = ComplexMatrix::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            s[(2 * a + b, 2 * b + a)] = cre(T::one());
        }
    }
    s
}

/// Unit-norm state vector.
#[derive(Debug, Clone)]
pub struct PureState<T> {
    amplitudes: Vec<Cx<T>>,
}

impl<T: Real> PureState<T> {
    /// Validate a unit-norm amplitude vector.
    pub fn new(amplitudes: Vec<Cx<T>>) -> Result<Self> {
        let norm2: T = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - T::one()).abs() > T::tol_hermitian() {
            return Err(Error::BadState(format!("norm^2 {norm2} is not 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Normalize, then wrap.
    pub fn normalized(mut amplitudes: Vec<Cx<T>>) -> Result<Self> {
        let norm2: T = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm2 <= T::zero() {
            return Err(Error::BadState("zero vector".into()));
        }
        let inv = T::one() / norm2.sqrt();
        for a in &mut amplitudes {
            *a = *a * cre(inv);
        }
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Cx<T>] {
        &self.amplitudes
    }

    pub fn amplitude(&self, i: usize) -> Cx<T> {
        self.amplitudes[i]
    }

    /// <self|other>.
    pub fn inner(&self, other: &Self) -> Cx<T> {
        assert_eq!(self.dim(), other.dim());
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .fold(czero(), |acc, x| acc + x)
    }

    /// |self><self|.
    pub fn projector(&self) -> ComplexMatrix<T> {
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        m
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amps.push(a * b);
            }
        }
        Self { amplitudes: amps }
    }

    /// Apply a matrix (must be norm-preserving for the result to stay valid).
    pub fn applied(&self, u: &ComplexMatrix<T>) -> Self {
        assert_eq!(u.cols(), self.dim());
        let mut amps = vec![czero(); u.rows()];
        for (i, amp) in amps.iter_mut().enumerate() {
            for j in 0..u.cols() {
                *amp = *amp + u[(i, j)] * self.amplitudes[j];
            }
        }
        Self { amplitudes: amps }
    }

    /// Equality up to a global phase: both vectors are divided by their first
    /// amplitude of non-negligible magnitude before comparison.
    pub fn eq_up_to_phase(&self, other: &Self, tol: T) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let pick = |v: &Self| {
            v.amplitudes
                .iter()
                .find(|a| a.norm() > real::<T>(1e-6))
                .copied()
        };
        let (Some(pa), Some(pb)) = (pick(self), pick(other)) else {
            return false;
        };
        let (fa, fb) = (pa / cre(pa.norm()), pb / cre(pb.norm()));
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .all(|(a, b)| (a / fa - b / fb).norm() <= tol)
    }
}

/// Validated unitary matrix.
#[derive(Debug, Clone)]
pub struct Unitary<T> {
    matrix: ComplexMatrix<T>,
}

impl<T: Real> Unitary<T> {
    /// Checks U†U = I entrywise against [`Real::tol_unitary`].
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::BadDim { expected: matrix.rows(), got: matrix.cols() });
        }
        let id = ComplexMatrix::identity(matrix.rows());
        let dev = matrix.adjoint().mul(&matrix).max_abs_diff(&id);
        if dev > T::tol_unitary() {
            return Err(Error::NotUnitary {
                deviation: dev.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(n) }
    }

    /// Three-angle parameterization covering all of SU(2) up to phase:
    /// U(t, p, l) = [[cos(t/2), -e^{il} sin(t/2)],
    ///               [e^{ip} sin(t/2), e^{i(p+l)} cos(t/2)]].
    pub fn from_angles(theta: T, phi: T, lambda: T) -> Self {
        let half = theta * real::<T>(0.5);
        let (c, s) = (half.cos(), half.sin());
        let eip = Complex::from_polar(T::one(), phi);
        let eil = Complex::from_polar(T::one(), lambda);
        let m = crate::linalg::mat2(cre(c), -eil * s, eip * s, eip * eil * c);
        Self { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    /// Basis vector carried by column `l`.
    pub fn column(&self, l: usize) -> PureState<T> {
        let amps = (0..self.dim()).map(|i| self.matrix[(i, l)]).collect();
        PureState { amplitudes: amps }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self { matrix: self.matrix.mul(&rhs.matrix) }
    }

    pub fn conj(&self) -> Self {
        Self { matrix: self.matrix.conj() }
    }

    pub fn adjoint(&self) -> Self {
        Self { matrix: self.matrix.adjoint() }
    }

    pub fn tensor(&self, rhs: &Self) -> Self {
        Self { matrix: self.matrix.tensor(&rhs.matrix) }
    }

    /// Swap the two columns (relabel the measurement outcomes).
    pub fn columns_swapped(&self) -> Self {
        assert_eq!(self.dim(), 2);
        let m = &self.matrix;
        Self {
            matrix: crate::linalg::mat2(m[(0, 1)], m[(0, 0)], m[(1, 1)], m[(1, 0)]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cone;

    #[test]
    fn density_matrix_validation() {
        let id4 = ComplexMatrix::<f64>::identity(4).scaled(cre(0.25));
        let rho = DensityMatrix::new(id4).unwrap();
        assert_eq!(rho.dim(), 4);
        assert_eq!(rho.eigenvalues(), vec![0.25; 4]);

        // Wrong trace rejected.
        let bad = ComplexMatrix::<f64>::identity(4);
        assert!(DensityMatrix::new(bad).is_err());

        // Negative eigenvalue rejected.
        let mut neg = ComplexMatrix::<f64>::zeros(2, 2);
        neg[(0, 0)] = cre(1.5);
        neg[(1, 1)] = cre(-0.5);
        assert!(matches!(DensityMatrix::new(neg), Err(Error::BadState(_))));
    }

    #[test]
    fn pure_state_norm_checks() {
        assert!(PureState::new(vec![cone::<f64>(), czero()]).is_ok());
        assert!(PureState::new(vec![cone::<f64>(), cone()]).is_err());
        let s = PureState::normalized(vec![cone::<f64>(), cone()]).unwrap();
        assert!((s.inner(&s).re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn phase_alignment() {
        let a = PureState::normalized(vec![cone::<f64>(), cone()]).unwrap();
        let phase = Complex::from_polar(1.0, 0.83);
        let b = PureState::new(a.amplitudes().iter().map(|x| x * phase).collect()).unwrap();
        assert!(a.eq_up_to_phase(&b, 1e-12));
    }

    #[test]
    fn unitary_from_angles_is_unitary() {
        for (t, p, l) in [(0.3, 1.2, -0.4), (2.0, 0.0, 3.0), (1.5707, 2.2, 0.1)] {
            let u = Unitary::<f64>::from_angles(t, p, l);
            let dev = u
                .matrix()
                .adjoint()
                .mul(u.matrix())
                .max_abs_diff(&ComplexMatrix::identity(2));
            assert!(dev < 1e-14);
        }
        let m = crate::linalg::mat2(cone::<f64>(), cone(), czero(), cone());
        assert!(matches!(Unitary::new(m), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn swap_conjugation() {
        let hv = PureState::<f64>::new(vec![czero(), cone(), czero(), czero()]).unwrap();
        let rho = DensityMatrix::from_pure(&hv).swapped().unwrap();
        // |HV><HV| swapped is |VH><VH|.
        assert!((rho.entry(2, 2).re - 1.0).abs() < 1e-14);
    }
}
