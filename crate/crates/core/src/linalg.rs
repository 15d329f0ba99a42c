//! Dense complex matrices sized for 2-, 4- and 8-dimensional polarization
//! spaces, plus the few decompositions the rest of the crate needs.
//!
//! The eigensolver is a cyclic Jacobi iteration for Hermitian matrices. At
//! dimension 8 and below it converges in a handful of sweeps and keeps the
//! crate free of LAPACK-style dependencies.

use crate::error::{Error, Result};
use crate::scalar::{cre, czero, real, Cx, Real};
use num_complex::Complex;
use std::ops::{Index, IndexMut};

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Cx<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![czero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Build from row slices; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Cx<T>>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Self { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in mul");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == czero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a + b)
            .collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a - b)
            .collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn scaled(&self, s: Cx<T>) -> Self {
        let data = self.data.iter().map(|a| a * s).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        let data = self.data.iter().map(|a| a.conj()).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn trace(&self) -> Cx<T> {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).fold(czero(), |a, b| a + b)
    }

    /// Kronecker product; dimensions multiply.
    pub fn tensor(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out[(i * rhs.rows + k, j * rhs.cols + l)] = a * rhs[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Largest entrywise absolute difference to `rhs`.
    pub fn max_abs_diff(&self, rhs: &Self) -> T {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// Largest absolute deviation of `M - M†`.
    pub fn hermitian_deviation(&self) -> T {
        assert!(self.is_square());
        let mut dev = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                dev = dev.max(d);
            }
        }
        dev
    }

    /// `Tr(self · rhs)` without forming the product.
    pub fn trace_product(&self, rhs: &Self) -> Cx<T> {
        assert_eq!(self.cols, rhs.rows);
        assert_eq!(self.rows, rhs.cols);
        let mut acc = czero();
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc = acc + self[(i, k)] * rhs[(k, i)];
            }
        }
        acc
    }

    /// Eigenvalues of a Hermitian matrix, descending.
    pub fn eigvals_hermitian(&self) -> Result<Vec<T>> {
        Ok(self.eigh()?.0)
    }

    /// Full spectral decomposition of a Hermitian matrix.
    ///
    /// Returns eigenvalues in descending order and the unitary whose columns
    /// are the matching eigenvectors.
    pub fn eigh(&self) -> Result<(Vec<T>, ComplexMatrix<T>)> {
        if !self.is_square() {
            return Err(Error::BadDim { expected: self.rows, got: self.cols });
        }
        let dev = self.hermitian_deviation();
        if dev > T::tol_psd() {
            return Err(Error::NotHermitian {
                deviation: dev.to_f64().unwrap_or(f64::NAN),
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        // The sweeps assume exact Hermiticity; symmetrize first.
        for i in 0..n {
            let d = a[(i, i)];
            a[(i, i)] = cre(d.re);
            for j in (i + 1)..n {
                let m = (a[(i, j)] + a[(j, i)].conj()) * real::<T>(0.5);
                a[(i, j)] = m;
                a[(j, i)] = m.conj();
            }
        }
        let mut q = ComplexMatrix::identity(n);
        let scale = (0..n)
            .map(|i| a[(i, i)].re.abs())
            .fold(T::zero(), T::max)
            .max(off_norm(&a))
            .max(T::one());
        let stop = scale * T::epsilon() * real::<T>(1e2);
        for _sweep in 0..60 {
            if off_norm(&a) <= stop {
                break;
            }
            for p in 0..n {
                for r in (p + 1)..n {
                    jacobi_rotate(&mut a, &mut q, p, r);
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        let vals: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
        order.sort_by(|&i, &j| vals[j].partial_cmp(&vals[i]).unwrap());
        let sorted: Vec<T> = order.iter().map(|&i| vals[i]).collect();
        let mut vecs = ComplexMatrix::zeros(n, n);
        for (new_col, &old_col) in order.iter().enumerate() {
            for r in 0..n {
                vecs[(r, new_col)] = q[(r, old_col)];
            }
        }
        Ok((sorted, vecs))
    }
}

fn off_norm<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s = s + a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One complex Jacobi rotation zeroing the (p, q) entry of Hermitian `a`.
///
/// The rotation G = [[c, -s̄], [s, c]] on the (p, q) plane (c real) is applied
/// as A <- G†AG and accumulated into the eigenvector carrier `q_acc`.
fn jacobi_rotate<T: Real>(a: &mut ComplexMatrix<T>, q_acc: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let beta = apq.norm();
    if beta <= T::min_positive_value() {
        a[(p, q)] = czero();
        a[(q, p)] = czero();
        return;
    }
    let phase = apq / cre(beta);
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (real::<T>(2.0) * beta);
    let t = if tau >= T::zero() {
        -T::one() / (tau + (T::one() + tau * tau).sqrt())
    } else {
        T::one() / (-tau + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = phase.conj() * (t * c);
    let n = a.rows();
    // Columns: col_p <- c col_p + s col_q; col_q <- c col_q - s̄ col_p.
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * cre(c) + aiq * s;
        a[(i, q)] = aiq * cre(c) - aip * s.conj();
    }
    // Rows: row_p <- c row_p + s̄ row_q; row_q <- c row_q - s row_p.
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = apj * cre(c) + aqj * s.conj();
        a[(q, j)] = aqj * cre(c) - apj * s;
    }
    a[(p, q)] = czero();
    a[(q, p)] = czero();
    a[(p, p)] = cre(a[(p, p)].re);
    a[(q, q)] = cre(a[(q, q)].re);
    for i in 0..n {
        let qip = q_acc[(i, p)];
        let qiq = q_acc[(i, q)];
        q_acc[(i, p)] = qip * cre(c) + qiq * s;
        q_acc[(i, q)] = qiq * cre(c) - qip * s.conj();
    }
}

/// Transpose one tensor factor of a 4x4 operator on a 2x2 bipartite space.
///
/// `subsystem` 0 transposes the first factor, 1 the second. Hermiticity is
/// preserved.
pub fn partial_transpose<T: Real>(m: &ComplexMatrix<T>, subsystem: usize) -> Result<ComplexMatrix<T>> {
    if m.rows() != 4 || m.cols() != 4 {
        return Err(Error::BadDim { expected: 4, got: m.rows().max(m.cols()) });
    }
    if subsystem > 1 {
        return Err(Error::DimMismatch(format!(
            "subsystem index must be 0 or 1, got {subsystem}"
        )));
    }
    let mut out = ComplexMatrix::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    let (row, col) = (2 * a + b, 2 * c + d);
                    let (srow, scol) = if subsystem == 0 {
                        (2 * c + b, 2 * a + d)
                    } else {
                        (2 * a + d, 2 * c + b)
                    };
                    out[(row, col)] = m[(srow, scol)];
                }
            }
        }
    }
    Ok(out)
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Cx<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Cx<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx<T> {
        &mut self.data[i * self.cols + j]
    }
}

/// 2x2 matrix from entries in row-major order.
pub fn mat2<T: Real>(a: Cx<T>, b: Cx<T>, c: Cx<T>, d: Cx<T>) -> ComplexMatrix<T> {
    ComplexMatrix::from_rows(&[vec![a, b], vec![c, d]])
}

/// Pauli matrices in the {H, V} ordering; index 0 is the identity.
pub fn pauli<T: Real>(k: usize) -> ComplexMatrix<T> {
    let o = T::one();
    let z = T::zero();
    match k {
        0 => ComplexMatrix::identity(2),
        1 => mat2(czero(), cre(o), cre(o), czero()),
        2 => mat2(czero(), Complex::new(z, -o), Complex::new(z, o), czero()),
        3 => mat2(cre(o), czero(), czero(), cre(-o)),
        _ => panic!("pauli index out of range"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cim, cone};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix<f64> {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = cre(rng.gen_range(-2.0..2.0));
            for j in (i + 1)..n {
                let e = Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m[(i, j)] = e;
                m[(j, i)] = e.conj();
            }
        }
        m
    }

    #[test]
    fn tensor_identities() {
        let i2 = ComplexMatrix::<f64>::identity(2);
        let i4 = ComplexMatrix::<f64>::identity(4);
        assert_eq!(i2.tensor(&i2), i4);

        let sz = pauli::<f64>(3);
        let t = sz.tensor(&i2);
        for (k, expect) in [(0, 1.0), (1, 1.0), (2, -1.0), (3, -1.0)] {
            assert_eq!(t[(k, k)], cre(expect));
        }

        // |H><H| tensor |V><V| projects onto |HV>.
        let ph = mat2(cone::<f64>(), czero(), czero(), czero());
        let pv = mat2(czero(), czero(), czero(), cone::<f64>());
        let p = ph.tensor(&pv);
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == 1 && j == 1 { 1.0 } else { 0.0 };
                assert!((p[(i, j)] - cre(expect)).norm() == 0.0);
            }
        }
    }

    #[test]
    fn eig_diagonal_sorted() {
        let mut m = ComplexMatrix::<f64>::zeros(3, 3);
        m[(0, 0)] = cre(3.0);
        m[(1, 1)] = cre(1.0);
        m[(2, 2)] = cre(2.0);
        let vals = m.eigvals_hermitian().unwrap();
        assert_eq!(vals, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn eig_reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2usize, 4, 8] {
            for _ in 0..20 {
                let m = random_hermitian(n, &mut rng);
                let (vals, vecs) = m.eigh().unwrap();
                let mut lambda = ComplexMatrix::zeros(n, n);
                for i in 0..n {
                    lambda[(i, i)] = cre(vals[i]);
                }
                let rec = vecs.mul(&lambda).mul(&vecs.adjoint());
                assert!(rec.max_abs_diff(&m) < 1e-10, "n={n}");
                let unit = vecs.adjoint().mul(&vecs);
                assert!(unit.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-12);
                let sum: f64 = vals.iter().sum();
                assert!((sum - m.trace().re).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = mat2(cone::<f64>(), cre(0.5), cre(0.1), cone());
        assert!(matches!(m.eigvals_hermitian(), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn partial_transpose_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let m = random_hermitian(4, &mut rng);
            for sub in [0, 1] {
                let once = partial_transpose(&m, sub).unwrap();
                let twice = partial_transpose(&once, sub).unwrap();
                assert!(twice.max_abs_diff(&m) == 0.0);
                assert!(once.hermitian_deviation() < 1e-14);
            }
        }
    }

    #[test]
    fn f32_instantiation_works() {
        let m = mat2(cone::<f32>(), cim(0.5f32), cim(-0.5f32), cone());
        let vals = m.eigvals_hermitian().unwrap();
        assert!((vals[0] - 1.5).abs() < 1e-5);
        assert!((vals[1] - 0.5).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn tensor_is_associative(seed in 0u64..500) {
            // Dyadic entries keep every product exact, so the two association
            // orders must agree with zero error.
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut dyadic = |n: usize| {
                let mut m = ComplexMatrix::<f64>::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        m[(i, j)] = Complex::new(
                            rng.gen_range(-32i32..=32) as f64 / 16.0,
                            rng.gen_range(-32i32..=32) as f64 / 16.0,
                        );
                    }
                }
                m
            };
            let a = dyadic(2);
            let b = dyadic(2);
            let c = dyadic(2);
            let left = a.tensor(&b).tensor(&c);
            let right = a.tensor(&b.tensor(&c));
            prop_assert!(left.max_abs_diff(&right) == 0.0);
        }

        #[test]
        fn eig_trace_sum(seed in 0u64..200) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_hermitian(4, &mut rng);
            let vals = m.eigvals_hermitian().unwrap();
            let sum: f64 = vals.iter().sum();
            prop_assert!((sum - m.trace().re).abs() < 1e-10);
        }
    }
}
