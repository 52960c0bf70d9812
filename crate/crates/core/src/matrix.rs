//! Dense complex matrix kernels: Hermitian eigendecomposition, PSD square
//! root, commutators and the Hilbert–Schmidt inner product.
//!
//! Everything here is a pure function of its inputs. The eigensolver is the
//! only iterative kernel; every PSD check in the crate routes through it.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default tolerance for Hermiticity, PSD and trace checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative gap under which two eigenvalues are treated as one degenerate
/// cluster when canonicalizing eigenvectors.
const DEGENERACY_GAP: f64 = 1e-12;

/// A dense complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[Complex64]) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::BadShape { rows, cols, len: entries.len() });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, entries)))
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        let z: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_row_major(rows, cols, &z)
    }

    pub fn from_nalgebra(m: DMatrix<Complex64>) -> Result<Self> {
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(m))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self(DMatrix::from_fn(
            n,
            n,
            |r, c| {
                if r == c {
                    Complex64::new(diag[r], 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            },
        ))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.0[(r, c)]
    }

    pub fn inner(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(&self.0 * s)
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// The `k`-th column as an owned vector.
    pub fn column(&self, k: usize) -> Vec<Complex64> {
        self.0.column(k).iter().copied().collect()
    }

    /// Row-major copy of the entries.
    pub fn row_major(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                out.push(self.0[(r, c)]);
            }
        }
        out
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    /// ‖self − other‖_max. Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.0.shape(), other.0.shape(), "shape mismatch");
        self.0.iter().zip(other.0.iter()).fold(0.0_f64, |m, (a, b)| m.max((a - b).norm()))
    }

    /// ‖M − M†‖_max, or an error for non-square input.
    pub fn hermiticity_defect(&self) -> Result<f64> {
        self.require_square()?;
        let n = self.rows();
        let mut worst = 0.0_f64;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self.0[(r, c)] - self.0[(c, r)].conj()).norm());
            }
        }
        Ok(worst)
    }

    /// ‖M†M − I‖_max.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self.0.adjoint() * &self.0;
        Self(prod).max_abs_diff(&Self::identity(self.cols()))
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare { rows: self.rows(), cols: self.cols() })
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

/// Spectrum and orthonormal eigenvectors of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    /// `V diag(f(λ)) V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = self.eigenvectors.inner();
        let n = v.nrows();
        let mut scaled = v.clone();
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            let s = f(lam);
            for r in 0..n {
                scaled[(r, k)] *= s;
            }
        }
        ComplexMatrix(scaled * v.adjoint())
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized before decomposition. Eigenpairs come back in
/// ascending order. Within a degenerate cluster the eigenvectors are
/// re-orthonormalized by Gram–Schmidt in column order, and every
/// eigenvector is phase-fixed so that its first largest-modulus component
/// is real and positive; identical input bits give identical output bits.
pub fn hermitian_eigendecompose(m: &ComplexMatrix, hermiticity_tol: f64) -> Result<HermitianEig> {
    let defect = m.hermiticity_defect()?;
    if defect > hermiticity_tol {
        return Err(Error::NotHermitian(defect));
    }
    let n = m.rows();
    let sym = (m.inner() + m.inner().adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, 0).ok_or(Error::ConvergenceFailure)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vecs = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);

    let scale = eigenvalues.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (eigenvalues[end] - eigenvalues[end - 1]).abs() <= DEGENERACY_GAP * scale {
            end += 1;
        }
        if end - start > 1 {
            gram_schmidt_columns(&mut vecs, start, end);
        }
        start = end;
    }
    for c in 0..n {
        fix_phase(&mut vecs, c);
    }

    Ok(HermitianEig { eigenvalues, eigenvectors: ComplexMatrix(vecs) })
}

fn gram_schmidt_columns(v: &mut DMatrix<Complex64>, start: usize, end: usize) {
    for c in start..end {
        for prev in start..c {
            let proj = v.column(prev).dotc(&v.column(c));
            let prev_col = v.column(prev).clone_owned();
            let mut col = v.column_mut(c);
            col.axpy(-proj, &prev_col, Complex64::new(1.0, 0.0));
        }
        let norm = v.column(c).norm();
        if norm > 0.0 {
            v.column_mut(c).unscale_mut(norm);
        }
    }
}

fn fix_phase(v: &mut DMatrix<Complex64>, c: usize) {
    let mut pivot = 0;
    let mut best = -1.0;
    for r in 0..v.nrows() {
        // Ties within rounding go to the lowest row index.
        let mag = v[(r, c)].norm();
        if mag > best * (1.0 + 1e-12) {
            best = mag;
            pivot = r;
        }
    }
    if best > 0.0 {
        let phase = v[(pivot, c)].conj() / best;
        let mut col = v.column_mut(c);
        col *= phase;
    }
}

/// Principal square root of a PSD matrix.
///
/// Eigenvalues in `[-tol, 0)` are clamped to zero; anything more negative is
/// rejected with the most negative eigenvalue. Positive eigenvalues at the
/// level of rounding noise (`≤ d·ε·λ_max`) are zeroed too, since the square
/// root would otherwise blow them up to `~1e-8`.
pub fn psd_sqrt(rho: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eigendecompose(rho, tol)?;
    let min = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if min < -tol {
        return Err(Error::NotPsd(min));
    }
    let max = eig.eigenvalues.last().copied().unwrap_or(0.0).max(0.0);
    let floor = rho.rows() as f64 * f64::EPSILON * max;
    let s = eig.map_spectrum(|lam| if lam <= floor { 0.0 } else { lam.sqrt() });
    let sym = (s.inner() + s.inner().adjoint()) * Complex64::new(0.5, 0.0);
    Ok(ComplexMatrix(sym))
}

/// `[A, B] = AB − BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.require_square()?;
    b.require_square()?;
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch { expected: a.rows(), found: b.rows() });
    }
    Ok(ComplexMatrix(a.inner() * b.inner() - b.inner() * a.inner()))
}

/// Hilbert–Schmidt inner product `Tr(A†B)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    if a.inner().shape() != b.inner().shape() {
        return Err(Error::DimensionMismatch { expected: a.rows() * a.cols(), found: b.rows() * b.cols() });
    }
    Ok(a.inner().dotc(b.inner()))
}

/// `⟨x|y⟩ = Σ conj(x_k) y_k`.
pub fn vdot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// Neumaier-compensated sum, evaluated in iteration order.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
