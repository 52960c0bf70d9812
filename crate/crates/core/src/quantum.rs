//! Validated states and channels, seeded random instances, and unitary
//! mixing of Kraus representations.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{psd_sqrt, ComplexMatrix, DEFAULT_TOL};

/// Tolerance used when validating generated (not user supplied) objects.
pub const GENERATED_TOL: f64 = 1e-12;

/// A density matrix together with its cached PSD square root.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    rho: ComplexMatrix,
    sqrt_rho: ComplexMatrix,
    validation_tol: f64,
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.rho.rows()
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn sqrt_rho(&self) -> &ComplexMatrix {
        &self.sqrt_rho
    }

    pub fn validation_tol(&self) -> f64 {
        self.validation_tol
    }

    /// The maximally mixed state `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        let rho = ComplexMatrix::from_diagonal(&vec![1.0 / dim as f64; dim]);
        let sqrt_rho = ComplexMatrix::from_diagonal(&vec![(1.0 / dim as f64).sqrt(); dim]);
        Self { rho, sqrt_rho, validation_tol: DEFAULT_TOL }
    }
}

/// Which completeness relation a Kraus set must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// `Σ K K† = I`.
    RowSum,
    /// `Σ K† K = I` (trace preservation).
    ColumnSum,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Convention::RowSum => f.write_str("row_sum"),
            Convention::ColumnSum => f.write_str("column_sum"),
        }
    }
}

impl Convention {
    /// ‖Σ KK† − I‖_max or ‖Σ K†K − I‖_max for `ops`.
    pub fn residual(self, ops: &[ComplexMatrix]) -> f64 {
        let d = ops[0].rows();
        let mut acc = DMatrix::<Complex64>::zeros(d, d);
        for k in ops {
            let k = k.inner();
            match self {
                Convention::RowSum => acc += k * k.adjoint(),
                Convention::ColumnSum => acc += k.adjoint() * k,
            }
        }
        acc -= DMatrix::identity(d, d);
        acc.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }
}

/// An ordered Kraus representation of a channel on `ℂ^d`.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    operators: Vec<ComplexMatrix>,
    convention: Convention,
    completeness_tol: f64,
}

impl KrausChannel {
    pub fn dim(&self) -> usize {
        self.operators[0].rows()
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn completeness_tol(&self) -> f64 {
        self.completeness_tol
    }
}

/// Seed for the portable ChaCha20 stream behind every random generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RandomSeed(pub u64);

impl RandomSeed {
    pub fn rng(self) -> SeededRng {
        SeededRng::new(self)
    }
}

/// ChaCha20 stream (`ChaCha20Rng::seed_from_u64`) with Box–Muller normals.
///
/// Uniforms take the top 53 bits of each `u64`; a complex normal uses one
/// pair of uniforms, `(r cos φ, r sin φ)/√2` with `r = √(−2 ln(1−u₁))` and
/// `φ = 2πu₂`, so a port only needs the ChaCha20 word stream to reproduce it.
pub struct SeededRng(ChaCha20Rng);

impl SeededRng {
    pub fn new(seed: RandomSeed) -> Self {
        Self(ChaCha20Rng::seed_from_u64(seed.0))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..n` by 128-bit multiply-shift.
    pub fn below(&mut self, n: usize) -> usize {
        ((self.0.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// Standard complex Gaussian (unit total variance).
    pub fn complex_normal(&mut self) -> Complex64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * (1.0 - u1).ln()).sqrt() * std::f64::consts::FRAC_1_SQRT_2;
        let phi = 2.0 * std::f64::consts::PI * u2;
        Complex64::new(r * phi.cos(), r * phi.sin())
    }

    /// `rows × cols` Gaussian matrix, filled row-major.
    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = self.complex_normal();
            }
        }
        m
    }

    /// Fisher–Yates shuffle of `0..n`.
    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.below(i + 1);
            p.swap(i, j);
        }
        p
    }
}

/// Validates `m` as a density matrix and caches `√m`.
pub fn validate_density(m: &ComplexMatrix, tol: f64) -> Result<DensityMatrix> {
    let defect = m.hermiticity_defect()?;
    if defect > tol {
        return Err(Error::NotHermitian(defect));
    }
    let sqrt_rho = psd_sqrt(m, tol)?;
    let trace_dev = (m.trace().re - 1.0).abs();
    if trace_dev > tol {
        return Err(Error::TraceNotOne(trace_dev));
    }
    Ok(DensityMatrix { rho: m.clone(), sqrt_rho, validation_tol: tol })
}

/// Validates a Kraus set against `convention`.
pub fn validate_channel(ops: Vec<ComplexMatrix>, convention: Convention, tol: f64) -> Result<KrausChannel> {
    let first = ops.first().ok_or(Error::InvalidCount { count: 0, max: 0 })?;
    if !first.is_square() {
        return Err(Error::NotSquare { rows: first.rows(), cols: first.cols() });
    }
    let d = first.rows();
    for k in &ops {
        if !k.is_square() {
            return Err(Error::NotSquare { rows: k.rows(), cols: k.cols() });
        }
        if k.rows() != d {
            return Err(Error::DimensionMismatch { expected: d, found: k.rows() });
        }
    }
    if ops.len() > d * d {
        return Err(Error::InvalidCount { count: ops.len(), max: d * d });
    }
    let residual = convention.residual(&ops);
    if residual > tol {
        return Err(Error::CompletenessViolated { convention, residual });
    }
    Ok(KrausChannel { operators: ops, convention, completeness_tol: tol })
}

/// `N(ρ) = Σ K ρ K†`.
pub fn apply_channel(channel: &KrausChannel, state: &DensityMatrix) -> Result<ComplexMatrix> {
    if channel.dim() != state.dim() {
        return Err(Error::DimensionMismatch { expected: state.dim(), found: channel.dim() });
    }
    let d = state.dim();
    let rho = state.rho().inner();
    let mut out = DMatrix::<Complex64>::zeros(d, d);
    for k in channel.operators() {
        let k = k.inner();
        out += k * rho * k.adjoint();
    }
    ComplexMatrix::from_nalgebra(out)
}

/// Random state `GG†/Tr(GG†)` with `G` a `d × rank` Gaussian matrix.
pub fn random_density(dim: usize, rank: usize, seed: RandomSeed) -> Result<DensityMatrix> {
    if dim == 0 || rank == 0 || rank > dim {
        return Err(Error::InvalidRank { rank, dim });
    }
    let g = seed.rng().gaussian_matrix(dim, rank);
    let mut rho = &g * g.adjoint();
    let tr = rho.trace().re;
    rho /= Complex64::new(tr, 0.0);
    // Exact Hermitian symmetry before validation.
    let rho = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    validate_density(&ComplexMatrix::from_nalgebra(rho)?, DEFAULT_TOL)
}

/// Orthonormal columns of a Gaussian `rows × cols` matrix (`rows ≥ cols`),
/// with the phases of `R`'s diagonal moved into `Q`.
fn haar_isometry(rows: usize, cols: usize, seed: RandomSeed) -> DMatrix<Complex64> {
    let g = seed.rng().gaussian_matrix(rows, cols);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for c in 0..cols {
        let d = r[(c, c)];
        let mag = d.norm();
        if mag > 0.0 {
            let phase = d / mag;
            let mut col = q.column_mut(c);
            col *= phase;
        }
    }
    q
}

/// Haar-random `n × n` unitary.
pub fn random_unitary(n: usize, seed: RandomSeed) -> ComplexMatrix {
    assert!(n >= 1, "unitary size must be positive");
    ComplexMatrix::from_nalgebra(haar_isometry(n, n, seed)).expect("finite isometry")
}

/// Random channel with `n_kraus` operators sliced from a Haar isometry
/// `ℂ^d → ℂ^{n·d}`. Blocks satisfy `Σ K†K = I`; under
/// [`Convention::RowSum`] each block is replaced by its adjoint.
pub fn random_channel(dim: usize, n_kraus: usize, convention: Convention, seed: RandomSeed) -> Result<KrausChannel> {
    if dim == 0 || n_kraus == 0 || n_kraus > dim * dim {
        return Err(Error::InvalidCount { count: n_kraus, max: dim * dim });
    }
    let v = haar_isometry(n_kraus * dim, dim, seed);
    let ops = (0..n_kraus)
        .map(|i| {
            let block = v.rows(i * dim, dim).clone_owned();
            let block = match convention {
                Convention::ColumnSum => block,
                Convention::RowSum => block.adjoint(),
            };
            ComplexMatrix::from_nalgebra(block)
        })
        .collect::<Result<Vec<_>>>()?;
    validate_channel(ops, convention, GENERATED_TOL)
}

/// Unitary remixing `K'_t = Σ_s U_ts K_s`; describes the same channel.
pub fn mix_kraus(channel: &KrausChannel, u: &ComplexMatrix) -> Result<KrausChannel> {
    let n = channel.len();
    if !u.is_square() || u.rows() != n {
        return Err(Error::SizeMismatch { expected: n, found: u.rows().max(u.cols()) });
    }
    let defect = u.unitarity_defect();
    if defect > 1e-10 {
        return Err(Error::NotUnitary(defect));
    }
    let d = channel.dim();
    let ops = (0..n)
        .map(|t| {
            let mut acc = DMatrix::<Complex64>::zeros(d, d);
            for (s, k) in channel.operators().iter().enumerate() {
                acc += k.inner() * u.get(t, s);
            }
            ComplexMatrix::from_nalgebra(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KrausChannel { operators: ops, convention: channel.convention, completeness_tol: channel.completeness_tol })
}
