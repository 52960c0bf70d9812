//! Reference computations that avoid the library's numerical kernels: the
//! square root comes straight from nalgebra's Hermitian eigensolver, the
//! commutator columns are stacked by hand, and every sum is a plain loop.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use skewchain::matrix::ComplexMatrix;
use skewchain::quantum::{DensityMatrix, KrausChannel};

type M = DMatrix<Complex64>;

/// Eigenvalues below `1e-13·λ_max` are rounding noise of a rank-deficient
/// state and are dropped before taking the square root.
pub fn sqrt_psd(rho: &M) -> M {
    let eig = rho.clone().symmetric_eigen();
    let d = rho.nrows();
    let top = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let mut out = M::zeros(d, d);
    for k in 0..d {
        let lam = eig.eigenvalues[k];
        let lam = if lam <= 1e-13 * top { 0.0 } else { lam };
        let v = eig.eigenvectors.column(k);
        out += v * v.adjoint() * Complex64::new(lam.sqrt(), 0.0);
    }
    out
}

/// Columns of `[√ρ, K]`, stacked in column order.
pub fn stacked_columns(sqrt_rho: &M, k: &M) -> Vec<Vec<Complex64>> {
    let c = sqrt_rho * k - k * sqrt_rho;
    (0..c.ncols()).map(|j| c.column(j).iter().copied().collect()).collect()
}

fn norm_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub struct OraclePair {
    pub e: Vec<Vec<Complex64>>,
    pub f: Vec<Vec<Complex64>>,
}

impl OraclePair {
    pub fn a(&self) -> Vec<f64> {
        self.e.iter().map(|c| norm_sq(c)).collect()
    }
    pub fn b(&self) -> Vec<f64> {
        self.f.iter().map(|c| norm_sq(c)).collect()
    }
    pub fn c(&self) -> Vec<Complex64> {
        self.e.iter().zip(&self.f).map(|(x, y)| inner(x, y)).collect()
    }
}

pub struct Oracle {
    pub dim: usize,
    pub pairs: Vec<OraclePair>,
    pub skew1: f64,
    pub skew2: f64,
}

impl Oracle {
    pub fn new(state: &DensityMatrix, n1: &KrausChannel, n2: &KrausChannel) -> Self {
        let s = sqrt_psd(state.rho().inner());
        let cols = |ch: &KrausChannel| -> Vec<Vec<Vec<Complex64>>> {
            ch.operators().iter().map(|k| stacked_columns(&s, k.inner())).collect()
        };
        let e = cols(n1);
        let f = cols(n2);
        let skew = |v: &Vec<Vec<Vec<Complex64>>>| -> f64 {
            v.iter().map(|op| 0.5 * op.iter().map(|c| norm_sq(c)).sum::<f64>()).sum()
        };
        let skew1 = skew(&e);
        let skew2 = skew(&f);
        let mut pairs = Vec::new();
        for ei in &e {
            for fj in &f {
                pairs.push(OraclePair { e: ei.clone(), f: fj.clone() });
            }
        }
        Self { dim: state.dim(), pairs, skew1, skew2 }
    }

    pub fn product(&self) -> f64 {
        self.skew1 * self.skew2
    }

    /// `¼ Σ |⟨vec E, vec F⟩|²` with the full stacked vectors.
    pub fn lemma1(&self) -> f64 {
        self.pairs
            .iter()
            .map(|p| {
                let e: Vec<Complex64> = p.e.concat();
                let f: Vec<Complex64> = p.f.concat();
                0.25 * inner(&e, &f).norm_sqr()
            })
            .sum()
    }

    /// Cauchy–Schwarz applied to the first `m` stacked blocks only.
    pub fn i_m(&self, m: usize) -> f64 {
        self.pairs
            .iter()
            .map(|p| {
                let eh: Vec<Complex64> = p.e[..m].concat();
                let fh: Vec<Complex64> = p.f[..m].concat();
                let et: Vec<Complex64> = p.e[m..].concat();
                let ft: Vec<Complex64> = p.f[m..].concat();
                0.25 * (inner(&eh, &fh).norm_sqr()
                    + norm_sq(&eh) * norm_sq(&ft)
                    + norm_sq(&et) * (norm_sq(&fh) + norm_sq(&ft)))
            })
            .sum()
    }

    /// Pair-resolved lattice value at `(p, q)` (1-based), written as a sum
    /// over the `(k, l)` grid: resolved cells contribute `Re(c_k c̄_l)`, the
    /// rest `a_k b_l`. After step `(p, q)` the resolved cells are
    /// `{1..p−1}²` plus `(p, l), (l, p)` for `l ≤ q`, plus `(p, p)` once the
    /// row closes.
    pub fn s_pair_resolved(&self, p: usize, q: usize) -> f64 {
        let resolved = |k: usize, l: usize| -> bool {
            let (k, l) = (k + 1, l + 1);
            if k < p && l < p {
                return true;
            }
            if k == p && l == p {
                return q == p - 1;
            }
            (k == p && l <= q) || (l == p && k <= q)
        };
        self.pairs
            .iter()
            .map(|pair| {
                let (a, b, c) = (pair.a(), pair.b(), pair.c());
                let mut total = 0.0;
                for k in 0..self.dim {
                    for l in 0..self.dim {
                        total += if resolved(k, l) { (c[k] * c[l].conj()).re } else { a[k] * b[l] };
                    }
                }
                0.25 * total
            })
            .sum()
    }

    /// Recursion written out directly for the two alternative readings.
    pub fn s_alternative(&self, as_printed: bool, p_target: usize, q_target: usize) -> f64 {
        self.pairs
            .iter()
            .map(|pair| {
                let (a, b, c) = (pair.a(), pair.b(), pair.c());
                let mut s = 0.25 * a.iter().sum::<f64>() * b.iter().sum::<f64>();
                'outer: for p in 2..=self.dim {
                    for q in 1..p {
                        let (x, y) = (p - 1, q - 1);
                        let mix = (c[x] + c[y]).norm_sqr();
                        s += if as_printed { mix - a[x] - b[y] } else { 0.25 * (mix - a[x] * b[y]) };
                        if (p, q) == (p_target, q_target) {
                            break 'outer;
                        }
                    }
                }
                s
            })
            .sum()
    }
}

/// Analytic values for the worked example, from block-diagonalising `ρ(θ)`
/// and the diagonal/shift structure of the Kraus operators.
pub struct ExampleOracle {
    pub skew1: f64,
    pub skew2: f64,
    pub product: f64,
    pub sum: f64,
    pub lemma1: f64,
}

pub fn example_oracle(theta: f64, p: f64, q: f64) -> ExampleOracle {
    let g = (theta * (1.0 - theta)).sqrt();
    let gap = 1.0 - 2.0 * g;
    let skew1 = (1.0 - (1.0 - p).sqrt()) * gap / 2.0;
    let skew2 = (1.0 - (1.0 - q).sqrt()) * gap / 2.0;
    let lemma1 =
        ((1.0 - theta).sqrt() - theta.sqrt()).powi(4) * (1.0 - (1.0 - p).sqrt()) * (1.0 - (1.0 - q).sqrt()).powi(2)
            / 8.0;
    ExampleOracle { skew1, skew2, product: skew1 * skew2, sum: skew1 + skew2, lemma1 }
}

pub fn to_matrix(m: &M) -> ComplexMatrix {
    ComplexMatrix::from_nalgebra(m.clone()).unwrap()
}
