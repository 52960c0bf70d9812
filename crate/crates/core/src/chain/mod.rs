//! Lower bounds on `I(ρ,N₁)·I(ρ,N₂)` obtained by refining Cauchy–Schwarz on
//! the stacked commutator columns.
//!
//! For a pair of Kraus operators `(E_i, F_j)` let `e_k = [√ρ,E_i]|k⟩` and
//! `f_k = [√ρ,F_j]|k⟩`, with `a_k = ‖e_k‖²`, `b_k = ‖f_k‖²` and
//! `c_k = ⟨e_k|f_k⟩`. Expanding `I(ρ,E_i)·I(ρ,F_j) = ¼ Σ_{k,l} a_k b_l` and
//! replacing blocks of the `(k,l)` grid by the corresponding overlap terms
//! gives:
//!
//! * the **I-chain** `I_1 ≥ I_2 ≥ … ≥ I_d`, which resolves the leading
//!   `m × m` block into `|Σ_{k≤m} c_k|²`;
//! * the **S-lattice** `S_{2,1} ≥ S_{3,1} ≥ S_{3,2} ≥ … ≥ S_{d,d−1}`, which
//!   resolves one coordinate pair at a time (see [`SReading`]);
//! * the endpoint `¼ Σ_{ij} |Tr([√ρ,E_i]†[√ρ,F_j])|²` shared by both.
//!
//! Channel-level values sum the per-pair values over `(i, j)` in i-major,
//! j-minor order with compensated summation.

pub mod permute;
pub mod verify;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{compensated_sum, hs_inner, vdot, ComplexMatrix};
use crate::quantum::{DensityMatrix, KrausChannel};
use crate::skew::{commutator_frame_in_basis, commutator_frame_indexed, CommutatorFrame};

pub use permute::{
    default_search, mixed_bound, optimize_permutations, permute_s, MixedBound, Permutation, PermutedBound,
    SearchStrategy,
};
pub use verify::{
    invariance_with_mixers, kraus_invariance_check, verify_chain, verify_frames, ChainCheck, ChainVerdict, CheckKind,
    InvarianceReport, VerifyOptions,
};

/// How a single step of the S-recursion updates the running bound.
///
/// With `x = σ(p)` and `y = τ(q)` (identity permutations for the plain
/// lattice), the per-pair step `S_{p,q-1} → S_{p,q}` adds:
///
/// * `AsPrinted`: `−(a_x + b_y) + |c_x + c_y|²`
/// * `ProductReading`: `¼(|c_x + c_y|² − a_x b_y)`
/// * `PairResolved`: `−¼(a_x b_y + a_y b_x − 2 Re(c_x c̄_y))`, minus
///   `¼(a_x b_x − |c_x|²)` on the step that closes row `p` (`q = p−1`) and
///   minus `¼(a_y b_y − |c_y|²)` on the very first step (`p = 2`).
///
/// Only `PairResolved` meets the anchors `S_{p,p−1} = I_p` and
/// `S_{d,d−1} = I_d` on generic inputs; the other two are kept so that the
/// verification report can show how far they sit from those anchors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SReading {
    AsPrinted,
    ProductReading,
    #[default]
    PairResolved,
}

impl SReading {
    pub const ALL: [SReading; 3] = [SReading::AsPrinted, SReading::ProductReading, SReading::PairResolved];

    pub fn name(self) -> &'static str {
        match self {
            SReading::AsPrinted => "as-printed",
            SReading::ProductReading => "product",
            SReading::PairResolved => "pair-resolved",
        }
    }
}

impl fmt::Display for SReading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for SReading {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SReading::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown S reading '{s}'")))
    }
}

/// Column statistics for one `(E_i, F_j)` pair.
#[derive(Clone, Debug)]
pub struct PairStats {
    pub i: usize,
    pub j: usize,
    /// `a_k = ‖[√ρ,E_i]|k⟩‖²`.
    pub e_norms: Vec<f64>,
    /// `b_k = ‖[√ρ,F_j]|k⟩‖²`.
    pub f_norms: Vec<f64>,
    /// `c_k = ⟨[√ρ,E_i]k | [√ρ,F_j]k⟩`.
    pub overlaps: Vec<Complex64>,
    /// `I(ρ,E_i)·I(ρ,F_j)`, i.e. `S_{1,0}` for this pair.
    pub base: f64,
}

/// Head/tail split of the stacked vectors at coordinate `m`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartialSplit {
    pub m: usize,
    pub e_head: f64,
    pub e_tail: f64,
    pub f_head: f64,
    pub f_tail: f64,
    pub head_overlap: Complex64,
}

impl PartialSplit {
    /// `I_m^{(i,j)} = ¼(|⟨e_m,f_m⟩|² + |e_m|²|f_{m,c}|² + |e_{m,c}|²(|f_m|²+|f_{m,c}|²))`.
    pub fn bound(&self) -> f64 {
        0.25 * (self.head_overlap.norm_sqr() + self.e_head * self.f_tail + self.e_tail * (self.f_head + self.f_tail))
    }
}

/// Commutator frames of both channels plus the per-pair statistics every
/// bound is computed from.
#[derive(Clone, Debug)]
pub struct FrameSet {
    dim: usize,
    e_frames: Vec<CommutatorFrame>,
    f_frames: Vec<CommutatorFrame>,
    e_skew: Vec<f64>,
    f_skew: Vec<f64>,
    pairs: Vec<PairStats>,
}

impl FrameSet {
    /// Frames in the computational basis.
    pub fn new(state: &DensityMatrix, n1: &KrausChannel, n2: &KrausChannel) -> Result<Self> {
        check_dims(state, n1, n2)?;
        let e_frames = frames_of(state, n1, |k, idx| commutator_frame_indexed(state, k, idx))?;
        let f_frames = frames_of(state, n2, |k, idx| commutator_frame_indexed(state, k, idx))?;
        Ok(Self::from_frames(state.dim(), e_frames, f_frames))
    }

    /// Frames whose columns are taken along the columns of `basis`.
    pub fn with_basis(
        state: &DensityMatrix,
        n1: &KrausChannel,
        n2: &KrausChannel,
        basis: &ComplexMatrix,
    ) -> Result<Self> {
        check_dims(state, n1, n2)?;
        let build = |k: &ComplexMatrix, idx: usize| {
            commutator_frame_in_basis(state, k, basis).map(|mut f| {
                f.source_operator_index = idx;
                f
            })
        };
        let e_frames = frames_of(state, n1, build)?;
        let f_frames = frames_of(state, n2, build)?;
        Ok(Self::from_frames(state.dim(), e_frames, f_frames))
    }

    fn from_frames(dim: usize, e_frames: Vec<CommutatorFrame>, f_frames: Vec<CommutatorFrame>) -> Self {
        let skew = |f: &CommutatorFrame| {
            let c = &f.matrix;
            (0.5 * hs_inner(c, c).expect("same shape").re).max(0.0)
        };
        let e_skew: Vec<f64> = e_frames.iter().map(skew).collect();
        let f_skew: Vec<f64> = f_frames.iter().map(skew).collect();
        let e_norms: Vec<Vec<f64>> = e_frames.iter().map(CommutatorFrame::column_norms_sq).collect();
        let f_norms: Vec<Vec<f64>> = f_frames.iter().map(CommutatorFrame::column_norms_sq).collect();

        let mut pairs = Vec::with_capacity(e_frames.len() * f_frames.len());
        for (i, ef) in e_frames.iter().enumerate() {
            for (j, ff) in f_frames.iter().enumerate() {
                let overlaps = ef.columns.iter().zip(&ff.columns).map(|(x, y)| vdot(x, y)).collect();
                pairs.push(PairStats {
                    i,
                    j,
                    e_norms: e_norms[i].clone(),
                    f_norms: f_norms[j].clone(),
                    overlaps,
                    base: e_skew[i] * f_skew[j],
                });
            }
        }
        Self { dim, e_frames, f_frames, e_skew, f_skew, pairs }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn e_frames(&self) -> &[CommutatorFrame] {
        &self.e_frames
    }

    pub fn f_frames(&self) -> &[CommutatorFrame] {
        &self.f_frames
    }

    /// Pair statistics in i-major, j-minor order.
    pub fn pairs(&self) -> &[PairStats] {
        &self.pairs
    }

    /// `I(ρ, N₁)`.
    pub fn skew_first(&self) -> f64 {
        compensated_sum(self.e_skew.iter().copied())
    }

    /// `I(ρ, N₂)`.
    pub fn skew_second(&self) -> f64 {
        compensated_sum(self.f_skew.iter().copied())
    }

    pub fn product(&self) -> f64 {
        self.skew_first() * self.skew_second()
    }

    pub fn sum(&self) -> f64 {
        self.skew_first() + self.skew_second()
    }

    /// `S_{1,0} = Σ_{ij} I(ρ,E_i)·I(ρ,F_j)`.
    pub fn s10(&self) -> f64 {
        compensated_sum(self.pairs.iter().map(|p| p.base))
    }

    /// Head/tail split of pair `pair` (index into [`pairs`](Self::pairs)) at `m ∈ 1..=d`.
    pub fn split(&self, pair: usize, m: usize) -> PartialSplit {
        let st = &self.pairs[pair];
        let (eh, et) = st.e_norms.split_at(m);
        let (fh, ft) = st.f_norms.split_at(m);
        PartialSplit {
            m,
            e_head: compensated_sum(eh.iter().copied()),
            e_tail: compensated_sum(et.iter().copied()),
            f_head: compensated_sum(fh.iter().copied()),
            f_tail: compensated_sum(ft.iter().copied()),
            head_overlap: st.overlaps[..m].iter().sum(),
        }
    }

    /// `¼ Σ_{ij} |Tr([√ρ,E_i]†[√ρ,F_j])|²`, via whole-matrix inner products.
    pub fn lemma1(&self) -> f64 {
        let terms = self.e_frames.iter().flat_map(|e| {
            self.f_frames.iter().map(move |f| 0.25 * hs_inner(&e.matrix, &f.matrix).expect("same shape").norm_sqr())
        });
        compensated_sum(terms)
    }

    /// `[I_1, …, I_d]`.
    pub fn i_values(&self) -> Vec<f64> {
        (1..=self.dim).map(|m| compensated_sum((0..self.pairs.len()).map(|p| self.split(p, m).bound()))).collect()
    }

    /// Every `S_{p,q}` under `reading`, in traversal order.
    pub fn s_lattice(&self, reading: SReading) -> SLattice {
        let steps = lattice_steps(self.dim);
        let ident: Vec<usize> = (0..self.dim).collect();
        let per_pair: Vec<Vec<f64>> = self
            .pairs
            .iter()
            .map(|st| {
                let mut vals = Vec::with_capacity(steps.len());
                walk_lattice(st, &ident, &ident, reading, steps.len(), |_, v| vals.push(v));
                vals
            })
            .collect();
        let entries = steps
            .iter()
            .enumerate()
            .map(|(k, &(p, q))| LatticeEntry { p, q, value: compensated_sum(per_pair.iter().map(|v| v[k])) })
            .collect();
        SLattice { s10: self.s10(), entries }
    }
}

fn check_dims(state: &DensityMatrix, n1: &KrausChannel, n2: &KrausChannel) -> Result<()> {
    for ch in [n1, n2] {
        if ch.dim() != state.dim() {
            return Err(Error::DimensionMismatch { expected: state.dim(), found: ch.dim() });
        }
    }
    Ok(())
}

fn frames_of(
    _state: &DensityMatrix,
    channel: &KrausChannel,
    build: impl Fn(&ComplexMatrix, usize) -> Result<CommutatorFrame>,
) -> Result<Vec<CommutatorFrame>> {
    channel.operators().iter().enumerate().map(|(idx, k)| build(k, idx)).collect()
}

/// Lattice positions `(p, q)`, 1-based, in the order
/// `(2,1), (3,1), (3,2), (4,1), …, (d,d−1)`.
pub fn lattice_steps(dim: usize) -> Vec<(usize, usize)> {
    (2..=dim).flat_map(|p| (1..p).map(move |q| (p, q))).collect()
}

/// Position of `(p, q)` in [`lattice_steps`].
pub fn lattice_index(p: usize, q: usize) -> usize {
    (p - 1) * (p - 2) / 2 + (q - 1)
}

/// Runs the per-pair S-recursion for the first `steps` lattice positions,
/// reporting each intermediate value. `sigma`/`tau` are 0-based images.
pub(crate) fn walk_lattice(
    st: &PairStats,
    sigma: &[usize],
    tau: &[usize],
    reading: SReading,
    steps: usize,
    mut visit: impl FnMut(usize, f64),
) {
    let a = &st.e_norms;
    let b = &st.f_norms;
    let c = &st.overlaps;
    let mut value = st.base;
    let mut done = 0;
    let dim = a.len();
    'outer: for p in 2..=dim {
        for q in 1..p {
            if done == steps {
                break 'outer;
            }
            let x = sigma[p - 1];
            let y = tau[q - 1];
            let delta = match reading {
                SReading::AsPrinted => -(a[x] + b[y]) + (c[x] + c[y]).norm_sqr(),
                SReading::ProductReading => 0.25 * ((c[x] + c[y]).norm_sqr() - a[x] * b[y]),
                SReading::PairResolved => {
                    let mut gap = a[x] * b[y] + a[y] * b[x] - 2.0 * (c[x] * c[y].conj()).re;
                    if q == p - 1 {
                        gap += a[x] * b[x] - c[x].norm_sqr();
                    }
                    if p == 2 {
                        gap += a[y] * b[y] - c[y].norm_sqr();
                    }
                    -0.25 * gap
                }
            };
            value += delta;
            visit(done, value);
            done += 1;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeEntry {
    pub p: usize,
    pub q: usize,
    pub value: f64,
}

/// `S_{1,0}` followed by `S_{p,q}` for `1 ≤ q < p ≤ d` in traversal order.
#[derive(Clone, Debug, PartialEq)]
pub struct SLattice {
    pub s10: f64,
    pub entries: Vec<LatticeEntry>,
}

impl SLattice {
    pub fn get(&self, p: usize, q: usize) -> Option<f64> {
        if q == 0 && p == 1 {
            return Some(self.s10);
        }
        if q == 0 || q >= p {
            return None;
        }
        self.entries.get(lattice_index(p, q)).map(|e| e.value)
    }

    /// `S_{d,d−1}`, or `None` for `d = 1`.
    pub fn last(&self) -> Option<f64> {
        self.entries.last().map(|e| e.value)
    }
}

/// Every bound for one `(ρ, N₁, N₂)` instance.
#[derive(Clone, Debug)]
pub struct BoundChain {
    pub dim: usize,
    pub skew_first: f64,
    pub skew_second: f64,
    /// `I(ρ,N₁)·I(ρ,N₂)`.
    pub product: f64,
    /// `I(ρ,N₁)+I(ρ,N₂)`.
    pub sum: f64,
    /// `I_1 … I_d`.
    pub i_values: Vec<f64>,
    pub s_values: SLattice,
    pub lemma1: f64,
    pub s_reading: SReading,
}

impl BoundChain {
    pub fn from_frames(frames: &FrameSet, reading: SReading) -> Self {
        Self {
            dim: frames.dim(),
            skew_first: frames.skew_first(),
            skew_second: frames.skew_second(),
            product: frames.product(),
            sum: frames.sum(),
            i_values: frames.i_values(),
            s_values: frames.s_lattice(reading),
            lemma1: frames.lemma1(),
            s_reading: reading,
        }
    }

    pub fn compute(state: &DensityMatrix, n1: &KrausChannel, n2: &KrausChannel, reading: SReading) -> Result<Self> {
        Ok(Self::from_frames(&FrameSet::new(state, n1, n2)?, reading))
    }
}

/// `¼ Σ_{ij} |([√ρ,E_i], [√ρ,F_j])|²`.
pub fn lemma1_bound(state: &DensityMatrix, n1: &KrausChannel, n2: &KrausChannel) -> Result<f64> {
    Ok(FrameSet::new(state, n1, n2)?.lemma1())
}

/// Bound chain with the default S reading.
pub fn i_chain(state: &DensityMatrix, n1: &KrausChannel, n2: &KrausChannel) -> Result<BoundChain> {
    BoundChain::compute(state, n1, n2, SReading::default())
}

pub fn s_chain(state: &DensityMatrix, n1: &KrausChannel, n2: &KrausChannel, reading: SReading) -> Result<BoundChain> {
    BoundChain::compute(state, n1, n2, reading)
}

/// Sum-form bounds: `2√I_m` for every `m`, then `2√S_{p,q}` in lattice
/// order. Negative lattice values (possible under
/// [`SReading::AsPrinted`]) map to zero.
pub fn sum_chain(chain: &BoundChain) -> Vec<f64> {
    let two_sqrt = |v: f64| 2.0 * v.max(0.0).sqrt();
    chain.i_values.iter().copied().chain(chain.s_values.entries.iter().map(|e| e.value)).map(two_sqrt).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{random_channel, random_density, Convention, RandomSeed};
    use approx::assert_abs_diff_eq;

    fn instance(d: usize, seed: u64) -> FrameSet {
        let st = random_density(d, d, RandomSeed(seed)).unwrap();
        let n1 = random_channel(d, 2, Convention::ColumnSum, RandomSeed(seed + 1)).unwrap();
        let n2 = random_channel(d, 3, Convention::ColumnSum, RandomSeed(seed + 2)).unwrap();
        FrameSet::new(&st, &n1, &n2).unwrap()
    }

    #[test]
    fn lattice_order() {
        assert_eq!(lattice_steps(4), vec![(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3)]);
        for (k, (p, q)) in lattice_steps(6).into_iter().enumerate() {
            assert_eq!(lattice_index(p, q), k);
        }
        assert!(lattice_steps(1).is_empty());
    }

    #[test]
    fn reading_names_round_trip() {
        for r in SReading::ALL {
            assert_eq!(r.name().parse::<SReading>().unwrap(), r);
        }
        assert!("nope".parse::<SReading>().is_err());
    }

    #[test]
    fn split_invariants() {
        let fs = instance(4, 100);
        let st = &fs.pairs()[0];
        let e_total: f64 = st.e_norms.iter().sum();
        for m in 1..=4 {
            let s = fs.split(0, m);
            assert_abs_diff_eq!(s.e_head + s.e_tail, e_total, epsilon = 1e-12);
        }
        let full = fs.split(0, 4);
        let direct = hs_inner(&fs.e_frames()[0].matrix, &fs.f_frames()[0].matrix).unwrap();
        assert!((full.head_overlap - direct).norm() <= 1e-12);
    }

    #[test]
    fn pair_resolved_hits_anchors() {
        for d in 2..=5 {
            let fs = instance(d, 200 + d as u64);
            let i = fs.i_values();
            let s = fs.s_lattice(SReading::PairResolved);
            for p in 2..=d {
                assert_abs_diff_eq!(s.get(p, p - 1).unwrap(), i[p - 1], epsilon = 1e-12);
            }
            assert_abs_diff_eq!(s.last().unwrap(), fs.lemma1(), epsilon = 1e-12);
        }
    }

    #[test]
    fn sum_chain_examples() {
        let chain = BoundChain {
            dim: 2,
            skew_first: 0.0,
            skew_second: 0.0,
            product: 0.0,
            sum: 0.0,
            i_values: vec![0.0, 0.0],
            s_values: SLattice { s10: 0.0, entries: vec![LatticeEntry { p: 2, q: 1, value: 0.0 }] },
            lemma1: 0.0,
            s_reading: SReading::PairResolved,
        };
        assert_eq!(sum_chain(&chain), vec![0.0; 3]);

        let mut c2 = chain.clone();
        c2.i_values = vec![0.01, 0.003_140_78];
        let out = sum_chain(&c2);
        assert_abs_diff_eq!(out[1], 0.11208, epsilon = 1e-5);
        assert!(out[0] >= out[1]);
    }

    #[test]
    fn single_dimension_has_empty_lattice() {
        let st = DensityMatrix::maximally_mixed(1);
        let ch = crate::quantum::validate_channel(vec![ComplexMatrix::identity(1)], Convention::RowSum, 1e-12).unwrap();
        let chain = BoundChain::compute(&st, &ch, &ch, SReading::PairResolved).unwrap();
        assert!(chain.s_values.entries.is_empty());
        assert_eq!(chain.i_values, vec![0.0]);
    }
}
