//! Checks every inequality and identity of a bound chain on a concrete
//! instance, and measures how far the bounds move under Kraus remixing.

use super::{default_search, mixed_bound, optimize_permutations, BoundChain, FrameSet, SReading, SearchStrategy};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::quantum::{mix_kraus, random_unitary, DensityMatrix, KrausChannel, RandomSeed};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    /// `lhs ≥ rhs − tol`.
    AtLeast,
    /// `|lhs − rhs| ≤ tol`.
    Equal,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainCheck {
    /// Stable identifier shared by all checks of the same family.
    pub name: String,
    /// Which instance of the family, e.g. `I2>=I3`.
    pub detail: String,
    pub lhs: f64,
    pub rhs: f64,
    pub kind: CheckKind,
    /// Hard checks decide [`ChainVerdict::passed`]; soft ones are reported only.
    pub hard: bool,
    pub deviation: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainVerdict {
    pub tol: f64,
    pub checks: Vec<ChainCheck>,
}

impl ChainVerdict {
    fn new(tol: f64) -> Self {
        Self { tol, checks: Vec::new() }
    }

    fn push(&mut self, name: &str, detail: String, lhs: f64, rhs: f64, kind: CheckKind, hard: bool) {
        let deviation = match kind {
            CheckKind::AtLeast => (rhs - lhs).max(0.0),
            CheckKind::Equal => (lhs - rhs).abs(),
        };
        // NaN deviations must fail.
        let passed = deviation <= self.tol;
        self.checks.push(ChainCheck { name: name.to_owned(), detail, lhs, rhs, kind, hard, deviation, passed });
    }

    fn ge(&mut self, name: &str, detail: impl Into<String>, lhs: f64, rhs: f64, hard: bool) {
        self.push(name, detail.into(), lhs, rhs, CheckKind::AtLeast, hard);
    }

    fn equal(&mut self, name: &str, detail: impl Into<String>, lhs: f64, rhs: f64, hard: bool) {
        self.push(name, detail.into(), lhs, rhs, CheckKind::Equal, hard);
    }

    /// `true` iff every hard check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.hard)
    }

    pub fn hard_failures(&self) -> impl Iterator<Item = &ChainCheck> {
        self.checks.iter().filter(|c| c.hard && !c.passed)
    }

    pub fn soft_failures(&self) -> impl Iterator<Item = &ChainCheck> {
        self.checks.iter().filter(|c| !c.hard && !c.passed)
    }

    pub fn find(&self, name: &str) -> impl Iterator<Item = &ChainCheck> {
        let name = name.to_owned();
        self.checks.iter().filter(move |c| c.name == name)
    }

    /// Largest deviation among checks named `name`, or `None` if there are none.
    pub fn max_deviation(&self, name: &str) -> Option<f64> {
        self.find(name).map(|c| c.deviation).reduce(f64::max)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub tol: f64,
    /// Target `(p, q)` of the relabelling search.
    pub target: (usize, usize),
    /// `None` picks [`default_search`] for the instance dimension.
    pub search: Option<(SearchStrategy, u64)>,
    pub seed: RandomSeed,
    pub t_grid: Vec<f64>,
    /// Reading used for the relabelling search and mixed bounds.
    pub reading: SReading,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tol: crate::matrix::DEFAULT_TOL,
            target: (2, 1),
            search: None,
            seed: RandomSeed(0),
            t_grid: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            reading: SReading::PairResolved,
        }
    }
}

/// Runs every check with default options.
pub fn verify_chain(state: &DensityMatrix, n1: &KrausChannel, n2: &KrausChannel, tol: f64) -> Result<ChainVerdict> {
    let frames = FrameSet::new(state, n1, n2)?;
    verify_frames(&frames, &VerifyOptions { tol, ..VerifyOptions::default() })
}

/// Runs every check on precomputed frames.
///
/// Hard checks: the endpoint bound, `product ≥ I_1`, monotonicity and
/// endpoint of the I-chain, the sum transfer `sum ≥ 2√I_m`, and, when
/// `opts.reading` is [`SReading::PairResolved`], the S-lattice chain and the
/// mixed-bound sandwich. S-lattice checks under the other readings are soft.
pub fn verify_frames(frames: &FrameSet, opts: &VerifyOptions) -> Result<ChainVerdict> {
    if opts.tol.is_nan() || opts.tol < 0.0 {
        return Err(Error::OutOfRange { name: "tol", value: opts.tol });
    }
    let d = frames.dim();
    let mut v = ChainVerdict::new(opts.tol);
    let chain = BoundChain::from_frames(frames, opts.reading);
    let product = chain.product;

    v.equal("s10_eq_product", "S1,0=product", chain.s_values.s10, product, true);
    v.ge("lemma1", "product>=lemma1", product, chain.lemma1, true);
    v.ge("product_ge_I1", "product>=I1", product, chain.i_values[0], true);
    for m in 1..d {
        v.ge("I_monotone", format!("I{m}>=I{}", m + 1), chain.i_values[m - 1], chain.i_values[m], true);
    }
    v.equal("I_endpoint", format!("I{d}=lemma1"), chain.i_values[d - 1], chain.lemma1, true);

    v.ge("sum_ge_2sqrt_product", "sum>=2sqrt(product)", chain.sum, 2.0 * product.max(0.0).sqrt(), true);
    for (m, im) in chain.i_values.iter().enumerate() {
        v.ge("sum_ge_2sqrtI", format!("sum>=2sqrt(I{})", m + 1), chain.sum, 2.0 * im.max(0.0).sqrt(), true);
    }

    for reading in SReading::ALL {
        let hard = reading == SReading::PairResolved && reading == opts.reading;
        let lat = frames.s_lattice(reading);
        let tag = |base: &str| format!("{base}[{reading}]");
        let mut prev = (1, 0, lat.s10);
        for e in &lat.entries {
            v.ge(&tag("S_monotone"), format!("S{},{}>=S{},{}", prev.0, prev.1, e.p, e.q), prev.2, e.value, hard);
            prev = (e.p, e.q, e.value);
        }
        for p in 2..=d {
            let s = lat.get(p, p - 1).expect("in range");
            v.equal(&tag("S_anchor_I"), format!("S{p},{}=I{p}", p - 1), s, chain.i_values[p - 1], hard);
        }
        if let Some(last) = lat.last() {
            v.equal(&tag("S_anchor_lemma1"), format!("S{d},{}=lemma1", d - 1), last, chain.lemma1, hard);
        }
    }

    if d >= 2 {
        let (p, q) = opts.target;
        let (strategy, budget) = opts.search.unwrap_or_else(|| default_search(d));
        let best = optimize_permutations(frames, p, q, strategy, budget, opts.seed, opts.reading)?;
        let hard = opts.reading == SReading::PairResolved;
        v.ge("perm_ge_identity", format!("max S{p},{q}>=S{p},{q}"), best.value, best.identity_value, true);
        v.ge("perm_le_product", format!("product>=max S{p},{q}"), chain.s_values.s10, best.value, hard);
        for &t in &opts.t_grid {
            let m = mixed_bound(&chain, &best, t)?;
            v.ge("mixed_product_upper", format!("t={t}"), product, m.product, hard);
            v.ge("mixed_product_lower", format!("t={t}"), m.product, chain.lemma1, hard);
            v.ge("mixed_sum_upper", format!("t={t}"), chain.sum, m.sum, hard);
            v.ge("mixed_sum_lower", format!("t={t}"), m.sum, 2.0 * chain.lemma1.max(0.0).sqrt(), hard);
        }
    }
    Ok(v)
}

/// Largest absolute change of each quantity under Kraus remixing.
#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceReport {
    pub trials: usize,
    pub tol: f64,
    /// `(quantity, max |Δ|)` in a fixed order.
    pub deviations: Vec<(String, f64)>,
}

impl InvarianceReport {
    pub fn max_deviation(&self) -> f64 {
        self.deviations.iter().map(|d| d.1).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.deviations.iter().all(|d| d.1 <= self.tol)
    }
}

fn invariant_quantities(frames: &FrameSet) -> Result<Vec<(String, Vec<f64>)>> {
    let chain = BoundChain::from_frames(frames, SReading::PairResolved);
    let mut out = vec![
        ("product".to_owned(), vec![chain.product]),
        ("sum".to_owned(), vec![chain.sum]),
        ("lemma1".to_owned(), vec![chain.lemma1]),
        ("I".to_owned(), chain.i_values.clone()),
    ];
    for reading in SReading::ALL {
        let lat = frames.s_lattice(reading);
        let vals = std::iter::once(lat.s10).chain(lat.entries.iter().map(|e| e.value)).collect();
        out.push((format!("S[{reading}]"), vals));
    }
    let d = frames.dim();
    if let (true, (SearchStrategy::Exhaustive, budget)) = (d >= 2, default_search(d)) {
        let best = optimize_permutations(
            frames,
            2,
            1,
            SearchStrategy::Exhaustive,
            budget,
            RandomSeed(0),
            SReading::PairResolved,
        )?;
        out.push(("perm_opt".to_owned(), vec![best.value]));
    }
    Ok(out)
}

/// Compares the bounds for `(N₁, N₂)` against `(N₁ᵁ, N₂ⱽ)` for each given
/// pair of mixing unitaries.
pub fn invariance_with_mixers(
    state: &DensityMatrix,
    n1: &KrausChannel,
    n2: &KrausChannel,
    mixers: &[(ComplexMatrix, ComplexMatrix)],
    tol: f64,
) -> Result<InvarianceReport> {
    let reference = invariant_quantities(&FrameSet::new(state, n1, n2)?)?;
    let mut deviations: Vec<(String, f64)> = reference.iter().map(|(n, _)| (n.clone(), 0.0)).collect();
    for (u, w) in mixers {
        let m1 = mix_kraus(n1, u)?;
        let m2 = mix_kraus(n2, w)?;
        let mixed = invariant_quantities(&FrameSet::new(state, &m1, &m2)?)?;
        for ((slot, (_, a)), (_, b)) in deviations.iter_mut().zip(&reference).zip(&mixed) {
            let dev = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            slot.1 = slot.1.max(dev);
        }
    }
    Ok(InvarianceReport { trials: mixers.len(), tol, deviations })
}

/// [`invariance_with_mixers`] with `trials` Haar-random mixing pairs drawn
/// from `seed`.
pub fn kraus_invariance_check(
    state: &DensityMatrix,
    n1: &KrausChannel,
    n2: &KrausChannel,
    trials: usize,
    seed: RandomSeed,
    tol: f64,
) -> Result<InvarianceReport> {
    let mut rng = seed.rng();
    let mixers: Vec<_> = (0..trials)
        .map(|_| {
            let u = random_unitary(n1.len(), RandomSeed(rng.next_u64()));
            let w = random_unitary(n2.len(), RandomSeed(rng.next_u64()));
            (u, w)
        })
        .collect();
    invariance_with_mixers(state, n1, n2, &mixers, tol)
}
