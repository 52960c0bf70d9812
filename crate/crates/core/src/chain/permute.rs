//! Relabelled S-lattice values and the search for the best relabelling.
//!
//! Applying permutations `σ, τ` of the coordinate labels before running the
//! S-recursion gives another valid lower bound `S^{σ,τ}_{p,q}`. The search
//! maximises it over `(σ, τ)` for a fixed target `(p, q)`.

use std::fmt;

use itertools::Itertools;

use super::{lattice_index, walk_lattice, BoundChain, FrameSet, SReading};
use crate::error::{Error, Result};
use crate::matrix::compensated_sum;
use crate::quantum::RandomSeed;

/// A permutation of `0..d`, stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(d: usize) -> Self {
        Self((0..d).collect())
    }

    pub fn from_zero_based(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || seen[x] {
                return Err(Error::InvalidPermutation(images));
            }
            seen[x] = true;
        }
        Ok(Self(images))
    }

    /// Accepts images in `1..=d`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidPermutation(images.to_vec()));
        }
        Self::from_zero_based(images.iter().map(|x| x - 1).collect())
            .map_err(|_| Error::InvalidPermutation(images.to_vec()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|x| x + 1).collect()
    }

    fn swapped(&self, k: usize) -> Self {
        let mut v = self.0.clone();
        v.swap(k, k + 1);
        Self(v)
    }
}

impl fmt::Display for Permutation {
    /// One-based, space separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.one_based().iter().join(" "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStrategy {
    /// All `(d!)²` pairs in lexicographic order, σ outer and τ inner.
    Exhaustive,
    /// Seeded random pairs followed by adjacent-transposition hill climbing.
    Sampled,
}

impl std::str::FromStr for SearchStrategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Self::Exhaustive),
            "sampled" => Ok(Self::Sampled),
            _ => Err(Error::Parse(format!("unknown search strategy '{s}'"))),
        }
    }
}

impl fmt::Display for SearchStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Self::Exhaustive => "exhaustive",
            Self::Sampled => "sampled",
        })
    }
}

/// Exhaustive up to `d = 5` (budget 14400 = (5!)²), sampled with 10000
/// candidates beyond that.
pub fn default_search(dim: usize) -> (SearchStrategy, u64) {
    if dim <= 5 {
        (SearchStrategy::Exhaustive, 14_400)
    } else {
        (SearchStrategy::Sampled, 10_000)
    }
}

fn check_target(dim: usize, p: usize, q: usize) -> Result<()> {
    if q == 0 || q >= p || p > dim {
        Err(Error::InvalidIndices { p, q, dim })
    } else {
        Ok(())
    }
}

fn evaluate(frames: &FrameSet, sigma: &[usize], tau: &[usize], p: usize, q: usize, reading: SReading) -> f64 {
    let steps = lattice_index(p, q) + 1;
    compensated_sum(frames.pairs().iter().map(|st| {
        let mut last = st.base;
        walk_lattice(st, sigma, tau, reading, steps, |_, v| last = v);
        last
    }))
}

/// `S^{σ,τ}_{p,q}` summed over all Kraus pairs. With identity permutations
/// this reproduces the matching entry of [`FrameSet::s_lattice`] exactly.
pub fn permute_s(
    frames: &FrameSet,
    sigma: &Permutation,
    tau: &Permutation,
    p: usize,
    q: usize,
    reading: SReading,
) -> Result<f64> {
    let d = frames.dim();
    for perm in [sigma, tau] {
        if perm.len() != d {
            return Err(Error::InvalidPermutation(perm.as_slice().to_vec()));
        }
    }
    check_target(d, p, q)?;
    Ok(evaluate(frames, sigma.as_slice(), tau.as_slice(), p, q, reading))
}

/// Best relabelling found for one target `(p, q)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PermutedBound {
    pub sigma: Permutation,
    pub tau: Permutation,
    pub p: usize,
    pub q: usize,
    pub value: f64,
    /// `S_{p,q}` with identity labels, for comparison.
    pub identity_value: f64,
    pub evaluations: u64,
    pub strategy: SearchStrategy,
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

#[allow(clippy::too_many_arguments)]
pub fn optimize_permutations(
    frames: &FrameSet,
    p: usize,
    q: usize,
    strategy: SearchStrategy,
    budget: u64,
    seed: RandomSeed,
    reading: SReading,
) -> Result<PermutedBound> {
    let d = frames.dim();
    check_target(d, p, q)?;
    let ident: Vec<usize> = (0..d).collect();
    let identity_value = evaluate(frames, &ident, &ident, p, q, reading);

    let mut best_sigma = ident.clone();
    let mut best_tau = ident.clone();
    let mut best = f64::NEG_INFINITY;
    let mut evaluations = 0u64;

    match strategy {
        SearchStrategy::Exhaustive => {
            let fact = factorial(d);
            let required = fact * fact;
            if required > budget as u128 {
                return Err(Error::BudgetExceeded { required, budget });
            }
            let perms: Vec<Vec<usize>> = (0..d).permutations(d).collect();
            for sigma in &perms {
                for tau in &perms {
                    let v = evaluate(frames, sigma, tau, p, q, reading);
                    evaluations += 1;
                    if v > best {
                        best = v;
                        best_sigma.clone_from(sigma);
                        best_tau.clone_from(tau);
                    }
                }
            }
        }
        SearchStrategy::Sampled => {
            let mut rng = seed.rng();
            best = identity_value;
            evaluations = 1;
            while evaluations < budget {
                let sigma = rng.permutation(d);
                let tau = rng.permutation(d);
                let v = evaluate(frames, &sigma, &tau, p, q, reading);
                evaluations += 1;
                if v > best {
                    best = v;
                    best_sigma = sigma;
                    best_tau = tau;
                }
            }
            // Hill climb over adjacent transpositions, σ before τ, taking the
            // first strict improvement each round.
            let mut sigma = Permutation(best_sigma);
            let mut tau = Permutation(best_tau);
            let climb_cap = evaluations.saturating_add(budget);
            'climb: while evaluations < climb_cap {
                for k in 0..d.saturating_sub(1) {
                    for side in 0..2 {
                        let (s, t) =
                            if side == 0 { (sigma.swapped(k), tau.clone()) } else { (sigma.clone(), tau.swapped(k)) };
                        let v = evaluate(frames, s.as_slice(), t.as_slice(), p, q, reading);
                        evaluations += 1;
                        if v > best {
                            best = v;
                            sigma = s;
                            tau = t;
                            continue 'climb;
                        }
                    }
                }
                break;
            }
            best_sigma = sigma.0;
            best_tau = tau.0;
        }
    }

    Ok(PermutedBound {
        sigma: Permutation(best_sigma),
        tau: Permutation(best_tau),
        p,
        q,
        value: best,
        identity_value,
        evaluations,
        strategy,
    })
}

/// Convex mixtures of the product bound with the optimised lattice value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixedBound {
    pub t: f64,
    /// `(1−t)·S_{1,0} + t·max S^{σ,τ}_{p,q}`.
    pub product: f64,
    /// `(1−t)·(I(ρ,N₁)+I(ρ,N₂)) + t·2√(max S^{σ,τ}_{p,q})`.
    pub sum: f64,
}

pub fn mixed_bound(chain: &BoundChain, best: &PermutedBound, t: f64) -> Result<MixedBound> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidT(t));
    }
    Ok(MixedBound {
        t,
        product: (1.0 - t) * chain.s_values.s10 + t * best.value,
        sum: (1.0 - t) * chain.sum + t * 2.0 * best.value.max(0.0).sqrt(),
    })
}
