//! Relabelling search over (σ, τ) at every lattice position, exhaustive for a
//! qutrit pair and sampled with hill climbing for d = 6, followed by the
//! mixed product and sum bounds for a grid of t.

use skewchain::chain::{
    lattice_steps, mixed_bound, optimize_permutations, BoundChain, FrameSet, SReading, SearchStrategy,
};
use skewchain::quantum::{random_channel, random_density, Convention, RandomSeed};

fn frames(dim: usize, seed: u64) -> Result<FrameSet, skewchain::Error> {
    let state = random_density(dim, dim, RandomSeed(seed))?;
    let n1 = random_channel(dim, 2, Convention::ColumnSum, RandomSeed(seed + 1))?;
    let n2 = random_channel(dim, 2, Convention::ColumnSum, RandomSeed(seed + 2))?;
    FrameSet::new(&state, &n1, &n2)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fs = frames(3, 40)?;
    for (p, q) in lattice_steps(3) {
        let best =
            optimize_permutations(&fs, p, q, SearchStrategy::Exhaustive, 36, RandomSeed(0), SReading::PairResolved)?;
        println!(
            "d=3 S{p},{q}: identity {:.6} best {:.6} sigma=[{}] tau=[{}] ({} evaluations)",
            best.identity_value, best.value, best.sigma, best.tau, best.evaluations
        );
    }

    let big = frames(6, 50)?;
    let best = optimize_permutations(&big, 2, 1, SearchStrategy::Sampled, 2000, RandomSeed(7), SReading::PairResolved)?;
    println!("d=6 S2,1 sampled: identity {:.6} best {:.6}", best.identity_value, best.value);

    let chain = BoundChain::from_frames(&big, SReading::PairResolved);
    for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let m = mixed_bound(&chain, &best, t)?;
        println!("t={t:<4} mixed product {:.6}  mixed sum {:.6}", m.product, m.sum);
    }
    Ok(())
}
