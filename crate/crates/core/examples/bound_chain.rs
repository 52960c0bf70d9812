//! Bound chain for a random state and two random channels, under each of the
//! three S-lattice readings. Only the pair-resolved one lands on the lemma-1
//! endpoint.

use skewchain::chain::{sum_chain, BoundChain, SReading};
use skewchain::quantum::{random_channel, random_density, Convention, RandomSeed};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dim = 4;
    let state = random_density(dim, 3, RandomSeed(11))?;
    let n1 = random_channel(dim, 2, Convention::ColumnSum, RandomSeed(12))?;
    let n2 = random_channel(dim, 3, Convention::ColumnSum, RandomSeed(13))?;

    for reading in SReading::ALL {
        let chain = BoundChain::compute(&state, &n1, &n2, reading)?;
        let s: Vec<String> = chain.s_values.entries.iter().map(|e| format!("{:.6}", e.value)).collect();
        println!("{reading:>13}: S10={:.6} S=[{}]", chain.s_values.s10, s.join(", "));
    }

    let chain = BoundChain::compute(&state, &n1, &n2, SReading::PairResolved)?;
    let i: Vec<String> = chain.i_values.iter().map(|v| format!("{v:.6}")).collect();
    println!("I chain: [{}]", i.join(", "));
    println!("lemma1={:.6} product={:.6}", chain.lemma1, chain.product);
    for (m, v) in sum_chain(&chain).iter().enumerate() {
        println!("sum-form bound {m}: {v:.6} <= {:.6}", chain.sum);
    }
    Ok(())
}
