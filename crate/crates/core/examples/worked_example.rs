//! The two-qubit worked example: a Bell-type state ρ(θ) under two
//! amplitude-damping-like channels. Prints the full bound chain at one point.
//!
//! `cargo run --example worked_example -- 0.9 0.3 0.6` picks θ, p, q.

use skewchain::chain::{BoundChain, SReading};
use skewchain::example::{closed_forms, example_channels, rho_theta, ExampleParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (theta, p, q) = match args.as_slice() {
        [] => (1.0, 0.5, 0.5),
        [theta, p, q] => (*theta, *p, *q),
        _ => return Err("expected no arguments or THETA P Q".into()),
    };
    let params = ExampleParams::new(theta, p, q, 0.0)?;
    let state = rho_theta(theta)?;
    let (n1, n2) = example_channels(p, q)?;
    let chain = BoundChain::compute(&state, &n1, &n2, SReading::PairResolved)?;

    println!("theta={theta} p={p} q={q}");
    println!("I(N1)={:.12}  I(N2)={:.12}", chain.skew_first, chain.skew_second);
    println!("product={:.12}  sum={:.12}", chain.product, chain.sum);
    for (m, v) in chain.i_values.iter().enumerate() {
        println!("I{}={v:.12}", m + 1);
    }
    for e in &chain.s_values.entries {
        println!("S{},{}={:.12}", e.p, e.q, e.value);
    }
    println!("lemma1={:.12}", chain.lemma1);

    let cf = closed_forms(&params);
    println!("closed forms: product {:.12}, lemma1 {:.12}", cf.eq20, cf.eq22);
    Ok(())
}
