//! Checks the bound chain on a batch of random instances and tallies the
//! checks that fail, split into hard invariants and soft diagnostics.

use std::collections::BTreeMap;

use skewchain::chain::verify_chain;
use skewchain::cli::plan_instances;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let plans = plan_instances(&[2, 3, 4, 5], 25, 42);
    let mut hard = 0;
    let mut soft: BTreeMap<String, usize> = BTreeMap::new();
    for plan in &plans {
        let (state, n1, n2) = plan.build()?;
        let verdict = verify_chain(&state, &n1, &n2, 1e-10)?;
        hard += verdict.hard_failures().count();
        for c in verdict.soft_failures() {
            *soft.entry(c.name.clone()).or_default() += 1;
        }
    }
    println!("{} instances, {hard} hard failures", plans.len());
    for (name, n) in soft {
        println!("soft {name}: {n}");
    }
    Ok(())
}
