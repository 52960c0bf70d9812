//! Every bound depends on the channel, not on its Kraus decomposition. This
//! remixes both Kraus sets with random unitaries and reports the worst drift.

use skewchain::chain::kraus_invariance_check;
use skewchain::quantum::{random_channel, random_density, Convention, RandomSeed};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let state = random_density(3, 2, RandomSeed(1))?;
    let n1 = random_channel(3, 3, Convention::ColumnSum, RandomSeed(2))?;
    let n2 = random_channel(3, 2, Convention::ColumnSum, RandomSeed(3))?;

    let report = kraus_invariance_check(&state, &n1, &n2, 25, RandomSeed(4), 1e-10)?;
    for (name, dev) in &report.deviations {
        println!("{name:<20} {dev:.3e}");
    }
    println!("{} trials, max deviation {:.3e}, passed={}", report.trials, report.max_deviation(), report.passed());
    Ok(())
}
