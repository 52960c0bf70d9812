//! Skew information of observables and channels. For a pure state it reduces
//! to the variance; for mixed states it is strictly smaller.

use skewchain::example::{example_channels, rho_theta};
use skewchain::matrix::ComplexMatrix;
use skewchain::quantum::{random_density, RandomSeed};
use skewchain::skew::{skew_info_channel, skew_info_observable};

fn variance(state: &skewchain::quantum::DensityMatrix, a: &ComplexMatrix) -> f64 {
    let rho = state.rho();
    let mean = (rho * a).trace().re;
    (rho * &(a * a)).trace().re - mean * mean
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let z = ComplexMatrix::from_diagonal(&[1.0, -1.0, 0.5]);
    for rank in [1, 2, 3] {
        let st = random_density(3, rank, RandomSeed(9))?;
        println!("rank {rank}: skew {:.6}  variance {:.6}", skew_info_observable(&st, &z)?, variance(&st, &z));
    }
    let (n1, _) = example_channels(0.5, 0.5)?;
    for theta in [0.0, 0.25, 0.5, 1.0] {
        println!("theta {theta}: I(rho, N1) = {:.6}", skew_info_channel(&rho_theta(theta)?, &n1)?);
    }
    Ok(())
}
