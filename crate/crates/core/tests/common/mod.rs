#![allow(dead_code)]

pub mod oracle;

use skewchain::quantum::{random_channel, random_density, Convention, DensityMatrix, KrausChannel, RandomSeed};

/// Random full-rank-or-less instance with ColumnSum channels.
pub fn random_instance(
    dim: usize,
    rank: usize,
    n1: usize,
    n2: usize,
    seed: u64,
) -> (DensityMatrix, KrausChannel, KrausChannel) {
    (
        random_density(dim, rank, RandomSeed(seed)).unwrap(),
        random_channel(dim, n1, Convention::ColumnSum, RandomSeed(seed ^ 0x9e37_79b9)).unwrap(),
        random_channel(dim, n2, Convention::ColumnSum, RandomSeed(seed ^ 0x7f4a_7c15)).unwrap(),
    )
}
