//! Counter-based random inputs: item `i` of a run with seed `s` depends only on
//! `(s, i)`, so shards can be generated in any order or partition.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cube::{check_dim, BooleanFunction, RealFunction};
use crate::error::Result;

pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Values drawn uniformly from `[lo, hi)`.
pub fn random_real(n: usize, seed: u64, index: u64, lo: f64, hi: f64) -> Result<RealFunction> {
    check_dim(n)?;
    let mut rng = stream(seed, index);
    let values = (0..1usize << n)
        .map(|_| lo + (hi - lo) * rng.random::<f64>())
        .collect();
    RealFunction::new(n, values)
}

/// Each table bit independent and fair.
pub fn random_boolean(n: usize, seed: u64, index: u64) -> Result<BooleanFunction> {
    check_dim(n)?;
    let mut rng = stream(seed, index);
    let words = (1usize << n).div_ceil(64);
    let mut table: Vec<u64> = (0..words).map(|_| rng.random()).collect();
    if n < 6 {
        table[0] &= (1u64 << (1 << n)) - 1;
    }
    BooleanFunction::new(n, table)
}

/// A value picked uniformly from `choices`, drawn from its own counter stream.
pub fn pick<T: Copy>(choices: &[T], seed: u64, index: u64) -> T {
    let mut rng = stream(seed ^ 0x9e37_79b9_7f4a_7c15, index);
    choices[rng.random_range(0..choices.len())]
}
