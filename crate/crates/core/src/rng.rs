//! Seeded randomness shared by the samplers.
//!
//! Every random choice in the crate is drawn from ChaCha8 streams keyed by
//! `(seed, stream)`, so results do not depend on scheduling. Per-edge coins
//! use a SplitMix64 keyed by the unordered vertex pair.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_xoshiro::SplitMix64;

use crate::exact_geometry::{Rational, Vector};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` under the master `seed`.
pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derives a child seed; used where a sub-computation takes a plain `u64`.
pub fn derive_seed(seed: u64, label: u64) -> u64 {
    stream(seed, label).next_u64()
}

pub(crate) fn pair_key(seed: u64, i: usize, j: usize) -> u64 {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    let k = SplitMix64::seed_from_u64(seed).next_u64() ^ a as u64;
    let k = SplitMix64::seed_from_u64(k).next_u64() ^ (b as u64).rotate_left(32);
    SplitMix64::seed_from_u64(k).next_u64()
}

/// Uniform rational `k / den` with `k` drawn from `[-range, range]`.
pub fn small_rational<R: Rng>(rng: &mut R, range: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(rng.gen_range(-range..=range)), BigInt::from(den))
}

pub fn small_vector<R: Rng>(rng: &mut R, dim: usize, range: i64, den: i64) -> Vector {
    Vector::new((0..dim).map(|_| small_rational(rng, range, den)).collect())
}
