//! Seeded random streams.
//!
//! Every unit of work (a mobility trajectory, a source sample, a single
//! flood) owns a stream derived from the run seed and a tuple of integer
//! labels. Streams are keyed by labels and never by thread identity, so a
//! run is reproducible for any degree of parallelism.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub type SimRng = ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic independent stream for `(seed, labels)`.
///
/// The label count is absorbed along with the labels, so `[0]` and `[0, 0]`
/// give different streams.
pub fn derive_substream(seed: u64, labels: &[u64]) -> SimRng {
    let mut state = seed;
    let mut acc = splitmix64(&mut state);
    for &label in labels {
        let mut s = acc ^ label;
        acc = splitmix64(&mut s) ^ splitmix64(&mut state);
    }
    let mut s = acc ^ (labels.len() as u64).wrapping_mul(GOLDEN);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut s).to_le_bytes());
    }
    SimRng::from_seed(key)
}

/// Uniform draw on `[0, 1)` with 53 bits of precision.
pub fn unit<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform index in `0..bound` (`bound > 0`), by rejection.
pub fn index<R: RngCore + ?Sized>(rng: &mut R, bound: usize) -> usize {
    let bound = bound as u64;
    let zone = u64::MAX - u64::MAX % bound;
    loop {
        let v = rng.next_u64();
        if v < zone {
            return (v % bound) as usize;
        }
    }
}
