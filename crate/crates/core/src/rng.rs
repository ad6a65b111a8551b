//! Seed derivation and sampling primitives.
//!
//! Every random stream in the toolkit is a ChaCha8 generator keyed by a seed
//! derived from `(root, purpose tag, index)`, so any sub-result can be
//! re-derived on its own and results do not depend on execution order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(tag: &str) -> u64 {
    tag.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

/// Derive an independent child seed.
pub fn derive_seed(root: u64, tag: &str, index: u64) -> u64 {
    splitmix64(
        splitmix64(root ^ fnv1a(tag)) ^ splitmix64(index.wrapping_add(0x5851_F42D_4C95_7F2D)),
    )
}

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn derived(root: u64, tag: &str, index: u64) -> SeededRng {
    seeded(derive_seed(root, tag, index))
}

/// Uniform index in `0..n`, drawn through `u64` so the stream is identical on
/// 32- and 64-bit targets. `n` must be positive.
pub fn uniform_index<R: Rng + ?Sized>(rng: &mut R, n: usize) -> usize {
    rng.gen_range(0..n as u64) as usize
}

/// In-place Fisher–Yates shuffle.
pub fn shuffle<T, R: Rng + ?Sized>(items: &mut [T], rng: &mut R) {
    for i in (1..items.len()).rev() {
        let j = rng.gen_range(0..=i as u64) as usize;
        items.swap(i, j);
    }
}

/// `k` distinct indices from `0..n`, in draw order (partial Fisher–Yates).
pub fn sample_without_replacement<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<usize> {
    assert!(k <= n, "cannot draw {k} of {n} without replacement");
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = i + rng.gen_range(0..(n - i) as u64) as usize;
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool
}

/// Index drawn from unnormalized non-negative weights given their running sum.
pub(crate) fn pick_cumulative<R: Rng + ?Sized>(cumulative: &[f64], rng: &mut R) -> usize {
    let total = *cumulative.last().expect("non-empty weights");
    let u = rng.gen::<f64>() * total;
    let pos = cumulative.partition_point(|&c| c <= u);
    // Zero-weight trailing cells can never be selected.
    pos.min(cumulative.len() - 1)
}
