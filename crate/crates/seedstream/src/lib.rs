//! Deterministic, splittable random streams.
//!
//! Every randomized routine in this workspace draws from a [`Stream`], and every
//! stream is reachable from a single `u64` seed through labelled substreams:
//!
//! ```text
//! root(seed) --substream("dcm-trial", 17)--> trial stream --...
//! ```
//!
//! The generator is ChaCha12 keyed by a hash of the lineage, so two runs with the
//! same seed and the same draw order produce bit-identical results on every
//! platform. Derivation is fixed as follows and must not change:
//!
//! * `ident(root)   = fnv1a64("seedstream-root" || le64(seed))`
//! * `ident(child)  = fnv1a64(le64(ident(parent)) || label || le64(index))`
//! * ChaCha12 key   = 4 consecutive splitmix64 outputs starting from `ident`,
//!   serialized little-endian.
//!
//! Consumers own their draw order. The primitive draws are `next_u64`, the
//! unbiased `below(n)` (rejection sampling, one `next_u64` per attempt), `bit()`
//! (= `below(2)`), and `f64_unit()` (53-bit mantissa in `[0, 1)`). A degenerate
//! all-zero source yields `below(n) == 0` for every `n`, which keeps the
//! documented edge cases (all-zero key bits, identity permutation) honest.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// FNV-1a over a byte slice. Also used by the CLI as a cheap content digest.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Anything that can hand out raw 64-bit words. The provided combinators are
/// the only sampling primitives used across the workspace, so a test double
/// (e.g. an all-zero source) exercises exactly the documented edge behavior.
pub trait RandomSource {
    fn next_u64(&mut self) -> u64;

    /// Unbiased integer in `[0, n)` by rejection sampling.
    fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0) is meaningless");
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % n;
            }
        }
    }

    fn bit(&mut self) -> u8 {
        self.below(2) as u8
    }

    /// Uniform in `[0, 1)` with 53 random mantissa bits.
    fn f64_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }
}

/// A deterministic stream identified by its lineage hash.
#[derive(Clone, Debug)]
pub struct Stream {
    rng: ChaCha12Rng,
    ident: u64,
}

impl Stream {
    pub fn root(seed: u64) -> Self {
        let mut bytes = Vec::with_capacity(24);
        bytes.extend_from_slice(b"seedstream-root");
        bytes.extend_from_slice(&seed.to_le_bytes());
        Self::from_ident(fnv1a64(&bytes))
    }

    /// Child stream addressed by `(label, index)`. Independent of how much the
    /// parent has already been consumed.
    pub fn substream(&self, label: &str, index: u64) -> Self {
        let mut bytes = Vec::with_capacity(16 + label.len());
        bytes.extend_from_slice(&self.ident.to_le_bytes());
        bytes.extend_from_slice(label.as_bytes());
        bytes.extend_from_slice(&index.to_le_bytes());
        Self::from_ident(fnv1a64(&bytes))
    }

    pub fn ident(&self) -> u64 {
        self.ident
    }

    fn from_ident(ident: u64) -> Self {
        let mut state = ident;
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        Stream {
            rng: ChaCha12Rng::from_seed(key),
            ident,
        }
    }
}

impl RandomSource for Stream {
    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
}
