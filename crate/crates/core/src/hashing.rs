//! Universal hash family `h(k) = ((alpha * k + beta) mod p) mod L` and the
//! xorshift generator used to pick eviction victims.

use rand::Rng;
use serde::{Deserialize, Serialize};

/// Largest prime below 2^32.
pub const PRIME: u64 = 4_294_967_291;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HashParams {
    pub alpha: u64,
    pub beta: u64,
    /// Number of buckets the hash maps into.
    pub range: u64,
}

impl HashParams {
    pub fn new(alpha: u64, beta: u64, range: u64) -> Self {
        debug_assert!((1..PRIME).contains(&alpha));
        debug_assert!(beta < PRIME);
        debug_assert!(range >= 1);
        HashParams { alpha, beta, range }
    }

    /// With alpha, beta < p < 2^32 the intermediate `alpha * key + beta` is at
    /// most `(p - 1) * 2^32`, so it never overflows 64 bits.
    #[inline]
    pub fn hash(&self, key: u32) -> usize {
        (((self.alpha * key as u64 + self.beta) % PRIME) % self.range) as usize
    }
}

pub fn hash(params: &HashParams, key: u32) -> usize {
    params.hash(key)
}

/// Draws `count` independent parameter pairs with alpha in [1, p-1] and beta in [0, p-1].
pub fn draw_hash_params<R: Rng + ?Sized>(rng: &mut R, count: usize, range: u64) -> Vec<HashParams> {
    (0..count).map(|_| HashParams::new(rng.gen_range(1..PRIME), rng.gen_range(0..PRIME), range)).collect()
}

/// SplitMix64 finalizer, used to spread seeds before they reach other generators.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Marsaglia's 64-bit xorshift with shift triple (13, 7, 17); period 2^64 - 1.
///
/// One instance belongs to one insertion worker.
#[derive(Clone, Debug)]
pub struct EvictionRng {
    state: u64,
}

impl EvictionRng {
    pub fn new(seed: u64, worker: u64) -> Self {
        let mut state = mix64(seed ^ mix64(worker));
        if state == 0 {
            state = 0x2545_F491_4F6C_DD1D;
        }
        EvictionRng { state }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.state = x;
        x
    }

    /// Uniform in `[0, bound)` by multiply-high on the top 32 bits. Exact for
    /// power-of-two bounds, which is every bucket size the tables accept.
    #[inline]
    pub fn next_below(&mut self, bound: u32) -> u32 {
        debug_assert!(bound > 0);
        (((self.next_u64() >> 32) * bound as u64) >> 32) as u32
    }
}
