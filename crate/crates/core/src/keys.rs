//! Unique key sets and query workloads.
//!
//! Keys are drawn uniformly from `[0, 2^32 - 2]` with a seeded ChaCha8
//! stream; duplicates are rejected against a hash set. Values are derived from
//! keys (`key ^ VALUE_MASK`) so lookups can be checked without a side table.
//!
//! Binary key files are a bare sequence of little-endian `u32` keys.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hashing::mix64;
use crate::pair::{Pair, EMPTY_KEY, EMPTY_VALUE};

pub const VALUE_MASK: u32 = 0x5A5A_5A5A;

/// Value stored alongside `key`. Never the sentinel for a valid key.
#[inline]
pub fn value_for(key: u32) -> u32 {
    let v = key ^ VALUE_MASK;
    // key == 0xA5A5A5A5 is the only key that would map to the sentinel
    if v == EMPTY_VALUE {
        VALUE_MASK
    } else {
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeySet {
    keys: Vec<u32>,
    seed: u64,
}

impl KeySet {
    /// Wraps caller-supplied keys. Rejects duplicates and the sentinel.
    pub fn from_keys(keys: Vec<u32>, seed: u64) -> Result<Self> {
        let mut seen = HashSet::with_capacity(keys.len());
        for &k in &keys {
            if k == EMPTY_KEY {
                return Err(Error::InvalidConfig("key set contains the empty sentinel".into()));
            }
            if !seen.insert(k) {
                return Err(Error::InvalidConfig(format!("duplicate key {k}")));
            }
        }
        Ok(KeySet { keys, seed })
    }

    pub fn keys(&self) -> &[u32] {
        &self.keys
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = Pair> + '_ {
        self.keys.iter().map(|&k| Pair::new(k, value_for(k)))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        for k in &self.keys {
            out.write_all(&k.to_le_bytes())?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>, seed: u64) -> Result<Self> {
        let mut bytes = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut bytes)?;
        if bytes.len() % 4 != 0 {
            return Err(Error::InvalidConfig(format!("key file length {} is not a multiple of 4", bytes.len())));
        }
        let keys = bytes.chunks_exact(4).map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]])).collect();
        Self::from_keys(keys, seed)
    }
}

/// `n` distinct keys, uniform over `[0, 2^32 - 2]`.
pub fn generate_keys(seed: u64, n: usize) -> KeySet {
    assert!(n < u32::MAX as usize, "key universe holds 2^32 - 1 keys");
    let mut rng = ChaCha8Rng::seed_from_u64(mix64(seed));
    let mut seen = HashSet::with_capacity(n);
    let mut keys = Vec::with_capacity(n);
    while keys.len() < n {
        let k = rng.gen_range(0..EMPTY_KEY);
        if seen.insert(k) {
            keys.push(k);
        }
    }
    KeySet { keys, seed }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expected {
    Present(u32),
    Absent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Query {
    pub key: u32,
    pub expected: Expected,
}

/// A shuffled workload of `q` lookups, `round(positive_ratio * q)` of them for
/// keys in `keyset` (sampled without replacement) and the rest for keys
/// guaranteed absent.
pub fn generate_queries(keyset: &KeySet, positive_ratio: f64, q: usize, seed: u64) -> Result<Vec<Query>> {
    if !(0.0..=1.0).contains(&positive_ratio) || positive_ratio.is_nan() {
        return Err(Error::InvalidRatio(positive_ratio));
    }
    let positives = (positive_ratio * q as f64).round() as usize;
    if positives > keyset.len() {
        return Err(Error::NotEnoughKeys { wanted: positives, available: keyset.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(mix64(seed ^ 0x51_7CC1_B727_220A));
    let mut queries = Vec::with_capacity(q);
    for i in rand::seq::index::sample(&mut rng, keyset.len(), positives) {
        let key = keyset.keys[i];
        queries.push(Query { key, expected: Expected::Present(value_for(key)) });
    }
    if positives < q {
        let members: HashSet<u32> = keyset.keys.iter().copied().collect();
        while queries.len() < q {
            let key = rng.gen_range(0..EMPTY_KEY);
            if !members.contains(&key) {
                queries.push(Query { key, expected: Expected::Absent });
            }
        }
    }
    queries.shuffle(&mut rng);
    Ok(queries)
}
