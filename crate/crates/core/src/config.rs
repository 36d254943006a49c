use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hashing::{draw_hash_params, mix64, HashParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TableKind {
    #[serde(rename = "1cht")]
    OneCht,
    #[serde(rename = "bcht")]
    Bcht,
    #[serde(rename = "bp2ht")]
    Bp2ht,
    #[serde(rename = "iht")]
    Iht,
}

impl TableKind {
    pub const ALL: [TableKind; 4] = [TableKind::OneCht, TableKind::Bcht, TableKind::Bp2ht, TableKind::Iht];

    pub fn num_hash_functions(self) -> usize {
        match self {
            TableKind::OneCht => 4,
            TableKind::Bcht | TableKind::Iht => 3,
            TableKind::Bp2ht => 2,
        }
    }

    pub fn is_cuckoo(self) -> bool {
        matches!(self, TableKind::OneCht | TableKind::Bcht)
    }

    /// Stable tables never move a pair once placed.
    pub fn is_stable(self) -> bool {
        !self.is_cuckoo()
    }

    pub fn name(self) -> &'static str {
        match self {
            TableKind::OneCht => "1cht",
            TableKind::Bcht => "bcht",
            TableKind::Bp2ht => "bp2ht",
            TableKind::Iht => "iht",
        }
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "1cht" | "onecht" => Ok(TableKind::OneCht),
            "bcht" => Ok(TableKind::Bcht),
            "bp2ht" => Ok(TableKind::Bp2ht),
            "iht" => Ok(TableKind::Iht),
            other => Err(Error::InvalidConfig(format!("unknown table kind `{other}`"))),
        }
    }
}

/// Where an iceberg insertion goes once the primary bucket has reached the
/// threshold.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SecondaryPolicy {
    /// Less loaded secondary while neither secondary is full; otherwise the primary.
    FallbackIfAnyFull,
    /// Less loaded secondary unless both are full; then the primary. Fails
    /// only when all three buckets are full.
    #[default]
    FallbackIfBothFull,
    /// Always the less loaded secondary; fails if it is full.
    SecondaryOnly,
}

impl FromStr for SecondaryPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "any-full" | "fallback_if_any_full" => Ok(SecondaryPolicy::FallbackIfAnyFull),
            "both-full" | "fallback_if_both_full" => Ok(SecondaryPolicy::FallbackIfBothFull),
            "secondary-only" | "secondary_only" => Ok(SecondaryPolicy::SecondaryOnly),
            other => Err(Error::InvalidConfig(format!("unknown secondary policy `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableConfig {
    pub kind: TableKind,
    pub num_buckets: usize,
    pub bucket_size: usize,
    pub capacity: usize,
    /// For iceberg tables: primary first, then the two secondaries.
    pub hash_params: Vec<HashParams>,
    /// Iceberg threshold in slots: the primary bucket takes a pair only while
    /// its load is below this. Zero for other kinds.
    pub threshold: usize,
    /// Evictions allowed per insertion (cuckoo kinds only).
    pub max_chain: usize,
    pub seed: u64,
    #[serde(default)]
    pub secondary_policy: SecondaryPolicy,
}

/// `max(7 * ceil(log2 n), 128)`.
pub fn default_max_chain(n_keys: usize) -> usize {
    let log2 = if n_keys <= 1 { 0 } else { (usize::BITS - (n_keys - 1).leading_zeros()) as usize };
    (7 * log2).max(128)
}

/// Iceberg threshold for a percentage of the bucket size, rounded down.
pub fn threshold_from_pct(pct: u32, bucket_size: usize) -> usize {
    (pct as usize * bucket_size) / 100
}

pub fn make_config(
    kind: TableKind,
    n_keys: usize,
    load_factor: f64,
    bucket_size: usize,
    threshold: Option<usize>,
    seed: u64,
) -> Result<TableConfig> {
    if !(load_factor > 0.0 && load_factor <= 1.0) {
        return Err(Error::InvalidLoadFactor(load_factor));
    }
    if bucket_size == 0 || !bucket_size.is_power_of_two() || bucket_size > 64 {
        return Err(Error::InvalidBucketSize(bucket_size as u32));
    }
    if kind == TableKind::OneCht && bucket_size != 1 {
        return Err(Error::BucketSizeMismatch { kind: "1cht", expected: 1, got: bucket_size as u32 });
    }
    if n_keys == 0 {
        return Err(Error::NoKeys);
    }
    let threshold = match kind {
        TableKind::Iht => {
            let t = threshold.unwrap_or_else(|| threshold_from_pct(80, bucket_size));
            if t == 0 || t > bucket_size {
                return Err(Error::InvalidThreshold { threshold: t as u32, bucket_size: bucket_size as u32 });
            }
            t
        }
        _ => match threshold {
            Some(t) if t > bucket_size => {
                return Err(Error::InvalidThreshold { threshold: t as u32, bucket_size: bucket_size as u32 })
            }
            _ => 0,
        },
    };
    let num_buckets = (n_keys as f64 / (load_factor * bucket_size as f64)).ceil() as usize;
    let num_buckets = num_buckets.max(1);
    let mut config = TableConfig {
        kind,
        num_buckets,
        bucket_size,
        capacity: num_buckets * bucket_size,
        hash_params: Vec::new(),
        threshold,
        max_chain: if kind.is_cuckoo() { default_max_chain(n_keys) } else { 0 },
        seed,
        secondary_policy: SecondaryPolicy::default(),
    };
    config.reseed(seed);
    Ok(config)
}

impl TableConfig {
    /// Replaces the hash constants with a fresh draw derived from `seed`.
    pub fn reseed(&mut self, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(mix64(seed));
        self.hash_params = draw_hash_params(&mut rng, self.kind.num_hash_functions(), self.num_buckets as u64);
        self.seed = seed;
    }

    pub fn with_max_chain(mut self, max_chain: usize) -> Self {
        self.max_chain = max_chain;
        self
    }

    pub fn with_secondary_policy(mut self, policy: SecondaryPolicy) -> Self {
        self.secondary_policy = policy;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.num_buckets == 0 || self.bucket_size == 0 {
            return bad("table must have at least one bucket of at least one slot".into());
        }
        if self.capacity != self.num_buckets * self.bucket_size {
            return bad(format!(
                "capacity {} != {} buckets x {} slots",
                self.capacity, self.num_buckets, self.bucket_size
            ));
        }
        if self.bucket_size > 64 {
            return bad(format!("bucket size {} exceeds 64", self.bucket_size));
        }
        if self.hash_params.len() != self.kind.num_hash_functions() {
            return bad(format!(
                "{} needs {} hash functions, got {}",
                self.kind,
                self.kind.num_hash_functions(),
                self.hash_params.len()
            ));
        }
        if self.hash_params.iter().any(|p| p.range != self.num_buckets as u64) {
            return bad("hash range must equal the bucket count".into());
        }
        if self.kind == TableKind::OneCht && self.bucket_size != 1 {
            return bad("1cht requires bucket size 1".into());
        }
        if self.kind == TableKind::Iht && (self.threshold == 0 || self.threshold > self.bucket_size) {
            return Err(Error::InvalidThreshold {
                threshold: self.threshold as u32,
                bucket_size: self.bucket_size as u32,
            });
        }
        if self.kind.is_cuckoo() && self.max_chain == 0 {
            return bad("cuckoo tables need a positive max_chain".into());
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let config: TableConfig = serde_json::from_str(s)?;
        config.validate()?;
        Ok(config)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LoadFactor {
    pub inserted: usize,
    pub capacity: usize,
}

impl LoadFactor {
    pub fn value(&self) -> f64 {
        if self.capacity == 0 {
            0.0
        } else {
            self.inserted as f64 / self.capacity as f64
        }
    }
}
