//! Static bucketed hash tables over 8-byte key-value slots.
//!
//! Four table variants share one slot store and one bucket primitive:
//!
//! * [`TableKind::OneCht`]: cuckoo hashing with single-slot buckets and four hash functions.
//! * [`TableKind::Bcht`]: bucketed cuckoo hashing with three hash functions.
//! * [`TableKind::Bp2ht`]: bucketed power-of-two-choices (stable).
//! * [`TableKind::Iht`]: iceberg hashing with a primary and two secondary functions (stable).
//!
//! Every bucket read is counted as one probe, which gives a hardware-independent
//! cost measure for insertion and lookup. The [`experiments`] module drives the
//! load-factor, key-count, positive-ratio and success-rate scenarios and the
//! [`metrics`] module turns probe counts into a sector-traffic estimate.

pub mod bucket;
pub mod config;
pub mod error;
pub mod experiments;
pub mod hashing;
pub mod keys;
pub mod metrics;
pub mod oracle;
pub mod pair;
pub mod store;
pub mod table;

pub use bucket::BucketRef;
pub use config::{make_config, LoadFactor, SecondaryPolicy, TableConfig, TableKind};
pub use error::{Error, Result};
pub use hashing::{draw_hash_params, EvictionRng, HashParams, PRIME};
pub use keys::{generate_keys, generate_queries, Expected, KeySet, Query};
pub use metrics::{predict_sectors, Op, ProbeStats, SectorModel};
pub use pair::{Pair, EMPTY_KEY, EMPTY_PAIR, EMPTY_VALUE};
pub use table::{build, BuildMode, BuildOutcome, HashTable, Lookup};
