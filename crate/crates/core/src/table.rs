//! The four table variants over one slot store.
//!
//! All mutation goes through [`BucketRef::cas_at_slot`] and
//! [`BucketRef::exch_at_slot`], so every insert and find is safe to run from
//! many threads at once without locks. Each bucket snapshot counts as one probe;
//! a failed CAS re-reads the bucket and pays another probe.
//!
//! Insertion always targets slot index `load` of the chosen bucket. With no
//! deletions this keeps occupied slots a dense prefix of every bucket, even
//! under contention: a snapshot never reports more occupied slots than the
//! bucket holds by the time the CAS runs.

use std::path::Path;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use crate::bucket::BucketRef;
use crate::config::{LoadFactor, SecondaryPolicy, TableConfig, TableKind};
use crate::error::{Error, Result};
use crate::hashing::EvictionRng;
use crate::keys::KeySet;
use crate::metrics::{Op, ProbeStats};
use crate::pair::{Pair, EMPTY_PAIR};
use crate::store::SlotStore;

pub const MAX_HASH_FUNCTIONS: usize = 4;

/// Result of a lookup.
pub type Lookup = Option<u32>;

pub struct HashTable {
    config: TableConfig,
    store: SlotStore,
    inserted: AtomicUsize,
}

impl HashTable {
    pub fn new(config: TableConfig) -> Result<Self> {
        config.validate()?;
        let store = SlotStore::new(config.num_buckets, config.bucket_size);
        Ok(HashTable { config, store, inserted: AtomicUsize::new(0) })
    }

    pub fn config(&self) -> &TableConfig {
        &self.config
    }

    pub fn kind(&self) -> TableKind {
        self.config.kind
    }

    pub fn store(&self) -> &SlotStore {
        &self.store
    }

    pub fn capacity(&self) -> usize {
        self.config.capacity
    }

    /// Successful insertions so far.
    pub fn len(&self) -> usize {
        self.inserted.load(Ordering::Acquire)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn load_factor(&self) -> LoadFactor {
        LoadFactor { inserted: self.len(), capacity: self.capacity() }
    }

    /// Non-empty slots, counted by scanning the store.
    pub fn occupied_slots(&self) -> usize {
        (0..self.store.len()).filter(|&i| !self.store.load(i).is_empty()).count()
    }

    #[inline]
    pub fn bucket(&self, index: usize) -> BucketRef<'_> {
        let b = self.config.bucket_size;
        BucketRef::new(&self.store.slots()[index * b..(index + 1) * b])
    }

    /// Bucket chosen by hash function `function` (for iceberg tables: 0 is the
    /// primary, 1 and 2 the secondaries).
    #[inline]
    pub fn bucket_index(&self, function: usize, key: u32) -> usize {
        self.config.hash_params[function].hash(key)
    }

    /// Every bucket `key` may legally occupy, in probe order.
    pub fn admissible_buckets(&self, key: u32) -> Vec<usize> {
        (0..self.config.kind.num_hash_functions()).map(|i| self.bucket_index(i, key)).collect()
    }

    /// Global slot index currently holding `key`, if any.
    pub fn slot_of(&self, key: u32) -> Option<usize> {
        let b = self.config.bucket_size;
        self.admissible_buckets(key)
            .into_iter()
            .find_map(|bucket| (bucket * b..(bucket + 1) * b).find(|&i| self.store.load(i).key == key))
    }

    pub fn insert(&self, pair: Pair, rng: &mut EvictionRng, stats: &mut ProbeStats) -> bool {
        let ok = match self.config.kind {
            TableKind::OneCht | TableKind::Bcht => self.bcht_insert(pair, rng, stats),
            TableKind::Bp2ht => self.bp2ht_insert(pair, stats),
            TableKind::Iht => self.iht_insert(pair, stats),
        };
        if ok {
            self.inserted.fetch_add(1, Ordering::AcqRel);
        }
        ok
    }

    pub fn find(&self, key: u32, stats: &mut ProbeStats) -> Lookup {
        match self.config.kind {
            TableKind::OneCht | TableKind::Bcht => self.bcht_find(key, stats),
            TableKind::Bp2ht => self.bp2ht_find(key, stats),
            TableKind::Iht => self.iht_find(key, stats),
        }
    }

    /// Probes every admissible bucket in order, stopping only on a hit.
    pub fn find_exhaustive(&self, key: u32, stats: &mut ProbeStats) -> Lookup {
        let mut probes = 0;
        let mut found = None;
        for function in 0..self.config.kind.num_hash_functions() {
            probes += 1;
            found = self.bucket(self.bucket_index(function, key)).find_key_value(key);
            if found.is_some() {
                break;
            }
        }
        stats.record_op(probes);
        found
    }

    /// Cuckoo insertion. Starts at the first function's bucket; a full bucket
    /// swaps the carried pair with a random resident, and the evicted pair moves
    /// on to the bucket of the function after the one that placed it.
    ///
    /// On failure some pair (not necessarily `pair`) is left homeless and the
    /// build is unusable.
    pub fn bcht_insert(&self, pair: Pair, rng: &mut EvictionRng, stats: &mut ProbeStats) -> bool {
        debug_assert!(self.config.kind.is_cuckoo());
        let bucket_size = self.config.bucket_size;
        let mut carried = pair;
        let mut bucket_id = self.bucket_index(0, carried.key);
        let mut chain = 0usize;
        let mut probes = 0u64;
        loop {
            let bucket = self.bucket(bucket_id);
            let load = bucket.snapshot().load();
            probes += 1;
            if load == bucket_size {
                if chain == self.config.max_chain {
                    stats.record_op(probes);
                    return false;
                }
                let victim = rng.next_below(bucket_size as u32) as usize;
                carried = bucket.exch_at_slot(carried, victim);
                if carried.is_empty() {
                    break;
                }
                bucket_id = self.next_cuckoo_bucket(carried.key, bucket_id);
                chain += 1;
            } else if bucket.cas_at_slot(carried, load) == EMPTY_PAIR {
                break;
            }
        }
        stats.record_op(probes);
        true
    }

    /// Lowest-index function mapping `key` to `previous` picks the successor
    /// function; if none does, start over at function 0.
    #[inline]
    fn next_cuckoo_bucket(&self, key: u32, previous: usize) -> usize {
        let h = self.config.kind.num_hash_functions();
        let mut buckets = [0usize; MAX_HASH_FUNCTIONS];
        for (i, slot) in buckets.iter_mut().enumerate().take(h) {
            *slot = self.bucket_index(i, key);
        }
        match buckets[..h].iter().position(|&b| b == previous) {
            Some(i) => buckets[(i + 1) % h],
            None => buckets[0],
        }
    }

    /// Probes buckets in function order. A bucket that is not full and lacks
    /// the key ends the search: with no deletions, a key whose earlier bucket
    /// had room would never have been pushed further.
    pub fn bcht_find(&self, key: u32, stats: &mut ProbeStats) -> Lookup {
        let mut probes = 0;
        let mut found = None;
        for function in 0..self.config.kind.num_hash_functions() {
            let snap = self.bucket(self.bucket_index(function, key)).snapshot();
            probes += 1;
            found = snap.find(key);
            if found.is_some() || !snap.is_full() {
                break;
            }
        }
        stats.record_op(probes);
        found
    }

    /// Reads both candidate buckets and claims a slot in the less loaded one,
    /// ties going to the first.
    pub fn bp2ht_insert(&self, pair: Pair, stats: &mut ProbeStats) -> bool {
        let bucket_size = self.config.bucket_size;
        let ids = [self.bucket_index(0, pair.key), self.bucket_index(1, pair.key)];
        let mut probes = 0;
        loop {
            let load0 = self.bucket(ids[0]).compute_load();
            let load1 = self.bucket(ids[1]).compute_load();
            probes += 2;
            if load0 == bucket_size && load1 == bucket_size {
                stats.record_op(probes);
                return false;
            }
            let (id, load) = if load0 <= load1 { (ids[0], load0) } else { (ids[1], load1) };
            if self.bucket(id).cas_at_slot(pair, load) == EMPTY_PAIR {
                stats.record_op(probes);
                return true;
            }
        }
    }

    pub fn bp2ht_find(&self, key: u32, stats: &mut ProbeStats) -> Lookup {
        let mut found = self.bucket(self.bucket_index(0, key)).find_key_value(key);
        let mut probes = 1;
        if found.is_none() {
            found = self.bucket(self.bucket_index(1, key)).find_key_value(key);
            probes += 1;
        }
        stats.record_op(probes);
        found
    }

    /// Fills the primary bucket while its load is below the threshold, then
    /// moves to the less loaded secondary. What happens when secondaries are
    /// full depends on [`SecondaryPolicy`].
    pub fn iht_insert(&self, pair: Pair, stats: &mut ProbeStats) -> bool {
        let bucket_size = self.config.bucket_size;
        let threshold = self.config.threshold;
        let primary = self.bucket_index(0, pair.key);
        let mut probes = 0;
        loop {
            let mut target = primary;
            let mut load = self.bucket(primary).compute_load();
            probes += 1;
            if load >= threshold {
                let ids = [self.bucket_index(1, pair.key), self.bucket_index(2, pair.key)];
                let load0 = self.bucket(ids[0]).compute_load();
                let load1 = self.bucket(ids[1]).compute_load();
                probes += 2;
                let use_secondary = match self.config.secondary_policy {
                    SecondaryPolicy::FallbackIfAnyFull => load0 != bucket_size && load1 != bucket_size,
                    SecondaryPolicy::FallbackIfBothFull => load0 != bucket_size || load1 != bucket_size,
                    SecondaryPolicy::SecondaryOnly => true,
                };
                if use_secondary {
                    (target, load) = if load0 <= load1 { (ids[0], load0) } else { (ids[1], load1) };
                }
            }
            if load == bucket_size {
                stats.record_op(probes);
                return false;
            }
            if self.bucket(target).cas_at_slot(pair, load) == EMPTY_PAIR {
                stats.record_op(probes);
                return true;
            }
        }
    }

    /// Primary, then each secondary in turn; stops at the first hit.
    pub fn iht_find(&self, key: u32, stats: &mut ProbeStats) -> Lookup {
        self.find_exhaustive(key, stats)
    }

    pub fn dump(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.store.to_le_bytes())?;
        Ok(())
    }
}

impl std::fmt::Debug for HashTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HashTable")
            .field("kind", &self.config.kind)
            .field("num_buckets", &self.config.num_buckets)
            .field("bucket_size", &self.config.bucket_size)
            .field("inserted", &self.len())
            .finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BuildMode {
    /// Keys in order, one eviction generator. Bit-reproducible.
    Sequential,
    /// Contiguous key ranges across worker threads, one generator each.
    Parallel(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BuildOutcome {
    pub success: bool,
    pub inserted: usize,
    pub failed_key: Option<u32>,
    pub probes: ProbeStats,
}

/// Inserts every key of `keyset`, stopping at the first failure.
pub fn build(keyset: &KeySet, config: TableConfig, mode: BuildMode) -> Result<(HashTable, BuildOutcome)> {
    if keyset.len() > config.capacity {
        return Err(Error::OverCapacity { n: keyset.len(), capacity: config.capacity });
    }
    let table = HashTable::new(config)?;
    let seed = table.config.seed;
    let outcome = match mode {
        BuildMode::Sequential | BuildMode::Parallel(0 | 1) => {
            let mut rng = EvictionRng::new(seed, 0);
            let mut stats = ProbeStats::new(Op::Insert);
            let mut failed_key = None;
            for pair in keyset.pairs() {
                if !table.insert(pair, &mut rng, &mut stats) {
                    failed_key = Some(pair.key);
                    break;
                }
            }
            BuildOutcome { success: failed_key.is_none(), inserted: table.len(), failed_key, probes: stats }
        }
        BuildMode::Parallel(workers) => {
            let stop = AtomicBool::new(false);
            let chunk = keyset.len().div_ceil(workers).max(1);
            let results: Vec<(ProbeStats, Option<u32>)> = std::thread::scope(|scope| {
                let handles: Vec<_> = keyset
                    .keys()
                    .chunks(chunk)
                    .enumerate()
                    .map(|(worker, keys)| {
                        let (table, stop) = (&table, &stop);
                        scope.spawn(move || {
                            let mut rng = EvictionRng::new(seed, worker as u64 + 1);
                            let mut stats = ProbeStats::new(Op::Insert);
                            for &key in keys {
                                if stop.load(Ordering::Relaxed) {
                                    break;
                                }
                                let pair = Pair::new(key, crate::keys::value_for(key));
                                if !table.insert(pair, &mut rng, &mut stats) {
                                    stop.store(true, Ordering::Relaxed);
                                    return (stats, Some(key));
                                }
                            }
                            (stats, None)
                        })
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("build worker panicked")).collect()
            });
            let mut stats = ProbeStats::new(Op::Insert);
            let mut failed_key = None;
            for (s, failed) in &results {
                stats.merge(s);
                failed_key = failed_key.or(*failed);
            }
            BuildOutcome { success: failed_key.is_none(), inserted: table.len(), failed_key, probes: stats }
        }
    };
    Ok((table, outcome))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::make_config;
    use crate::hashing::HashParams;
    use crate::keys::{generate_keys, value_for};

    fn table(kind: TableKind, n: usize, lf: f64, b: usize, seed: u64) -> HashTable {
        HashTable::new(make_config(kind, n, lf, b, None, seed).unwrap()).unwrap()
    }

    #[test]
    fn insert_into_empty_table_costs_one_probe() {
        let t = table(TableKind::Bcht, 1000, 0.5, 16, 1);
        let mut rng = EvictionRng::new(0, 0);
        let mut stats = ProbeStats::new(Op::Insert);
        assert!(t.insert(Pair::new(7, 42), &mut rng, &mut stats));
        assert_eq!((stats.total_ops, stats.total_probes), (1, 1));

        let mut q = ProbeStats::new(Op::Find);
        assert_eq!(t.find(7, &mut q), Some(42));
        assert_eq!(q.total_probes, 1);
    }

    #[test]
    fn bcht_absent_key_exits_early() {
        let t = table(TableKind::Bcht, 1000, 0.5, 16, 2);
        let mut q = ProbeStats::new(Op::Find);
        assert_eq!(t.find(12345, &mut q), None);
        assert_eq!(q.total_probes, 1);
    }

    #[test]
    fn bp2ht_probe_counts() {
        let t = table(TableKind::Bp2ht, 1000, 0.5, 16, 3);
        let mut stats = ProbeStats::new(Op::Insert);
        let mut rng = EvictionRng::new(0, 0);
        assert!(t.insert(Pair::new(7, 42), &mut rng, &mut stats));
        assert_eq!(stats.total_probes, 2);
        let mut q = ProbeStats::new(Op::Find);
        assert_eq!(t.find(99, &mut q), None);
        assert_eq!(q.total_probes, 2);
        // tie goes to the first bucket, so the key is found in one probe
        let mut q = ProbeStats::new(Op::Find);
        assert_eq!(t.find(7, &mut q), Some(42));
        assert_eq!(q.total_probes, 1);
    }

    /// Hand-built config so the test controls exactly which bucket each key hits.
    fn fixed_config(kind: TableKind, num_buckets: usize, bucket_size: usize, params: Vec<HashParams>) -> TableConfig {
        TableConfig {
            kind,
            num_buckets,
            bucket_size,
            capacity: num_buckets * bucket_size,
            hash_params: params,
            threshold: if kind == TableKind::Iht { 2 } else { 0 },
            max_chain: if kind.is_cuckoo() { 16 } else { 0 },
            seed: 0,
            secondary_policy: SecondaryPolicy::FallbackIfAnyFull,
        }
    }

    #[test]
    fn bp2ht_fails_when_both_buckets_full() {
        // h0(k) = k mod 2, h1(k) = (k + 1) mod 2: every key sees both buckets
        let params = vec![HashParams::new(1, 0, 2), HashParams::new(1, 1, 2)];
        let t = HashTable::new(fixed_config(TableKind::Bp2ht, 2, 2, params)).unwrap();
        let mut rng = EvictionRng::new(0, 0);
        let mut stats = ProbeStats::new(Op::Insert);
        for k in 0..4 {
            assert!(t.insert(Pair::new(k, k), &mut rng, &mut stats));
        }
        assert!(!t.insert(Pair::new(4, 4), &mut rng, &mut stats));
        assert_eq!(t.len(), 4);
    }

    #[test]
    fn iht_probe_counts_and_threshold() {
        // primary = k mod 3, secondaries = (k + 1) mod 3 and (k + 2) mod 3
        let params = vec![HashParams::new(1, 0, 3), HashParams::new(1, 1, 3), HashParams::new(1, 2, 3)];
        let t = HashTable::new(fixed_config(TableKind::Iht, 3, 4, params)).unwrap();
        let mut rng = EvictionRng::new(0, 0);
        // keys 0, 3, 6 share primary bucket 0; with threshold 2 a load of 2 diverts
        let mut s = ProbeStats::new(Op::Insert);
        assert!(t.insert(Pair::new(0, 0), &mut rng, &mut s));
        assert!(t.insert(Pair::new(3, 3), &mut rng, &mut s));
        assert_eq!(s.total_probes, 2);
        let mut s = ProbeStats::new(Op::Insert);
        assert!(t.insert(Pair::new(6, 6), &mut rng, &mut s));
        assert_eq!(s.total_probes, 3);
        // 6 went to secondary (6+1) mod 3 = 1
        assert_eq!(t.slot_of(6), Some(4));
        let mut q = ProbeStats::new(Op::Find);
        assert_eq!(t.find(6, &mut q), Some(6));
        assert_eq!(q.total_probes, 2);
        let mut q = ProbeStats::new(Op::Find);
        assert_eq!(t.find(9, &mut q), None);
        assert_eq!(q.total_probes, 3);
    }

    #[test]
    fn iht_secondary_policies() {
        let params = vec![HashParams::new(1, 0, 3), HashParams::new(1, 1, 3), HashParams::new(1, 2, 3)];
        let config = fixed_config(TableKind::Iht, 3, 2, params);
        let fresh = |policy| {
            let t = HashTable::new(config.clone().with_secondary_policy(policy)).unwrap();
            // bucket 1 full, bucket 0 half full, bucket 2 empty
            t.store().store_raw(2, Pair::new(100, 1));
            t.store().store_raw(3, Pair::new(101, 1));
            t.store().store_raw(0, Pair::new(102, 1));
            t
        };
        let mut rng = EvictionRng::new(0, 0);

        // primary load 1 is below threshold 2, so key 0 stays in the primary
        let t = fresh(SecondaryPolicy::FallbackIfAnyFull);
        assert!(t.insert(Pair::new(0, 7), &mut rng, &mut ProbeStats::new(Op::Insert)));
        assert_eq!(t.slot_of(0), Some(1));
        // primary now full; secondary 1 full sends the pair back to the full primary
        let mut s = ProbeStats::new(Op::Insert);
        assert!(!t.insert(Pair::new(3, 7), &mut rng, &mut s));
        assert_eq!(s.total_probes, 3);

        for policy in [SecondaryPolicy::FallbackIfBothFull, SecondaryPolicy::SecondaryOnly] {
            let t = fresh(policy);
            t.store().store_raw(1, Pair::new(103, 1));
            assert!(t.insert(Pair::new(3, 7), &mut rng, &mut ProbeStats::new(Op::Insert)));
            assert_eq!(t.slot_of(3), Some(4), "{policy:?}");
        }
    }

    #[test]
    fn iht_uses_primary_only_when_both_secondaries_are_full() {
        let params = vec![HashParams::new(1, 0, 3), HashParams::new(1, 1, 3), HashParams::new(1, 2, 3)];
        let mut config = fixed_config(TableKind::Iht, 3, 4, params);
        config.threshold = 1;
        for policy in [SecondaryPolicy::FallbackIfBothFull, SecondaryPolicy::SecondaryOnly] {
            let t = HashTable::new(config.clone().with_secondary_policy(policy)).unwrap();
            for slot in 4..12 {
                t.store().store_raw(slot, Pair::new(1000 + slot as u32, 1));
            }
            t.store().store_raw(0, Pair::new(999, 1));
            let ok = t.insert(Pair::new(0, 7), &mut EvictionRng::new(0, 0), &mut ProbeStats::new(Op::Insert));
            match policy {
                SecondaryPolicy::FallbackIfBothFull => assert_eq!(t.slot_of(0), Some(1)),
                _ => assert!(!ok),
            }
        }
    }

    #[test]
    fn cuckoo_rotation_moves_to_next_function() {
        // h0 = k mod 4, h1 = (k + 1) mod 4, h2 = (k + 2) mod 4 with one-slot buckets
        let params = vec![HashParams::new(1, 0, 4), HashParams::new(1, 1, 4), HashParams::new(1, 2, 4)];
        let t = HashTable::new(fixed_config(TableKind::Bcht, 4, 1, params)).unwrap();
        let mut rng = EvictionRng::new(0, 0);
        let mut s = ProbeStats::new(Op::Insert);
        assert!(t.insert(Pair::new(0, 0), &mut rng, &mut s));
        // key 4 also hashes to bucket 0 first: evicts 0, which moves to h1(0) = 1
        assert!(t.insert(Pair::new(4, 4), &mut rng, &mut s));
        assert_eq!(t.slot_of(4), Some(0));
        assert_eq!(t.slot_of(0), Some(1));
        assert_eq!(s.total_probes, 1 + 2);
    }

    #[test]
    fn cuckoo_cycle_fails_at_max_chain() {
        // Two one-slot buckets, two functions, three keys that only ever map
        // to buckets {0, 1}: the third key can never be placed.
        let params = vec![HashParams::new(1, 0, 2), HashParams::new(1, 1, 2)];
        let mut config = fixed_config(TableKind::Bcht, 2, 1, params.clone());
        config.kind = TableKind::Bcht;
        // validate() wants 3 functions for BCHT; pad with a duplicate of h1
        config.hash_params.push(params[1]);
        config.max_chain = 10;
        let t = HashTable::new(config).unwrap();
        let mut rng = EvictionRng::new(0, 0);
        let mut s = ProbeStats::new(Op::Insert);
        assert!(t.insert(Pair::new(0, 0), &mut rng, &mut s));
        assert!(t.insert(Pair::new(1, 1), &mut rng, &mut s));
        let mut s = ProbeStats::new(Op::Insert);
        assert!(!t.insert(Pair::new(2, 2), &mut rng, &mut s));
        assert_eq!(s.total_probes, 11);
        assert_eq!(t.occupied_slots(), 2);
    }

    #[test]
    fn empty_build_succeeds() {
        let ks = KeySet::from_keys(vec![], 0).unwrap();
        let config = make_config(TableKind::Bcht, 10, 0.5, 16, None, 0).unwrap();
        let (t, out) = build(&ks, config, BuildMode::Sequential).unwrap();
        assert!(out.success);
        assert_eq!((out.inserted, out.probes.total_probes), (0, 0));
        assert!(t.is_empty());
    }

    #[test]
    fn over_capacity_is_rejected() {
        let ks = generate_keys(1, 17);
        let config = make_config(TableKind::Bcht, 16, 1.0, 16, None, 0).unwrap();
        assert!(matches!(build(&ks, config, BuildMode::Sequential), Err(Error::OverCapacity { .. })));
    }

    #[test]
    fn sequential_build_is_bit_reproducible() {
        for kind in TableKind::ALL {
            let b = if kind == TableKind::OneCht { 1 } else { 16 };
            let ks = generate_keys(5, 20_000);
            let config = make_config(kind, ks.len(), 0.85, b, None, 77).unwrap();
            let (a, oa) = build(&ks, config.clone(), BuildMode::Sequential).unwrap();
            let (b, ob) = build(&ks, config, BuildMode::Sequential).unwrap();
            assert!(oa.success, "{kind}");
            assert_eq!(oa, ob);
            assert_eq!(a.store().snapshot(), b.store().snapshot());
        }
    }

    #[test]
    fn lookups_return_inserted_values() {
        for kind in TableKind::ALL {
            let b = if kind == TableKind::OneCht { 1 } else { 16 };
            let ks = generate_keys(9, 10_000);
            let config = make_config(kind, ks.len(), 0.8, b, None, 3).unwrap();
            let (t, out) = build(&ks, config, BuildMode::Parallel(4)).unwrap();
            assert!(out.success, "{kind}");
            assert_eq!(t.occupied_slots(), ks.len());
            let mut q = ProbeStats::new(Op::Find);
            for &k in ks.keys() {
                assert_eq!(t.find(k, &mut q), Some(value_for(k)), "{kind}");
            }
        }
    }

    #[test]
    fn dump_has_one_word_per_slot() {
        let t = table(TableKind::Bcht, 100, 0.5, 16, 1);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("store.bin");
        t.dump(&path).unwrap();
        assert_eq!(std::fs::metadata(&path).unwrap().len() as usize, t.capacity() * 8);
    }
}
