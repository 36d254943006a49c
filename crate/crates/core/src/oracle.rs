//! Brute-force checkers. None of these touch the table's probing logic beyond
//! the public `find`; admissibility is recomputed from the hash constants.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{make_config, TableKind};
use crate::error::Result;
use crate::hashing::mix64;
use crate::keys::{generate_keys, KeySet};
use crate::metrics::{Op, ProbeStats};
use crate::pair::EMPTY_KEY;
use crate::table::{build, BuildMode, HashTable};

/// Exact key -> value map built from a key set.
pub struct ReferenceMap {
    entries: HashMap<u32, u32>,
}

impl ReferenceMap {
    pub fn new(keyset: &KeySet) -> Self {
        ReferenceMap { entries: keyset.pairs().map(|p| (p.key, p.value)).collect() }
    }

    pub fn get(&self, key: u32) -> Option<u32> {
        self.entries.get(&key).copied()
    }

    pub fn contains(&self, key: u32) -> bool {
        self.entries.contains_key(&key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `count` keys drawn uniformly from the key universe and rejected if present.
    pub fn sample_absent(&self, count: usize, seed: u64) -> Vec<u32> {
        let mut rng = ChaCha8Rng::seed_from_u64(mix64(seed ^ 0xA850_7E5D));
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let k = rng.gen_range(0..EMPTY_KEY);
            if !self.contains(k) {
                out.push(k);
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MembershipReport {
    pub false_negatives: usize,
    pub wrong_values: usize,
    pub false_positives: usize,
}

impl MembershipReport {
    pub fn is_clean(&self) -> bool {
        *self == MembershipReport::default()
    }
}

/// Looks up every inserted key and `n_negative` keys known to be absent.
pub fn check_membership(table: &HashTable, keyset: &KeySet, n_negative: usize, seed: u64) -> MembershipReport {
    let reference = ReferenceMap::new(keyset);
    let mut report = MembershipReport::default();
    let mut stats = ProbeStats::new(Op::Find);
    for &key in keyset.keys() {
        match table.find(key, &mut stats) {
            None => report.false_negatives += 1,
            Some(v) if Some(v) != reference.get(key) => report.wrong_values += 1,
            Some(_) => {}
        }
    }
    for key in reference.sample_absent(n_negative, seed) {
        if table.find(key, &mut stats).is_some() {
            report.false_positives += 1;
        }
    }
    report
}

/// Counts stored pairs that sit outside every bucket their key may occupy.
pub fn check_admissibility(table: &HashTable) -> usize {
    let config = table.config();
    let b = config.bucket_size;
    let mut violations = 0;
    for slot in 0..table.store().len() {
        let pair = table.store().load(slot);
        if pair.is_empty() {
            continue;
        }
        let bucket = slot / b;
        let admissible = config.hash_params.iter().any(|p| p.hash(pair.key) == bucket);
        if !admissible {
            violations += 1;
        }
    }
    violations
}

/// Largest key count that builds successfully in at least 99% of `trials`
/// independent attempts on a table of `num_buckets` buckets, found by binary
/// search. Returned as a load factor.
///
/// `param` is the iceberg threshold in slots and is ignored for other kinds.
pub fn brute_force_peak_load(
    kind: TableKind,
    bucket_size: usize,
    param: usize,
    num_buckets: usize,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    let capacity = num_buckets * bucket_size;
    assert!(capacity <= 10_000, "brute-force oracle is for small tables");
    let succeeds = |n: usize| -> Result<bool> {
        if n == 0 {
            return Ok(true);
        }
        if n > capacity {
            return Ok(false);
        }
        let mut ok = 0;
        for trial in 0..trials {
            let trial_seed = mix64(seed ^ mix64(n as u64) ^ (trial as u64).rotate_left(32));
            let keys = generate_keys(trial_seed, n);
            let threshold = (kind == TableKind::Iht).then_some(param);
            let mut config = make_config(kind, n, 1.0, bucket_size, threshold, trial_seed)?;
            // pin the table size; make_config sized it for exactly n keys
            config.num_buckets = num_buckets;
            config.capacity = capacity;
            config.reseed(trial_seed);
            let (_, outcome) = build(&keys, config, BuildMode::Sequential)?;
            ok += outcome.success as usize;
        }
        Ok(ok * 100 >= trials * 99)
    };
    // binary search for the last n with succeeds(n); succeeds(0) holds
    let (mut lo, mut hi) = (0usize, capacity + 1);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if succeeds(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo as f64 / capacity as f64)
}

/// Counts keys whose verdict differs between the early-exit find and a find
/// that always probes every admissible bucket.
pub fn early_exit_disagreements(table: &HashTable, keys: &[u32]) -> usize {
    let mut a = ProbeStats::new(Op::Find);
    let mut b = ProbeStats::new(Op::Find);
    keys.iter().filter(|&&k| table.find(k, &mut a) != table.find_exhaustive(k, &mut b)).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pair::Pair;

    fn built(kind: TableKind, n: usize, lf: f64, seed: u64) -> (HashTable, KeySet) {
        let b = if kind == TableKind::OneCht { 1 } else { 16 };
        let ks = generate_keys(seed, n);
        let config = make_config(kind, n, lf, b, None, seed).unwrap();
        let (t, out) = build(&ks, config, BuildMode::Sequential).unwrap();
        assert!(out.success);
        (t, ks)
    }

    #[test]
    fn successful_builds_are_clean() {
        for kind in TableKind::ALL {
            let (t, ks) = built(kind, 5000, 0.8, 4);
            assert!(check_membership(&t, &ks, 5000, 1).is_clean(), "{kind}");
            assert_eq!(check_admissibility(&t), 0, "{kind}");
        }
    }

    #[test]
    fn corrupted_value_is_reported() {
        let (t, ks) = built(TableKind::Bcht, 2000, 0.8, 5);
        let slot = t.slot_of(ks.keys()[0]).unwrap();
        let p = t.store().load(slot);
        t.store().store_raw(slot, Pair::new(p.key, p.value ^ 1));
        let report = check_membership(&t, &ks, 100, 2);
        assert_eq!(report.wrong_values, 1);
        assert_eq!(report.false_negatives + report.false_positives, 0);
    }

    #[test]
    fn no_negatives_means_no_false_positives() {
        let (t, ks) = built(TableKind::Iht, 2000, 0.8, 6);
        assert_eq!(check_membership(&t, &ks, 0, 0).false_positives, 0);
    }

    #[test]
    fn empty_table_is_admissible() {
        let config = make_config(TableKind::Bp2ht, 100, 0.5, 16, None, 0).unwrap();
        assert_eq!(check_admissibility(&HashTable::new(config).unwrap()), 0);
    }

    #[test]
    fn foreign_key_is_inadmissible() {
        let (t, _) = built(TableKind::Bp2ht, 2000, 0.8, 7);
        // find a key that cannot live in bucket 0
        let foreign = (0u32..).find(|&k| t.admissible_buckets(k).iter().all(|&b| b != 0)).unwrap();
        t.store().store_raw(0, Pair::new(foreign, 1));
        assert_eq!(check_admissibility(&t), 1);
    }

    #[test]
    fn absent_samples_are_absent() {
        let ks = generate_keys(1, 1000);
        let r = ReferenceMap::new(&ks);
        assert_eq!(r.len(), 1000);
        assert!(r.sample_absent(1000, 3).into_iter().all(|k| !r.contains(k)));
    }

    #[test]
    fn brute_force_orders_bcht_above_one_cht() {
        let bcht = brute_force_peak_load(TableKind::Bcht, 16, 0, 16, 100, 1).unwrap();
        let one = brute_force_peak_load(TableKind::OneCht, 1, 0, 256, 100, 1).unwrap();
        assert!(bcht > one, "bcht {bcht} one {one}");
    }
}
