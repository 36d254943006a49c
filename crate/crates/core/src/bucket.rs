//! The bucket primitive: a view of `b` contiguous slots with load, find,
//! compare-and-swap and exchange.
//!
//! [`BucketRef::snapshot`] reads every slot once; that read is what the tables
//! count as one probe. The atomic operations act on a single 64-bit slot so a
//! pair is never observed torn.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::pair::{Pair, EMPTY_PAIR};

/// Largest supported bucket; snapshots live on the stack.
pub const MAX_BUCKET_SIZE: usize = 64;

#[derive(Clone, Copy)]
pub struct BucketRef<'a> {
    slots: &'a [AtomicU64],
}

impl<'a> BucketRef<'a> {
    pub fn new(slots: &'a [AtomicU64]) -> Self {
        debug_assert!(!slots.is_empty() && slots.len() <= MAX_BUCKET_SIZE);
        BucketRef { slots }
    }

    #[inline]
    pub fn bucket_size(&self) -> usize {
        self.slots.len()
    }

    /// One read of every slot.
    #[inline]
    pub fn snapshot(&self) -> BucketSnapshot {
        let mut words = [EMPTY_PAIR.to_bits(); MAX_BUCKET_SIZE];
        for (w, s) in words.iter_mut().zip(self.slots) {
            *w = s.load(Ordering::Acquire);
        }
        BucketSnapshot { words, len: self.slots.len() }
    }

    #[inline]
    pub fn compute_load(&self) -> usize {
        self.snapshot().load()
    }

    #[inline]
    pub fn find_key_value(&self, key: u32) -> Option<u32> {
        self.snapshot().find(key)
    }

    /// Installs `pair` at `slot` if the slot is empty. Returns the slot's prior
    /// contents; `EMPTY_PAIR` means the pair was installed.
    #[inline]
    pub fn cas_at_slot(&self, pair: Pair, slot: usize) -> Pair {
        debug_assert!(!pair.is_empty());
        match self.slots[slot].compare_exchange(
            EMPTY_PAIR.to_bits(),
            pair.to_bits(),
            Ordering::AcqRel,
            Ordering::Acquire,
        ) {
            Ok(prev) | Err(prev) => Pair::from_bits(prev),
        }
    }

    /// Swaps `pair` into `slot` unconditionally and returns what was there.
    #[inline]
    pub fn exch_at_slot(&self, pair: Pair, slot: usize) -> Pair {
        Pair::from_bits(self.slots[slot].swap(pair.to_bits(), Ordering::AcqRel))
    }
}

/// Point-in-time copy of a bucket's slots.
#[derive(Clone, Copy)]
pub struct BucketSnapshot {
    words: [u64; MAX_BUCKET_SIZE],
    len: usize,
}

impl BucketSnapshot {
    /// Number of occupied slots.
    #[inline]
    pub fn load(&self) -> usize {
        self.words[..self.len].iter().filter(|&&w| !Pair::from_bits(w).is_empty()).count()
    }

    #[inline]
    pub fn is_full(&self) -> bool {
        self.load() == self.len
    }

    /// Value of the lowest slot holding `key`.
    #[inline]
    pub fn find(&self, key: u32) -> Option<u32> {
        self.words[..self.len].iter().map(|&w| Pair::from_bits(w)).find(|p| p.key == key).map(|p| p.value)
    }

    pub fn pairs(&self) -> impl Iterator<Item = Pair> + '_ {
        self.words[..self.len].iter().map(|&w| Pair::from_bits(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::SlotStore;
    use std::sync::atomic::AtomicUsize;
    use std::sync::Barrier;

    fn bucket(store: &SlotStore) -> BucketRef<'_> {
        BucketRef::new(store.slots())
    }

    #[test]
    fn load_counts_occupied_slots() {
        let s = SlotStore::new(1, 16);
        assert_eq!(bucket(&s).compute_load(), 0);
        for i in 0..16 {
            s.store_raw(i, Pair::new(i as u32, 0));
        }
        assert_eq!(bucket(&s).compute_load(), 16);

        let s = SlotStore::new(1, 8);
        for i in 0..3 {
            s.store_raw(i, Pair::new(100 + i as u32, 0));
        }
        assert_eq!(bucket(&s).compute_load(), 3);
    }

    #[test]
    fn find_key_value_cases() {
        let s = SlotStore::new(1, 16);
        assert_eq!(bucket(&s).find_key_value(7), None);
        s.store_raw(3, Pair::new(7, 42));
        assert_eq!(bucket(&s).find_key_value(7), Some(42));
        assert_eq!(bucket(&s).find_key_value(8), None);
    }

    #[test]
    fn find_prefers_lowest_slot() {
        let s = SlotStore::new(1, 4);
        s.store_raw(1, Pair::new(7, 1));
        s.store_raw(2, Pair::new(7, 2));
        assert_eq!(bucket(&s).find_key_value(7), Some(1));
    }

    #[test]
    fn cas_only_fills_empty_slots() {
        let s = SlotStore::new(1, 4);
        let b = bucket(&s);
        assert_eq!(b.cas_at_slot(Pair::new(7, 42), 0), EMPTY_PAIR);
        assert_eq!(s.load(0), Pair::new(7, 42));
        s.store_raw(1, Pair::new(3, 9));
        assert_eq!(b.cas_at_slot(Pair::new(7, 42), 1), Pair::new(3, 9));
        assert_eq!(s.load(1), Pair::new(3, 9));
    }

    #[test]
    fn exchange_swaps_and_restores() {
        let s = SlotStore::new(1, 4);
        let b = bucket(&s);
        assert_eq!(b.exch_at_slot(Pair::new(7, 42), 2), EMPTY_PAIR);
        s.store_raw(0, Pair::new(3, 9));
        let prev = b.exch_at_slot(Pair::new(7, 42), 0);
        assert_eq!(prev, Pair::new(3, 9));
        assert_eq!(s.load(0), Pair::new(7, 42));
        b.exch_at_slot(prev, 0);
        assert_eq!(s.load(0), Pair::new(3, 9));
    }

    #[test]
    fn concurrent_cas_has_one_winner() {
        for _ in 0..50 {
            let s = SlotStore::new(1, 1);
            let winners = AtomicUsize::new(0);
            let barrier = Barrier::new(8);
            std::thread::scope(|scope| {
                for t in 0..8u32 {
                    let (s, winners, barrier) = (&s, &winners, &barrier);
                    scope.spawn(move || {
                        barrier.wait();
                        if bucket(s).cas_at_slot(Pair::new(t, t), 0) == EMPTY_PAIR {
                            winners.fetch_add(1, Ordering::Relaxed);
                        }
                    });
                }
            });
            assert_eq!(winners.load(Ordering::Relaxed), 1);
        }
    }
}
