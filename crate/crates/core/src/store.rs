//! Contiguous array of 64-bit slots, every slot initialised to the empty pair.
//!
//! The allocation is aligned to one bucket (`bucket_size * 8` bytes, at least
//! 8) so a 16-slot bucket sits exactly on one 128-byte line.

use std::alloc::{self, Layout};
use std::ptr::NonNull;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::pair::{Pair, EMPTY_PAIR};

pub struct SlotStore {
    ptr: NonNull<AtomicU64>,
    len: usize,
    layout: Layout,
}

// SAFETY: the store owns its allocation and only hands out `&AtomicU64`.
unsafe impl Send for SlotStore {}
unsafe impl Sync for SlotStore {}

impl SlotStore {
    pub fn new(num_buckets: usize, bucket_size: usize) -> Self {
        let len = num_buckets.checked_mul(bucket_size).expect("slot count overflows usize");
        let align = (bucket_size * 8).max(8);
        let layout = Layout::from_size_align(len.max(1) * 8, align).expect("invalid store layout");
        // SAFETY: layout has non-zero size.
        let raw = unsafe { alloc::alloc(layout) } as *mut AtomicU64;
        let ptr = NonNull::new(raw).unwrap_or_else(|| alloc::handle_alloc_error(layout));
        for i in 0..len {
            // SAFETY: i < len and the allocation holds len slots.
            unsafe { ptr.as_ptr().add(i).write(AtomicU64::new(EMPTY_PAIR.to_bits())) };
        }
        SlotStore { ptr, len, layout }
    }

    #[inline]
    pub fn slots(&self) -> &[AtomicU64] {
        // SAFETY: all len slots were initialised in `new`.
        unsafe { std::slice::from_raw_parts(self.ptr.as_ptr(), self.len) }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn alignment(&self) -> usize {
        self.layout.align()
    }

    pub fn as_ptr(&self) -> *const AtomicU64 {
        self.ptr.as_ptr()
    }

    pub fn load(&self, index: usize) -> Pair {
        Pair::from_bits(self.slots()[index].load(Ordering::Acquire))
    }

    /// Overwrites a slot without any protocol. Test and fault-injection use only.
    pub fn store_raw(&self, index: usize, pair: Pair) {
        self.slots()[index].store(pair.to_bits(), Ordering::Release);
    }

    /// Raw little-endian dump of every slot.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.len * 8);
        for slot in self.slots() {
            out.extend_from_slice(&slot.load(Ordering::Acquire).to_le_bytes());
        }
        out
    }

    pub fn snapshot(&self) -> Vec<u64> {
        self.slots().iter().map(|s| s.load(Ordering::Acquire)).collect()
    }
}

impl Drop for SlotStore {
    fn drop(&mut self) {
        // SAFETY: allocated in `new` with this layout; AtomicU64 needs no drop.
        unsafe { alloc::dealloc(self.ptr.as_ptr() as *mut u8, self.layout) };
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn starts_empty_and_aligned() {
        for b in [1usize, 8, 16, 32] {
            let s = SlotStore::new(10, b);
            assert_eq!(s.len(), 10 * b);
            assert_eq!(s.as_ptr() as usize % (b * 8).max(8), 0);
            assert!(s.snapshot().iter().all(|&w| w == u64::MAX));
        }
    }

    #[test]
    fn dump_is_little_endian() {
        let s = SlotStore::new(1, 2);
        s.store_raw(0, Pair::new(1, 2));
        let bytes = s.to_le_bytes();
        assert_eq!(&bytes[..8], &[1, 0, 0, 0, 2, 0, 0, 0]);
        assert_eq!(&bytes[8..], &[0xff; 8]);
    }
}
