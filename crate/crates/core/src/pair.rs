//! Key-value pairs packed into one 64-bit slot.
//!
//! Layout: the key occupies the low 32 bits and the value the high 32 bits.
//! The all-ones word is the empty slot, so neither a key nor a value may be
//! `u32::MAX`.

use std::fmt;

pub const EMPTY_KEY: u32 = u32::MAX;
pub const EMPTY_VALUE: u32 = u32::MAX;
pub const EMPTY_PAIR: Pair = Pair { key: EMPTY_KEY, value: EMPTY_VALUE };

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Pair {
    pub key: u32,
    pub value: u32,
}

impl Pair {
    #[inline]
    pub const fn new(key: u32, value: u32) -> Self {
        Pair { key, value }
    }

    #[inline]
    pub const fn to_bits(self) -> u64 {
        (self.key as u64) | ((self.value as u64) << 32)
    }

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        Pair { key: bits as u32, value: (bits >> 32) as u32 }
    }

    #[inline]
    pub const fn is_empty(self) -> bool {
        self.key == EMPTY_KEY
    }
}

impl fmt::Debug for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("EMPTY")
        } else {
            write!(f, "({}, {})", self.key, self.value)
        }
    }
}
