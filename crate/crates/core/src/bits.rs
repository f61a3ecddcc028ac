//! Fixed-length bit vectors for column data.
//!
//! A [`ColumnWord`] holds one column of a matrix at any pipeline stage
//! (message `k_u` bits, codeword `l` bits, wire `l + r` bits). Index 0 is
//! the first (topmost link) bit; the integer value reads the bits
//! big-endian, so the first bits are the most significant ones.

use core::fmt;

/// Fixed-length bit vector, at most 64 bits.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColumnWord {
    bits: u64,
    len: u32,
}

impl ColumnWord {
    pub const MAX_LEN: u32 = 64;

    /// Build from an integer value whose low `len` bits are the column,
    /// big-endian (index 0 = most significant of the `len` bits).
    pub fn from_value(value: u64, len: u32) -> Self {
        assert!(len <= Self::MAX_LEN, "column length {} exceeds 64", len);
        let bits = if len == 64 { value } else { value & ((1u64 << len) - 1) };
        ColumnWord { bits, len }
    }

    pub fn zero(len: u32) -> Self {
        Self::from_value(0, len)
    }

    pub fn value(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit at `index`, 0 being the first (topmost) bit.
    pub fn bit(&self, index: u32) -> u8 {
        assert!(index < self.len);
        ((self.bits >> (self.len - 1 - index)) & 1) as u8
    }

    pub fn set_bit(&mut self, index: u32, value: u8) {
        assert!(index < self.len);
        let mask = 1u64 << (self.len - 1 - index);
        if value & 1 == 1 {
            self.bits |= mask;
        } else {
            self.bits &= !mask;
        }
    }

    pub fn flip_bit(&mut self, index: u32) {
        assert!(index < self.len);
        self.bits ^= 1u64 << (self.len - 1 - index);
    }

    pub fn xor(&self, other: &ColumnWord) -> ColumnWord {
        assert_eq!(self.len, other.len, "xor length mismatch");
        ColumnWord { bits: self.bits ^ other.bits, len: self.len }
    }

    /// XOR with a raw pattern laid out in the same big-endian convention.
    pub fn xor_value(&self, pattern: u64) -> ColumnWord {
        ColumnWord::from_value(self.bits ^ pattern, self.len)
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// First `n` bits as a new word.
    pub fn take_first(&self, n: u32) -> ColumnWord {
        assert!(n <= self.len);
        // checked_shr: the shift is 64 when taking none of a full word.
        ColumnWord::from_value(self.bits.checked_shr(self.len - n).unwrap_or(0), n)
    }

    /// Last `n` bits as a new word.
    pub fn take_last(&self, n: u32) -> ColumnWord {
        assert!(n <= self.len);
        ColumnWord::from_value(self.bits, n)
    }

    /// Bits `[start, start + n)` as a new word.
    pub fn slice(&self, start: u32, n: u32) -> ColumnWord {
        assert!(start + n <= self.len);
        ColumnWord::from_value(self.bits.checked_shr(self.len - start - n).unwrap_or(0), n)
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &ColumnWord) -> ColumnWord {
        assert!(self.len + other.len <= Self::MAX_LEN);
        ColumnWord {
            bits: self.bits.checked_shl(other.len).unwrap_or(0) | other.bits,
            len: self.len + other.len,
        }
    }

    pub fn hamming_distance(&self, other: &ColumnWord) -> u32 {
        assert_eq!(self.len, other.len);
        (self.bits ^ other.bits).count_ones()
    }
}

impl fmt::Debug for ColumnWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ColumnWord(")?;
        for i in 0..self.len {
            write!(f, "{}", self.bit(i))?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for ColumnWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", self.bit(i))?;
        }
        Ok(())
    }
}
