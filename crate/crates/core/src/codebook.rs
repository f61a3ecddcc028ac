//! Binned i.i.d. Bernoulli(1/2) random codebook.
//!
//! The first `bin_index_bits` message bits (big-endian) select the bin, the
//! remaining `position_bits` select the codeword inside it. Codewords are
//! drawn from per-bin derived streams in a fixed order (bin-major,
//! position-minor, bit-minor), so regeneration from `(params, seed)` is
//! bit-exact and bins can be generated in parallel.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use rand_core::RngCore;

use crate::bits::ColumnWord;
use crate::params::SystemParams;
use crate::rng::{derive_stream, Domain};

/// Enumeration cap: the whole codebook is stored explicitly.
pub const MAX_MSG_BITS: u32 = 24;

#[derive(Clone, Debug, PartialEq)]
pub enum CodebookError {
    /// `2^k_u` exceeds the enumeration cap.
    TooLarge { msg_bits: u32 },
}

impl fmt::Display for CodebookError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodebookError::TooLarge { msg_bits } => write!(
                f,
                "codebook with 2^{} codewords exceeds the 2^{} enumeration cap",
                msg_bits, MAX_MSG_BITS
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CodebookError {}

/// Location of a codeword: bin index and position within the bin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CodewordLocation {
    pub bin: u32,
    pub position: u32,
}

/// Seeded binned random code with forward and reverse lookup.
pub struct Codebook {
    params: SystemParams,
    seed: u64,
    /// `bins[b][e]` is the `l`-bit codeword at bin `b`, position `e`.
    bins: Vec<Vec<u64>>,
    /// Codeword value -> every (bin, position) holding it, sorted.
    reverse: BTreeMap<u64, Vec<CodewordLocation>>,
    /// Number of colliding (unordered) location pairs sharing a bit pattern.
    collision_count: u64,
}

impl Codebook {
    pub fn generate(params: &SystemParams, seed: u64) -> Result<Self, CodebookError> {
        params.validate().expect("valid params");
        if params.msg_bits > MAX_MSG_BITS {
            return Err(CodebookError::TooLarge { msg_bits: params.msg_bits });
        }
        let l = params.num_links;
        let num_bins = params.num_bins() as usize;
        let delta = params.delta() as usize;
        let mut bins = Vec::with_capacity(num_bins);
        for bin in 0..num_bins {
            let mut stream = derive_stream(seed, Domain::Codebook, bin as u64, 0);
            let mut entries = Vec::with_capacity(delta);
            for _ in 0..delta {
                // Top l bits of one draw, kept in big-endian column order.
                let word = stream.next_u64() >> (64 - l);
                entries.push(word);
            }
            bins.push(entries);
        }
        let mut reverse: BTreeMap<u64, Vec<CodewordLocation>> = BTreeMap::new();
        for (bin, entries) in bins.iter().enumerate() {
            for (position, &word) in entries.iter().enumerate() {
                reverse.entry(word).or_default().push(CodewordLocation {
                    bin: bin as u32,
                    position: position as u32,
                });
            }
        }
        let mut collision_count = 0u64;
        for locs in reverse.values_mut() {
            locs.sort();
            let m = locs.len() as u64;
            collision_count += m * (m - 1) / 2;
        }
        Ok(Codebook { params: *params, seed, bins, reverse, collision_count })
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn collision_count(&self) -> u64 {
        self.collision_count
    }

    /// Codewords in generation order (bin-major, position-minor).
    pub fn codewords(&self) -> impl Iterator<Item = u64> + '_ {
        self.bins.iter().flat_map(|b| b.iter().copied())
    }

    pub fn codeword_at(&self, loc: CodewordLocation) -> ColumnWord {
        ColumnWord::from_value(
            self.bins[loc.bin as usize][loc.position as usize],
            self.params.num_links,
        )
    }

    /// Split a message into its (bin, position) location.
    pub fn message_location(params: &SystemParams, message: ColumnWord) -> CodewordLocation {
        assert_eq!(message.len(), params.msg_bits, "message width mismatch");
        CodewordLocation {
            bin: message.take_first(params.bin_index_bits()).value() as u32,
            position: message.take_last(params.position_bits()).value() as u32,
        }
    }

    /// Inverse of the location arithmetic.
    pub fn location_to_message(params: &SystemParams, loc: CodewordLocation) -> ColumnWord {
        let value = ((loc.bin as u64) << params.position_bits()) | loc.position as u64;
        ColumnWord::from_value(value, params.msg_bits)
    }

    /// Encode one message column to its `l`-bit codeword.
    pub fn encode_column(&self, message: ColumnWord) -> ColumnWord {
        let loc = Self::message_location(&self.params, message);
        self.codeword_at(loc)
    }

    /// All (bin, position) pairs holding this exact codeword.
    pub fn lookup(&self, candidate: ColumnWord) -> &[CodewordLocation] {
        assert_eq!(candidate.len(), self.params.num_links, "candidate width mismatch");
        self.reverse
            .get(&candidate.value())
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }
}
