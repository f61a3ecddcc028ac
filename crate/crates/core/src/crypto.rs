//! Randomized injective column cipher.
//!
//! The reference scheme is a nonce-prepended stream cipher: the wire form of
//! a column is `nonce (r0 bits) || body (c bits) || zero padding (r - r0
//! bits)`, with `body = plaintext XOR keystream(key, nonce)`. Decryption is
//! total, so the joint decoder may call it on arbitrary guessed wires and
//! use codebook membership as the only check.
//!
//! The keyed keystream generator is a simulation stand-in with measured
//! uniformity, not a claim of real-world strength; the `SchemeId` tag keeps
//! the interface pluggable (the identity scheme exists as a deliberately
//! broken fixture for the security harnesses).

use alloc::vec::Vec;
use core::fmt;

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

use crate::bits::ColumnWord;
use crate::params::SystemParams;

/// Keystream request cap, in bits.
pub const MAX_KEYSTREAM_BITS: u32 = 1 << 16;

#[derive(Clone, Debug, PartialEq)]
pub enum CipherError {
    LengthCap { requested: u32 },
    NonceLength { expected: u32, got: u32 },
    WireLength { expected: u32, got: u32 },
    BadKeyHex,
}

impl fmt::Display for CipherError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CipherError::LengthCap { requested } => {
                write!(f, "keystream request of {} bits exceeds the {} cap", requested, MAX_KEYSTREAM_BITS)
            }
            CipherError::NonceLength { expected, got } => {
                write!(f, "nonce is {} bits, expected {}", got, expected)
            }
            CipherError::WireLength { expected, got } => {
                write!(f, "wire is {} bits, expected {}", got, expected)
            }
            CipherError::BadKeyHex => write!(f, "key must be 32 hex characters"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CipherError {}

/// Cipher variant tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeId {
    /// Reference nonce-prepended stream cipher.
    Stream,
    /// Broken fixture: body equals plaintext.
    Identity,
}

/// 128-bit cipher key plus scheme tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CipherKey {
    pub key_bits: u128,
    pub scheme_id: SchemeId,
}

impl CipherKey {
    pub fn new(key_bits: u128) -> Self {
        CipherKey { key_bits, scheme_id: SchemeId::Stream }
    }

    /// Broken fixture key: encryption leaves the body untouched.
    pub fn identity() -> Self {
        CipherKey { key_bits: 0, scheme_id: SchemeId::Identity }
    }

    /// Reproducible test-mode key generation from a 64-bit seed.
    pub fn from_seed(seed: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let key_bits = ((rng.next_u64() as u128) << 64) | rng.next_u64() as u128;
        CipherKey::new(key_bits)
    }

    /// Parse a 32-hex-character key string.
    pub fn from_hex(s: &str) -> Result<Self, CipherError> {
        if s.len() != 32 || !s.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(CipherError::BadKeyHex);
        }
        let key_bits = u128::from_str_radix(s, 16).map_err(|_| CipherError::BadKeyHex)?;
        Ok(CipherKey::new(key_bits))
    }
}

/// One encrypted column before wire assembly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CipherColumn {
    /// `r0` nonce bits.
    pub nonce: ColumnWord,
    /// `c` keystream-masked plaintext bits.
    pub body: ColumnWord,
    /// `r - r0` padding bits, zero in the reference scheme.
    pub padding: ColumnWord,
}

impl CipherColumn {
    /// Wire layout: `nonce || body || padding`, total `c + r` bits.
    pub fn wire(&self) -> ColumnWord {
        self.nonce.concat(&self.body).concat(&self.padding)
    }
}

fn keystream_rng(key: &CipherKey, nonce: ColumnWord) -> ChaCha12Rng {
    let mut seed = [0u8; 32];
    seed[0..16].copy_from_slice(&key.key_bits.to_le_bytes());
    seed[16..24].copy_from_slice(&nonce.value().to_le_bytes());
    seed[24..28].copy_from_slice(&nonce.len().to_le_bytes());
    seed[28..32].copy_from_slice(&0x6b73u32.to_le_bytes()); // keystream domain tag
    ChaCha12Rng::from_seed(seed)
}

/// Keystream bits for `(key, nonce)`, packed 8 per byte MSB-first.
///
/// Deterministic in its inputs: the pair seeds a keyed generator over a
/// block counter. The identity scheme returns all zeros.
pub fn keystream(key: &CipherKey, nonce: ColumnWord, len: u32) -> Result<Vec<u8>, CipherError> {
    if len > MAX_KEYSTREAM_BITS {
        return Err(CipherError::LengthCap { requested: len });
    }
    let nbytes = len.div_ceil(8) as usize;
    let mut out = alloc::vec![0u8; nbytes];
    if key.scheme_id == SchemeId::Stream {
        keystream_rng(key, nonce).fill_bytes(&mut out);
        // Mask unused trailing bits of the last byte.
        let tail = len % 8;
        if tail != 0 {
            out[nbytes - 1] &= 0xffu8 << (8 - tail);
        }
    }
    Ok(out)
}

/// First `len <= 64` keystream bits as a column word.
pub fn keystream_word(key: &CipherKey, nonce: ColumnWord, len: u32) -> ColumnWord {
    debug_assert!(len <= 64);
    if key.scheme_id == SchemeId::Identity || len == 0 {
        return ColumnWord::zero(len);
    }
    let bytes = keystream(key, nonce, len).expect("len <= 64 is under the cap");
    let mut buf = [0u8; 8];
    buf[..bytes.len()].copy_from_slice(&bytes);
    ColumnWord::from_value(u64::from_be_bytes(buf) >> (64 - len), len)
}

/// Encrypt the `c`-bit plaintext prefix of one column.
pub fn encrypt_column(
    params: &SystemParams,
    key: &CipherKey,
    plaintext: ColumnWord,
    nonce: ColumnWord,
) -> Result<CipherColumn, CipherError> {
    let c = params.encrypted_links;
    if plaintext.len() != c {
        return Err(CipherError::WireLength { expected: c, got: plaintext.len() });
    }
    if nonce.len() != params.cipher_rand_bits {
        return Err(CipherError::NonceLength { expected: params.cipher_rand_bits, got: nonce.len() });
    }
    let body = plaintext.xor(&keystream_word(key, nonce, c));
    let padding = ColumnWord::zero(params.cipher_expand_bits - params.cipher_rand_bits);
    Ok(CipherColumn { nonce, body, padding })
}

/// Decrypt a `c + r`-bit wire back to its `c`-bit plaintext.
///
/// Total on well-sized input: every wire value decrypts to some plaintext,
/// with no integrity check.
pub fn decrypt_column(
    params: &SystemParams,
    key: &CipherKey,
    wire: ColumnWord,
) -> Result<ColumnWord, CipherError> {
    if wire.len() != params.cipher_bits() {
        return Err(CipherError::WireLength { expected: params.cipher_bits(), got: wire.len() });
    }
    let r0 = params.cipher_rand_bits;
    let c = params.encrypted_links;
    let nonce = wire.take_first(r0);
    let body = wire.slice(r0, c);
    Ok(body.xor(&keystream_word(key, nonce, c)))
}
