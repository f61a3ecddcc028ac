//! Secure-and-reliable transmission over a noisy multipath network.
//!
//! The scheme premixes messages with a binned i.i.d. random code, encrypts
//! only the first `c = l - w` coded bits of every column with a randomized
//! injective stream cipher, transmits over `l` independent binary symmetric
//! channels, and recovers the data at the receiver with a joint
//! decryption-decoding loop that guesses noise effects in maximum-likelihood
//! order (GRAND).
//!
//! The crate is `no_std`-compatible (alloc required); file formats, CSV
//! output, and the command line interface live in the companion
//! `nhuncc-cli` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bits;
pub mod channel;
pub mod codebook;
pub mod crypto;
pub mod exponent;
pub mod grandec;
pub mod params;
pub mod pipeline;
pub mod rng;
pub mod secmeter;

pub use bits::ColumnWord;
pub use codebook::{Codebook, CodewordLocation};
pub use crypto::{CipherKey, SchemeId};
pub use grandec::DecodeResult;
pub use params::SystemParams;
