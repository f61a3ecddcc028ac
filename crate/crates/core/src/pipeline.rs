//! Full pipeline: encode, split, encrypt, transmit, jointly decode.
//!
//! Per column the composition is: encode the `k_u` message bits to an
//! `l`-bit codeword, encrypt the first `c = l - w` bits with a fresh nonce,
//! and pass the last `w` bits through in the clear. The transmitted column
//! is `ciphertext (c + r) || plaintext tail (w)`, `l + r` bits total.
//!
//! Nonces derive from `(nonce_seed, trial, column)`, channel noise from
//! `(channel_seed, trial, column)`, and message bits from
//! `(message_seed, trial, 0)`, so trials are reproducible and parallelize
//! over disjoint streams.

use alloc::vec::Vec;
use core::fmt;

use rand_core::RngCore;

use crate::bits::ColumnWord;
use crate::channel::bsc_transmit;
use crate::codebook::Codebook;
use crate::crypto::{encrypt_column, CipherError, CipherKey};
use crate::grandec::{self, DecodeError};
use crate::rng::{derive_stream, Domain};

#[derive(Clone, Debug, PartialEq)]
pub enum PipelineError {
    Cipher(CipherError),
    Decode(DecodeError),
    Dimension { expected: usize, got: usize },
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PipelineError::Cipher(e) => write!(f, "cipher: {}", e),
            PipelineError::Decode(e) => write!(f, "decode: {}", e),
            PipelineError::Dimension { expected, got } => {
                write!(f, "matrix has {} columns, expected {}", got, expected)
            }
        }
    }
}

impl From<CipherError> for PipelineError {
    fn from(e: CipherError) -> Self {
        PipelineError::Cipher(e)
    }
}

impl From<DecodeError> for PipelineError {
    fn from(e: DecodeError) -> Self {
        PipelineError::Decode(e)
    }
}

#[cfg(feature = "std")]
impl std::error::Error for PipelineError {}

/// All seeds a run needs; no ambient randomness anywhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunSeeds {
    pub codebook: u64,
    pub channel: u64,
    pub nonce: u64,
    pub message: u64,
}

impl RunSeeds {
    pub fn from_base(base: u64) -> Self {
        RunSeeds { codebook: base, channel: base ^ 0x9e3779b97f4a7c15, nonce: base ^ 0xc2b2ae3d27d4eb4f, message: base ^ 0x165667b19e3779f9 }
    }
}

/// Fresh nonce for `(nonce_seed, trial, column)`.
pub fn nonce_for(nonce_seed: u64, trial: u64, column: u64, r0: u32) -> ColumnWord {
    let mut rng = derive_stream(nonce_seed, Domain::Nonce, trial, column);
    ColumnWord::from_value(rng.next_u64(), r0)
}

/// Encode and encrypt one column: codeword, split, cipher, reassemble.
pub fn crypt2_encode_column(
    codebook: &Codebook,
    key: &CipherKey,
    message: ColumnWord,
    nonce: ColumnWord,
) -> Result<ColumnWord, PipelineError> {
    let params = codebook.params();
    let codeword = codebook.encode_column(message);
    let head = codeword.take_first(params.encrypted_links);
    let tail = codeword.take_last(params.eve_links);
    let cipher = encrypt_column(params, key, head, nonce)?;
    Ok(cipher.wire().concat(&tail))
}

/// Encode and encrypt a whole `k_u x k_u` message matrix column-wise.
pub fn crypt2_encode(
    codebook: &Codebook,
    key: &CipherKey,
    messages: &[ColumnWord],
    nonces: &[ColumnWord],
) -> Result<Vec<ColumnWord>, PipelineError> {
    if messages.len() != nonces.len() {
        return Err(PipelineError::Dimension { expected: messages.len(), got: nonces.len() });
    }
    messages
        .iter()
        .zip(nonces)
        .map(|(&m, &n)| crypt2_encode_column(codebook, key, m, n))
        .collect()
}

/// Apply per-column BSC noise with derived streams.
pub fn transmit_matrix(
    matrix: &[ColumnWord],
    p: f64,
    channel_seed: u64,
    trial: u64,
) -> (Vec<ColumnWord>, Vec<u32>) {
    let mut received = Vec::with_capacity(matrix.len());
    let mut flips = Vec::with_capacity(matrix.len());
    for (col, &word) in matrix.iter().enumerate() {
        let mut rng = derive_stream(channel_seed, Domain::Channel, trial, col as u64);
        let (noisy, noise) = bsc_transmit(word, p, &mut rng);
        received.push(noisy);
        flips.push(noise.weight());
    }
    (received, flips)
}

/// Per-trial decode telemetry.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub trial: u64,
    pub block_error: bool,
    pub any_abandoned: bool,
    pub column_queries: Vec<u64>,
    pub noise_weights: Vec<u32>,
    pub flips_applied: Vec<u32>,
}

/// One full round trip: random message matrix, encode+encrypt, BSC,
/// joint decode, compare.
pub fn run_trial(
    codebook: &Codebook,
    key: &CipherKey,
    seeds: &RunSeeds,
    trial: u64,
    budget: u64,
) -> Result<TrialRecord, PipelineError> {
    let params = *codebook.params();
    let k_u = params.msg_bits;
    let mut msg_rng = derive_stream(seeds.message, Domain::Message, trial, 0);
    let messages: Vec<ColumnWord> =
        (0..k_u).map(|_| ColumnWord::from_value(msg_rng.next_u64(), k_u)).collect();
    let nonces: Vec<ColumnWord> = (0..k_u as u64)
        .map(|col| nonce_for(seeds.nonce, trial, col, params.cipher_rand_bits))
        .collect();
    let transmitted = crypt2_encode(codebook, key, &messages, &nonces)?;
    let (received, flips_applied) =
        transmit_matrix(&transmitted, params.flip_prob, seeds.channel, trial);
    let decode = grandec::decode_matrix(codebook, key, &received, budget)?;
    Ok(TrialRecord {
        trial,
        block_error: decode.block_error_vs(&messages),
        any_abandoned: decode.any_abandoned(),
        column_queries: decode.columns.iter().map(|c| c.queries).collect(),
        noise_weights: decode.columns.iter().map(|c| c.noise_weight).collect(),
        flips_applied,
    })
}

/// Aggregate of a round-trip run.
#[derive(Clone, Debug)]
pub struct RoundtripReport {
    pub trials: u64,
    pub block_errors: u64,
    pub abandoned_trials: u64,
    pub total_queries: u64,
    pub records: Vec<TrialRecord>,
}

impl RoundtripReport {
    pub fn bler(&self) -> f64 {
        self.block_errors as f64 / self.trials as f64
    }
}

pub fn run_roundtrip(
    codebook: &Codebook,
    key: &CipherKey,
    seeds: &RunSeeds,
    trials: u64,
    budget: u64,
) -> Result<RoundtripReport, PipelineError> {
    let mut records = Vec::with_capacity(trials as usize);
    let mut block_errors = 0u64;
    let mut abandoned = 0u64;
    let mut total_queries = 0u64;
    for trial in 0..trials {
        let rec = run_trial(codebook, key, seeds, trial, budget)?;
        block_errors += rec.block_error as u64;
        abandoned += rec.any_abandoned as u64;
        total_queries += rec.column_queries.iter().sum::<u64>();
        records.push(rec);
    }
    Ok(RoundtripReport { trials, block_errors, abandoned_trials: abandoned, total_queries, records })
}

/// Single-column trials at a fixed configuration; returns the column error
/// count. Used by the empirical error-exponent fit, where the per-packet
/// error probability is the quantity with the exponential decay.
pub fn column_error_rate(
    codebook: &Codebook,
    key: &CipherKey,
    seeds: &RunSeeds,
    trials: u64,
    budget: u64,
) -> Result<(u64, u64), PipelineError> {
    let params = *codebook.params();
    let mut errors = 0u64;
    for trial in 0..trials {
        let mut msg_rng = derive_stream(seeds.message, Domain::Message, trial, 0);
        let message = ColumnWord::from_value(msg_rng.next_u64(), params.msg_bits);
        let nonce = nonce_for(seeds.nonce, trial, 0, params.cipher_rand_bits);
        let wire = crypt2_encode_column(codebook, key, message, nonce)?;
        let mut ch = derive_stream(seeds.channel, Domain::Channel, trial, 0);
        let (received, _) = bsc_transmit(wire, params.flip_prob, &mut ch);
        let res = grandec::grand_decode_column(codebook, key, received, budget)?;
        if res.message != Some(message) {
            errors += 1;
        }
    }
    Ok((errors, trials))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::SystemParams;
    use crate::grandec::default_budget;

    fn setup(p: f64) -> (Codebook, CipherKey, RunSeeds) {
        // Codebook seed 29 is collision-free at these dimensions.
        let params = SystemParams::new(8, p, 2, 4, 0, 2, 2).unwrap();
        let codebook = Codebook::generate(&params, 29).unwrap();
        (codebook, CipherKey::from_seed(11), RunSeeds::from_base(7))
    }

    #[test]
    fn tail_rows_pass_through_unencrypted() {
        let (cb, key, _) = setup(0.05);
        let params = *cb.params();
        for m in 0..16u64 {
            let msg = ColumnWord::from_value(m, 4);
            let codeword = cb.encode_column(msg);
            let nonce = ColumnWord::from_value(m ^ 3, params.cipher_rand_bits);
            let wire = crypt2_encode_column(&cb, &key, msg, nonce).unwrap();
            assert_eq!(wire.len(), params.wire_bits());
            assert_eq!(
                wire.take_last(params.eve_links),
                codeword.take_last(params.eve_links)
            );
        }
    }

    #[test]
    fn degenerate_composition_is_the_codeword() {
        // Identity cipher with r = r0 = 0: the wire IS the codeword.
        let params = SystemParams::new(8, 0.05, 2, 4, 0, 0, 0).unwrap();
        let cb = Codebook::generate(&params, 1).unwrap();
        let key = CipherKey::identity();
        for m in 0..16u64 {
            let msg = ColumnWord::from_value(m, 4);
            let wire =
                crypt2_encode_column(&cb, &key, msg, ColumnWord::zero(0)).unwrap();
            assert_eq!(wire, cb.encode_column(msg));
        }
    }

    #[test]
    fn noiseless_roundtrip_is_exact() {
        let (cb, key, seeds) = setup(0.0);
        let report = run_roundtrip(&cb, &key, &seeds, 100, 1024).unwrap();
        assert_eq!(report.block_errors, 0);
        // One query per column.
        assert_eq!(report.total_queries, 100 * 4);
    }

    #[test]
    fn seed_discipline_makes_prefixes_identical() {
        let (cb, key, seeds) = setup(0.05);
        let budget = default_budget(cb.params().wire_bits(), 0.05);
        let short = run_roundtrip(&cb, &key, &seeds, 20, budget).unwrap();
        let long = run_roundtrip(&cb, &key, &seeds, 40, budget).unwrap();
        assert_eq!(short.records[..], long.records[..20]);
    }

    #[test]
    fn noisy_roundtrip_mostly_recovers() {
        let (cb, key, seeds) = setup(0.05);
        let budget = default_budget(cb.params().wire_bits(), 0.05);
        let report = run_roundtrip(&cb, &key, &seeds, 200, budget).unwrap();
        assert!(report.bler() < 0.5, "bler {}", report.bler());
        let avg_queries = report.total_queries as f64 / (200.0 * 4.0);
        assert!(avg_queries < 64.0, "avg queries {}", avg_queries);
    }
}
