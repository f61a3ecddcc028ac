//! Joint decryption-decoding by guessing noise effects.
//!
//! Noise patterns are queried in maximum-likelihood order (ascending
//! Hamming weight, lexicographic within a weight). Each guess is inverted
//! from the received wire, the encrypted prefix decrypted, and the
//! resulting word tested for codebook membership; the first hit is an ML
//! decoding for any bit-flip probability below one half. A query budget
//! turns the loop into the abandonment variant.
//!
//! [`brute_force_ml_oracle`] enumerates every (message, nonce) pair
//! exhaustively and is the independent reference the decoder is verified
//! against.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::bits::ColumnWord;
use crate::codebook::{Codebook, CodewordLocation};
use crate::crypto::CipherKey;
use crate::pipeline;

/// Combinatorial guard on the pattern space.
pub const MAX_PATTERN_BITS: u32 = 40;

/// Guard on the oracle enumeration, `2^(k_u + r0) <= 2^20`.
pub const MAX_ORACLE_BITS: u32 = 20;

#[derive(Clone, Debug, PartialEq)]
pub enum DecodeError {
    PatternGuard { n: u32 },
    OracleGuard { bits: u32 },
    Dimension { expected: u32, got: u32 },
}

impl fmt::Display for DecodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecodeError::PatternGuard { n } => {
                write!(f, "{}-bit pattern space exceeds the {}-bit guard", n, MAX_PATTERN_BITS)
            }
            DecodeError::OracleGuard { bits } => {
                write!(f, "oracle enumeration of 2^{} pairs exceeds 2^{}", bits, MAX_ORACLE_BITS)
            }
            DecodeError::Dimension { expected, got } => {
                write!(f, "received word is {} bits, expected {}", got, expected)
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for DecodeError {}

/// Binomial coefficient, saturating.
pub fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u64) / (i as u64 + 1);
    }
    acc
}

/// Default query budget: all patterns up to weight `ceil(2 p n) + 2`.
pub fn default_budget(n: u32, p: f64) -> u64 {
    let w_max = (libm::ceil(2.0 * p * n as f64) as u32 + 2).min(n);
    (0..=w_max).map(|w| binomial(n, w)).sum()
}

/// Iterator over `n`-bit noise patterns in maximum-likelihood order.
///
/// Patterns come out by ascending Hamming weight and, within a weight, in
/// ascending numeric value (lexicographic on bit positions under the
/// big-endian column convention). Run to exhaustion it emits all `2^n`
/// patterns exactly once; `budget` caps the count.
pub struct NoiseOrder {
    n: u32,
    budget: u64,
    emitted: u64,
    weight: u32,
    current: u64,
}

impl NoiseOrder {
    pub fn new(n: u32, budget: u64) -> Result<Self, DecodeError> {
        if n > MAX_PATTERN_BITS {
            return Err(DecodeError::PatternGuard { n });
        }
        assert!(budget >= 1, "budget must be at least 1");
        Ok(NoiseOrder { n, budget, emitted: 0, weight: 0, current: 0 })
    }

    fn max_for_weight(&self, w: u32) -> u64 {
        // w top bits set: the largest n-bit word of weight w.
        if w == 0 {
            0
        } else {
            (((1u64 << w) - 1) << (self.n - w)) & mask(self.n)
        }
    }
}

fn mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl Iterator for NoiseOrder {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.emitted >= self.budget || self.weight > self.n {
            return None;
        }
        let out = self.current;
        self.emitted += 1;
        if self.current == self.max_for_weight(self.weight) {
            self.weight += 1;
            self.current = if self.weight <= self.n { mask(self.weight) } else { 0 };
        } else {
            // Gosper's hack: next same-weight word in ascending order.
            let c = self.current;
            let lsb = c & c.wrapping_neg();
            let ripple = c + lsb;
            self.current = ripple | (((c ^ ripple) >> 2) / lsb);
        }
        Some(out)
    }
}

/// Outcome of decoding one column.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecodeResult {
    pub message: Option<ColumnWord>,
    pub location: Option<CodewordLocation>,
    /// Hamming weight of the accepted noise guess.
    pub noise_weight: u32,
    pub queries: u64,
    pub abandoned: bool,
    /// The accepted codeword occupies more than one bin.
    pub ambiguous_collision: bool,
}

/// Decode one received wire column of `l + r` bits.
///
/// Membership requires the padding bits to be zero (the reference cipher
/// pads with zeros, so padding is part of the code) and the decrypted
/// prefix concatenated with the plaintext tail to be a codebook entry.
/// Collisions are resolved toward the lowest (bin, position).
pub fn grand_decode_column(
    codebook: &Codebook,
    key: &CipherKey,
    received: ColumnWord,
    budget: u64,
) -> Result<DecodeResult, DecodeError> {
    let params = *codebook.params();
    if received.len() != params.wire_bits() {
        return Err(DecodeError::Dimension { expected: params.wire_bits(), got: received.len() });
    }
    let c = params.encrypted_links;
    let r0 = params.cipher_rand_bits;
    let r = params.cipher_expand_bits;
    let w = params.eve_links;
    let cipher_bits = params.cipher_bits();
    // Nonce values repeat across guesses; cache their keystreams.
    let mut keystreams: BTreeMap<u64, ColumnWord> = BTreeMap::new();
    let mut queries = 0u64;
    for pattern in NoiseOrder::new(received.len(), budget)? {
        queries += 1;
        let candidate = received.xor_value(pattern);
        if r > r0 && candidate.slice(r0 + c, r - r0).value() != 0 {
            continue;
        }
        let wire = candidate.take_first(cipher_bits);
        let nonce = wire.take_first(r0);
        let ks = *keystreams
            .entry(nonce.value())
            .or_insert_with(|| crate::crypto::keystream_word(key, nonce, c));
        let prefix = wire.slice(r0, c).xor(&ks);
        let codeword = prefix.concat(&candidate.take_last(w));
        let hits = codebook.lookup(codeword);
        if !hits.is_empty() {
            let loc = hits[0];
            return Ok(DecodeResult {
                message: Some(Codebook::location_to_message(&params, loc)),
                location: Some(loc),
                noise_weight: pattern.count_ones(),
                queries,
                abandoned: false,
                ambiguous_collision: hits.len() > 1,
            });
        }
    }
    Ok(DecodeResult {
        message: None,
        location: None,
        noise_weight: 0,
        queries,
        abandoned: true,
        ambiguous_collision: false,
    })
}

/// One maximum-likelihood candidate found by the exhaustive oracle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MlCandidate {
    pub location: CodewordLocation,
    pub message: ColumnWord,
    pub nonce: ColumnWord,
}

/// The exact ML set of a received wire.
#[derive(Clone, Debug, PartialEq)]
pub struct MlOracleResult {
    /// Minimum Hamming distance from the received wire to any valid wire.
    pub min_distance: u32,
    /// Every (message, nonce) pair achieving the minimum.
    pub candidates: Vec<MlCandidate>,
}

impl MlOracleResult {
    /// Count of equally-likely candidates at the minimum distance.
    pub fn tie_class_size(&self) -> usize {
        self.candidates.len()
    }

    pub fn contains_location(&self, loc: CodewordLocation) -> bool {
        self.candidates.iter().any(|c| c.location == loc)
    }
}

/// Enumerate every (message, nonce) pair, form its exact transmitted wire,
/// and return all pairs at minimum Hamming distance from `received`.
///
/// Likelihood is monotone in distance for `p < 1/2`, so this is the exact
/// ML set, independent of the guessing order the decoder uses.
pub fn brute_force_ml_oracle(
    codebook: &Codebook,
    key: &CipherKey,
    received: ColumnWord,
) -> Result<MlOracleResult, DecodeError> {
    let params = *codebook.params();
    let bits = params.msg_bits + params.cipher_rand_bits;
    if bits > MAX_ORACLE_BITS {
        return Err(DecodeError::OracleGuard { bits });
    }
    if received.len() != params.wire_bits() {
        return Err(DecodeError::Dimension { expected: params.wire_bits(), got: received.len() });
    }
    let mut min_distance = u32::MAX;
    let mut candidates = Vec::new();
    for m in 0..(1u64 << params.msg_bits) {
        let message = ColumnWord::from_value(m, params.msg_bits);
        for n in 0..(1u64 << params.cipher_rand_bits) {
            let nonce = ColumnWord::from_value(n, params.cipher_rand_bits);
            let wire = pipeline::crypt2_encode_column(codebook, key, message, nonce)
                .expect("dimensions fixed by params");
            let d = wire.hamming_distance(&received);
            if d < min_distance {
                min_distance = d;
                candidates.clear();
            }
            if d == min_distance {
                candidates.push(MlCandidate {
                    location: Codebook::message_location(&params, message),
                    message,
                    nonce,
                });
            }
        }
    }
    Ok(MlOracleResult { min_distance, candidates })
}

/// Matrix decode: all columns independently against the shared codebook.
#[derive(Clone, Debug)]
pub struct MatrixDecode {
    pub columns: Vec<DecodeResult>,
    /// Recovered message columns; `None` where a column was abandoned.
    pub recovered: Vec<Option<ColumnWord>>,
}

impl MatrixDecode {
    pub fn any_abandoned(&self) -> bool {
        self.columns.iter().any(|c| c.abandoned)
    }

    pub fn total_queries(&self) -> u64 {
        self.columns.iter().map(|c| c.queries).sum()
    }

    /// Block error: any column abandoned or decoded to the wrong message.
    pub fn block_error_vs(&self, truth: &[ColumnWord]) -> bool {
        assert_eq!(truth.len(), self.recovered.len());
        self.recovered
            .iter()
            .zip(truth)
            .any(|(got, want)| got.as_ref() != Some(want))
    }
}

/// Decode each column of a received matrix independently; noise is
/// independent across columns, so joint ML factorizes. Column failures are
/// flagged, never aborting the batch.
pub fn decode_matrix(
    codebook: &Codebook,
    key: &CipherKey,
    received: &[ColumnWord],
    budget: u64,
) -> Result<MatrixDecode, DecodeError> {
    let mut columns = Vec::with_capacity(received.len());
    let mut recovered = Vec::with_capacity(received.len());
    for &col in received {
        let res = grand_decode_column(codebook, key, col, budget)?;
        recovered.push(res.message);
        columns.push(res);
    }
    Ok(MatrixDecode { columns, recovered })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::SystemParams;
    use crate::rng::{derive_stream, Domain};
    use rand_core::RngCore;

    #[test]
    fn noise_order_n3_exact_sequence() {
        let seq: Vec<u64> = NoiseOrder::new(3, u64::MAX).unwrap().collect();
        assert_eq!(seq, alloc::vec![0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111]);
    }

    #[test]
    fn first_pattern_is_all_zero() {
        for n in 1..=16 {
            assert_eq!(NoiseOrder::new(n, 1).unwrap().next(), Some(0));
        }
    }

    #[test]
    fn full_run_emits_every_pattern_once() {
        let mut seen = alloc::vec![false; 1024];
        let mut count = 0u64;
        for p in NoiseOrder::new(10, u64::MAX).unwrap() {
            assert!(!seen[p as usize]);
            seen[p as usize] = true;
            count += 1;
        }
        assert_eq!(count, 1024);
    }

    #[test]
    fn order_is_non_increasing_likelihood() {
        // For p < 1/2 the weight-then-lex order has exactly non-increasing
        // likelihood p^w (1-p)^(n-w); verified by full enumeration at n=12.
        let p = 0.3f64;
        let n = 12u32;
        let lik = |z: u64| (z.count_ones() as f64) * (p / (1.0 - p)).ln();
        let mut last = f64::INFINITY;
        for z in NoiseOrder::new(n, u64::MAX).unwrap() {
            let l = lik(z);
            assert!(l <= last + 1e-12);
            last = l;
        }
    }

    #[test]
    fn budget_caps_the_iterator() {
        assert_eq!(NoiseOrder::new(20, 37).unwrap().count(), 37);
    }

    #[test]
    fn pattern_guard() {
        assert!(NoiseOrder::new(41, 1).is_err());
    }

    #[test]
    fn binomial_sanity() {
        assert_eq!(binomial(12, 0), 1);
        assert_eq!(binomial(12, 3), 220);
        assert_eq!(binomial(12, 13), 0);
        assert_eq!(default_budget(12, 0.08), 1 + 12 + 66 + 220 + 495);
    }

    fn setup() -> (Codebook, CipherKey) {
        // Seed 29 gives a collision-free codebook with pairwise distance
        // >= 2, so weight-0/1 decoding behavior is unambiguous.
        let params = SystemParams::new(8, 0.08, 2, 4, 0, 2, 2).unwrap();
        let codebook = Codebook::generate(&params, 29).unwrap();
        (codebook, CipherKey::from_seed(17))
    }

    #[test]
    fn zero_noise_decodes_in_one_query() {
        let (cb, key) = setup();
        let msg = ColumnWord::from_value(0b1011, 4);
        let nonce = ColumnWord::from_value(0b10, 2);
        let wire = pipeline::crypt2_encode_column(&cb, &key, msg, nonce).unwrap();
        let res = grand_decode_column(&cb, &key, wire, 1 << 12).unwrap();
        assert_eq!(res.queries, 1);
        assert_eq!(res.message, Some(msg));
        assert_eq!(res.noise_weight, 0);
        assert!(!res.abandoned);
    }

    #[test]
    fn single_tail_flip_recovered_in_weight_one_sweep() {
        let (cb, key) = setup();
        let msg = ColumnWord::from_value(0b0110, 4);
        let nonce = ColumnWord::from_value(0b01, 2);
        let mut wire = pipeline::crypt2_encode_column(&cb, &key, msg, nonce).unwrap();
        let n = wire.len();
        wire.flip_bit(n - 1); // unencrypted tail bit
        let res = grand_decode_column(&cb, &key, wire, 1 << 12).unwrap();
        assert_eq!(res.message, Some(msg));
        assert_eq!(res.noise_weight, 1);
        assert!(res.queries <= 1 + n as u64);
    }

    #[test]
    fn grand_agrees_with_oracle_on_random_trials() {
        // 500 random trials at (k_u=4, l=8, w=2, r=r0=2, p=0.08): every
        // non-abandoned result lies in the oracle's minimum-distance set.
        let (cb, key) = setup();
        let p = 0.08;
        let budget = default_budget(cb.params().wire_bits(), p);
        let mut msg_rng = derive_stream(100, Domain::Message, 0, 0);
        for trial in 0..500u64 {
            let msg = ColumnWord::from_value(msg_rng.next_u64(), 4);
            let nonce = ColumnWord::from_value(msg_rng.next_u64(), 2);
            let wire = pipeline::crypt2_encode_column(&cb, &key, msg, nonce).unwrap();
            let mut ch = derive_stream(100, Domain::Channel, trial, 0);
            let (received, _) = crate::channel::bsc_transmit(wire, p, &mut ch);
            let res = grand_decode_column(&cb, &key, received, budget).unwrap();
            if res.abandoned {
                continue;
            }
            let oracle = brute_force_ml_oracle(&cb, &key, received).unwrap();
            assert_eq!(res.noise_weight, oracle.min_distance, "trial {}", trial);
            assert!(oracle.contains_location(res.location.unwrap()), "trial {}", trial);
        }
    }

    #[test]
    fn oracle_exact_wire_is_distance_zero() {
        let (cb, key) = setup();
        let msg = ColumnWord::from_value(0b0101, 4);
        let nonce = ColumnWord::from_value(0b11, 2);
        let wire = pipeline::crypt2_encode_column(&cb, &key, msg, nonce).unwrap();
        let oracle = brute_force_ml_oracle(&cb, &key, wire).unwrap();
        assert_eq!(oracle.min_distance, 0);
        // Singleton absent codeword collisions (wire includes the nonce, so
        // distinct nonces cannot tie at distance zero).
        assert_eq!(oracle.tie_class_size(), 1);
        assert_eq!(oracle.candidates[0].message, msg);
    }

    #[test]
    fn oracle_reports_ties() {
        // Seed search for a received word with at least two candidates at
        // the minimal distance.
        let (cb, key) = setup();
        let mut rng = derive_stream(7, Domain::Game, 0, 0);
        let mut found = false;
        for _ in 0..200 {
            let received = ColumnWord::from_value(rng.next_u64(), cb.params().wire_bits());
            let oracle = brute_force_ml_oracle(&cb, &key, received).unwrap();
            if oracle.tie_class_size() >= 2 {
                found = true;
                break;
            }
        }
        assert!(found, "no tie fixture found");
    }

    #[test]
    fn abandonment_is_monotone_in_budget() {
        let (cb, key) = setup();
        let mut rng = derive_stream(8, Domain::Game, 0, 0);
        for _ in 0..50 {
            let received = ColumnWord::from_value(rng.next_u64(), cb.params().wire_bits());
            let small = grand_decode_column(&cb, &key, received, 40).unwrap();
            let large = grand_decode_column(&cb, &key, received, 4096).unwrap();
            if !small.abandoned {
                // A bigger budget never changes a non-abandoned result.
                assert_eq!(small.message, large.message);
                assert_eq!(small.queries, large.queries);
            }
        }
    }

    #[test]
    fn matrix_block_error_is_or_of_columns() {
        let (cb, key) = setup();
        let params = *cb.params();
        let budget = default_budget(params.wire_bits(), 0.08);
        for seed in 0..100u64 {
            let mut rng = derive_stream(seed, Domain::Message, 0, 0);
            let truth: Vec<ColumnWord> = (0..4)
                .map(|_| ColumnWord::from_value(rng.next_u64(), 4))
                .collect();
            let wires: Vec<ColumnWord> = truth
                .iter()
                .enumerate()
                .map(|(i, &m)| {
                    let nonce = ColumnWord::from_value(rng.next_u64(), 2);
                    let wire = pipeline::crypt2_encode_column(&cb, &key, m, nonce).unwrap();
                    let mut ch = derive_stream(seed, Domain::Channel, i as u64, 0);
                    crate::channel::bsc_transmit(wire, 0.08, &mut ch).0
                })
                .collect();
            let dec = decode_matrix(&cb, &key, &wires, budget).unwrap();
            let column_errors: Vec<bool> = dec
                .recovered
                .iter()
                .zip(&truth)
                .map(|(got, want)| got.as_ref() != Some(want))
                .collect();
            assert_eq!(dec.block_error_vs(&truth), column_errors.iter().any(|&e| e));
        }
    }

    #[test]
    fn noiseless_matrix_uses_one_query_per_column() {
        let (cb, key) = setup();
        let mut rng = derive_stream(5, Domain::Message, 0, 0);
        let truth: Vec<ColumnWord> =
            (0..4).map(|_| ColumnWord::from_value(rng.next_u64(), 4)).collect();
        let wires: Vec<ColumnWord> = truth
            .iter()
            .map(|&m| {
                let nonce = ColumnWord::from_value(rng.next_u64(), 2);
                pipeline::crypt2_encode_column(&cb, &key, m, nonce).unwrap()
            })
            .collect();
        let dec = decode_matrix(&cb, &key, &wires, 1024).unwrap();
        assert!(!dec.block_error_vs(&truth));
        assert_eq!(dec.total_queries(), 4);
    }
}
