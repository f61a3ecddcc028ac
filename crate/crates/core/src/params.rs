//! Scheme parameters: derivation, validation, and the rate condition.
//!
//! Naming follows the roles the values play on the wire: `num_links` links
//! carry one codeword bit each, `msg_bits` message bits enter per column,
//! the eavesdropper sees `eve_links` of them, and the cipher adds
//! `cipher_rand_bits` of randomness while expanding the output by
//! `cipher_expand_bits`.

use core::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum ParamError {
    /// Probability outside its legal range.
    Domain(&'static str),
    /// No message width satisfies the feasibility bound.
    Infeasible(&'static str),
    /// A structural invariant is violated.
    Invalid(&'static str),
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamError::Domain(m) => write!(f, "domain error: {}", m),
            ParamError::Infeasible(m) => write!(f, "infeasible parameters: {}", m),
            ParamError::Invalid(m) => write!(f, "invalid parameters: {}", m),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ParamError {}

/// Binary entropy in bits, with `0 log 0 := 0`.
pub fn binary_entropy(p: f64) -> Result<f64, ParamError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(ParamError::Domain("entropy argument must lie in [0, 1]"));
    }
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    Ok(-p * libm::log2(p) - (1.0 - p) * libm::log2(1.0 - p))
}

/// All scheme parameters for one configuration.
///
/// `eps_bits` carries the binning slack as the integer `k_u * eps`; the
/// fraction `eps` itself never appears in the arithmetic, which keeps every
/// bin/position width exact.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemParams {
    /// Links, and bits per codeword column (`l`).
    pub num_links: u32,
    /// BSC bit-flip probability, in [0, 1/2).
    pub flip_prob: f64,
    /// Links observed by the weak eavesdropper (`w`).
    pub eve_links: u32,
    /// Message bits per column (`k_u`).
    pub msg_bits: u32,
    /// Individually-secure message count (`k_s`).
    pub secure_bits: u32,
    /// Integer slack `k_u * eps`.
    pub eps_bits: u32,
    /// Total BSC entropy per column, `l * H(p)`.
    pub noise_rate: f64,
    /// Encrypted links, `c = l - w`.
    pub encrypted_links: u32,
    /// Randomness consumed by the cipher per column (`r0`).
    pub cipher_rand_bits: u32,
    /// Output expansion of the cipher per column (`r >= r0`).
    pub cipher_expand_bits: u32,
}

/// Outcome of the reliability rate check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateCheck {
    pub satisfied: bool,
    /// `(k_u + r0) / (l + r)`.
    pub lhs: f64,
    /// `1 - H(p)`.
    pub capacity: f64,
    /// `k_u / (l + r)`.
    pub effective_rate: f64,
}

impl SystemParams {
    /// Build from an explicit message width.
    ///
    /// Only structural invariants are enforced here; the feasibility bound
    /// of the derivation is *not*, so configurations above capacity can be
    /// constructed deliberately for reliability experiments. Use
    /// [`SystemParams::derive`] to obtain the largest feasible width.
    pub fn new(
        num_links: u32,
        flip_prob: f64,
        eve_links: u32,
        msg_bits: u32,
        eps_bits: u32,
        cipher_rand_bits: u32,
        cipher_expand_bits: u32,
    ) -> Result<Self, ParamError> {
        if eve_links >= num_links {
            return Err(ParamError::Invalid("eavesdropper must observe fewer links than exist"));
        }
        let noise_rate = num_links as f64 * binary_entropy(flip_prob)?;
        let secure_bits =
            msg_bits.saturating_sub(eve_links + 2 * eps_bits);
        let params = SystemParams {
            num_links,
            flip_prob,
            eve_links,
            msg_bits,
            secure_bits,
            eps_bits,
            noise_rate,
            encrypted_links: num_links - eve_links,
            cipher_rand_bits,
            cipher_expand_bits,
        };
        params.validate()?;
        Ok(params)
    }

    /// Derive the largest feasible message width per the achievability
    /// bound `k_u <= l - nu - eps_bits / k_u`, by downward scan.
    pub fn derive(
        num_links: u32,
        flip_prob: f64,
        eve_links: u32,
        eps_bits: u32,
        cipher_rand_bits: u32,
        cipher_expand_bits: u32,
    ) -> Result<Self, ParamError> {
        if num_links < 2 {
            return Err(ParamError::Invalid("need at least 2 links"));
        }
        if !(0.0..0.5).contains(&flip_prob) {
            return Err(ParamError::Domain("flip probability must lie in [0, 1/2)"));
        }
        if eve_links >= num_links {
            return Err(ParamError::Invalid("eavesdropper must observe fewer links than exist"));
        }
        if cipher_expand_bits < cipher_rand_bits {
            return Err(ParamError::Invalid("cipher expansion must cover its randomness"));
        }
        let noise_rate = num_links as f64 * binary_entropy(flip_prob)?;
        let mut k_u = num_links;
        while k_u >= 1 {
            let bound = num_links as f64 - noise_rate - eps_bits as f64 / k_u as f64;
            if (k_u as f64) <= bound && k_u > eve_links + eps_bits {
                break;
            }
            k_u -= 1;
        }
        if k_u == 0 {
            return Err(ParamError::Infeasible(
                "no message width satisfies the achievability bound",
            ));
        }
        let secure_bits = k_u.saturating_sub(eve_links + 2 * eps_bits);
        let params = SystemParams {
            num_links,
            flip_prob,
            eve_links,
            msg_bits: k_u,
            secure_bits,
            eps_bits,
            noise_rate,
            encrypted_links: num_links - eve_links,
            cipher_rand_bits,
            cipher_expand_bits,
        };
        params.validate()?;
        Ok(params)
    }

    /// Structural invariants shared by both construction paths.
    pub fn validate(&self) -> Result<(), ParamError> {
        if self.num_links < 2 {
            return Err(ParamError::Invalid("need at least 2 links"));
        }
        if !(0.0..0.5).contains(&self.flip_prob) {
            return Err(ParamError::Domain("flip probability must lie in [0, 1/2)"));
        }
        if self.eve_links >= self.num_links {
            return Err(ParamError::Invalid("eavesdropper must observe fewer links than exist"));
        }
        if self.msg_bits == 0 {
            return Err(ParamError::Invalid("message width must be positive"));
        }
        if self.msg_bits <= self.eve_links + self.eps_bits {
            return Err(ParamError::Infeasible("bin index needs at least one bit"));
        }
        if self.encrypted_links != self.num_links - self.eve_links
            || self.encrypted_links == 0
        {
            return Err(ParamError::Invalid("encrypted link count must equal l - w > 0"));
        }
        if self.cipher_expand_bits < self.cipher_rand_bits {
            return Err(ParamError::Invalid("cipher expansion must cover its randomness"));
        }
        if self.secure_bits > self.msg_bits {
            return Err(ParamError::Invalid("secure count cannot exceed message width"));
        }
        if self.wire_bits() > 64 {
            return Err(ParamError::Invalid("wire column wider than 64 bits"));
        }
        Ok(())
    }

    /// Whether the derived feasibility bound holds for this width.
    pub fn is_feasible(&self) -> bool {
        let bound = self.num_links as f64
            - self.noise_rate
            - self.eps_bits as f64 / self.msg_bits as f64;
        self.msg_bits as f64 <= bound
    }

    /// Bin index width: `k_u - (w + eps_bits)`.
    pub fn bin_index_bits(&self) -> u32 {
        self.msg_bits - (self.eve_links + self.eps_bits)
    }

    /// Position width within a bin: `w + eps_bits`.
    pub fn position_bits(&self) -> u32 {
        self.eve_links + self.eps_bits
    }

    /// Bin size `Delta = 2^position_bits`.
    pub fn delta(&self) -> u64 {
        1u64 << self.position_bits()
    }

    pub fn num_bins(&self) -> u64 {
        1u64 << self.bin_index_bits()
    }

    /// Wire column width `l + r`.
    pub fn wire_bits(&self) -> u32 {
        self.num_links + self.cipher_expand_bits
    }

    /// Ciphertext width per column, `c + r`.
    pub fn cipher_bits(&self) -> u32 {
        self.encrypted_links + self.cipher_expand_bits
    }

    pub fn check_rate_condition(&self) -> RateCheck {
        let n = (self.num_links + self.cipher_expand_bits) as f64;
        let lhs = (self.msg_bits + self.cipher_rand_bits) as f64 / n;
        let capacity = 1.0 - binary_entropy(self.flip_prob).expect("validated p");
        RateCheck {
            satisfied: lhs < capacity,
            lhs,
            capacity,
            effective_rate: self.msg_bits as f64 / n,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_endpoints_and_midpoint() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        // High-precision evaluation of the closed form at p = 0.11.
        let h = binary_entropy(0.11).unwrap();
        assert!((h - 0.499915958165).abs() < 1e-9, "H(0.11) = {}", h);
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.1).is_err());
    }

    #[test]
    fn derive_noiseless_no_eavesdropper() {
        let p = SystemParams::derive(8, 0.0, 0, 0, 0, 0).unwrap();
        assert_eq!(p.msg_bits, 8);
        assert_eq!(p.secure_bits, 8);
        assert_eq!(p.noise_rate, 0.0);
    }

    #[test]
    fn derive_picks_largest_feasible_width() {
        // l=16, p=0.05: nu = 16 H(0.05) ~ 4.58235, so l - nu ~ 11.4176.
        // Direct arithmetic: k=11 satisfies 11 <= 16 - nu - 1/11 = 11.3267,
        // k=12 does not, so the downward scan stops at 11.
        let p = SystemParams::derive(16, 0.05, 2, 1, 4, 4).unwrap();
        assert!((p.noise_rate - 4.582351).abs() < 1e-4);
        assert_eq!(p.msg_bits, 11);
        assert_eq!(p.secure_bits, 11 - 2 - 2);
        assert_eq!(p.encrypted_links, 14);
        assert!(p.is_feasible());
        // Feeding the derived width back through validation keeps it intact.
        assert!(p.validate().is_ok());
    }

    #[test]
    fn derive_infeasible_near_half() {
        // l=4, p=0.45: l - nu ~ 0.03 < 1, no width can work.
        let err = SystemParams::derive(4, 0.45, 3, 1, 0, 0).unwrap_err();
        assert!(matches!(err, ParamError::Infeasible(_)));
    }

    #[test]
    fn rate_condition_examples() {
        let p = SystemParams::new(16, 0.05, 2, 10, 1, 4, 4).unwrap();
        let rc = p.check_rate_condition();
        assert!((rc.lhs - 0.7).abs() < 1e-12);
        assert!((rc.capacity - 0.7136030).abs() < 1e-4);
        assert!(rc.satisfied);
        assert!((rc.effective_rate - 0.5).abs() < 1e-12);

        // Boundary: lhs == capacity is NOT satisfied (strict inequality).
        let p = SystemParams::new(8, 0.0, 0, 8, 0, 0, 0).unwrap();
        let rc = p.check_rate_condition();
        assert_eq!(rc.lhs, 1.0);
        assert_eq!(rc.capacity, 1.0);
        assert!(!rc.satisfied);

        let p = SystemParams::new(16, 0.11, 0, 4, 0, 0, 0).unwrap();
        let rc = p.check_rate_condition();
        assert_eq!(rc.lhs, 0.25);
        assert!((rc.capacity - 0.5000840).abs() < 1e-4);
        assert!(rc.satisfied);
    }

    #[test]
    fn bin_and_position_widths_partition_the_message() {
        for k_u in [4u32, 8, 10, 12] {
            let p = SystemParams::new(k_u + 8, 0.05, 2, k_u, 1, 2, 2).unwrap();
            assert_eq!(p.bin_index_bits() + p.position_bits(), p.msg_bits);
            assert_eq!(p.num_bins() * p.delta(), 1u64 << p.msg_bits);
        }
    }

    #[test]
    fn derived_width_monotone_in_flip_prob() {
        let mut last = u32::MAX;
        for p in [0.0, 0.02, 0.05, 0.1, 0.15, 0.2] {
            let sp = SystemParams::derive(16, p, 2, 1, 0, 0).unwrap();
            assert!(sp.msg_bits <= last);
            last = sp.msg_bits;
        }
    }

    #[test]
    fn explicit_width_may_exceed_capacity() {
        // Above-capacity configurations are constructible on purpose.
        let p = SystemParams::new(12, 0.1, 0, 8, 0, 0, 0).unwrap();
        assert!(!p.is_feasible());
        assert!(!p.check_rate_condition().satisfied);
    }
}
