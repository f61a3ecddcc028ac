//! Flat key=value run configuration.
//!
//! One key per line, `#` starts a comment. Flags mirror the same keys and
//! override file values. Serialization is lossless: `to_text` emits every
//! resolved key in a fixed order, and parsing that text reproduces the
//! config exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use nhuncc_core::crypto::CipherKey;
use nhuncc_core::params::{ParamError, SystemParams};
use serde::Serialize;

#[derive(Debug)]
pub enum ConfigError {
    Io(String),
    Parse(String),
    UnknownKey(String),
    Params(ParamError),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io(m) => write!(f, "config io: {}", m),
            ConfigError::Parse(m) => write!(f, "config parse: {}", m),
            ConfigError::UnknownKey(k) => write!(f, "unknown config key: {}", k),
            ConfigError::Params(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for ConfigError {}

impl From<ParamError> for ConfigError {
    fn from(e: ParamError) -> Self {
        ConfigError::Params(e)
    }
}

/// Everything an experiment needs, seeds included.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub num_links: u32,
    pub flip_prob: f64,
    pub eve_links: u32,
    /// Explicit message width; absent means "derive the largest feasible".
    pub msg_bits: Option<u32>,
    pub eps_bits: u32,
    pub cipher_rand_bits: u32,
    pub cipher_expand_bits: u32,
    pub codebook_seed: u64,
    pub channel_seed: u64,
    pub nonce_seed: u64,
    pub message_seed: u64,
    pub game_seed: u64,
    /// 32 hex chars; `identity` selects the broken fixture.
    pub cipher_key: String,
    pub trials: u64,
    /// 0 means the default GRAND budget for the resolved dimensions.
    pub budget: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            num_links: 16,
            flip_prob: 0.05,
            eve_links: 2,
            msg_bits: None,
            eps_bits: 1,
            cipher_rand_bits: 4,
            cipher_expand_bits: 4,
            codebook_seed: 1,
            channel_seed: 2,
            nonce_seed: 3,
            message_seed: 4,
            game_seed: 5,
            cipher_key: "000102030405060708090a0b0c0d0e0f".into(),
            trials: 1000,
            budget: 0,
        }
    }
}

fn parse_num<T: core::str::FromStr>(key: &str, v: &str) -> Result<T, ConfigError> {
    v.parse()
        .map_err(|_| ConfigError::Parse(format!("bad value for {}: {}", key, v)))
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io(format!("{}: {}", path.display(), e)))?;
        let mut cfg = RunConfig::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ConfigError::Parse(format!("line {}: expected key=value", lineno + 1))
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "num_links" => self.num_links = parse_num(key, value)?,
            "flip_prob" => self.flip_prob = parse_num(key, value)?,
            "eve_links" => self.eve_links = parse_num(key, value)?,
            "msg_bits" => self.msg_bits = Some(parse_num(key, value)?),
            "eps_bits" => self.eps_bits = parse_num(key, value)?,
            "cipher_rand_bits" => self.cipher_rand_bits = parse_num(key, value)?,
            "cipher_expand_bits" => self.cipher_expand_bits = parse_num(key, value)?,
            "codebook_seed" => self.codebook_seed = parse_num(key, value)?,
            "channel_seed" => self.channel_seed = parse_num(key, value)?,
            "nonce_seed" => self.nonce_seed = parse_num(key, value)?,
            "message_seed" => self.message_seed = parse_num(key, value)?,
            "game_seed" => self.game_seed = parse_num(key, value)?,
            "cipher_key" => self.cipher_key = value.to_string(),
            "trials" => self.trials = parse_num(key, value)?,
            "budget" => self.budget = parse_num(key, value)?,
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    /// Emit every key in a fixed order; parsing this text round-trips.
    pub fn to_text(&self) -> String {
        let mut kv: BTreeMap<&str, String> = BTreeMap::new();
        kv.insert("num_links", self.num_links.to_string());
        kv.insert("flip_prob", format!("{}", self.flip_prob));
        kv.insert("eve_links", self.eve_links.to_string());
        if let Some(k) = self.msg_bits {
            kv.insert("msg_bits", k.to_string());
        }
        kv.insert("eps_bits", self.eps_bits.to_string());
        kv.insert("cipher_rand_bits", self.cipher_rand_bits.to_string());
        kv.insert("cipher_expand_bits", self.cipher_expand_bits.to_string());
        kv.insert("codebook_seed", self.codebook_seed.to_string());
        kv.insert("channel_seed", self.channel_seed.to_string());
        kv.insert("nonce_seed", self.nonce_seed.to_string());
        kv.insert("message_seed", self.message_seed.to_string());
        kv.insert("game_seed", self.game_seed.to_string());
        kv.insert("cipher_key", self.cipher_key.clone());
        kv.insert("trials", self.trials.to_string());
        kv.insert("budget", self.budget.to_string());
        let mut out = String::new();
        for (k, v) in kv {
            out.push_str(k);
            out.push('=');
            out.push_str(&v);
            out.push('\n');
        }
        out
    }

    /// Resolve scheme parameters: explicit width if given, otherwise the
    /// largest feasible one.
    pub fn resolve_params(&self) -> Result<SystemParams, ConfigError> {
        match self.msg_bits {
            Some(k_u) => Ok(SystemParams::new(
                self.num_links,
                self.flip_prob,
                self.eve_links,
                k_u,
                self.eps_bits,
                self.cipher_rand_bits,
                self.cipher_expand_bits,
            )?),
            None => Ok(SystemParams::derive(
                self.num_links,
                self.flip_prob,
                self.eve_links,
                self.eps_bits,
                self.cipher_rand_bits,
                self.cipher_expand_bits,
            )?),
        }
    }

    pub fn resolve_key(&self) -> Result<CipherKey, ConfigError> {
        if self.cipher_key == "identity" {
            return Ok(CipherKey::identity());
        }
        CipherKey::from_hex(&self.cipher_key)
            .map_err(|e| ConfigError::Parse(format!("cipher_key: {}", e)))
    }

    pub fn resolve_budget(&self, params: &SystemParams) -> u64 {
        if self.budget == 0 {
            nhuncc_core::grandec::default_budget(params.wire_bits(), params.flip_prob)
        } else {
            self.budget
        }
    }

    pub fn seeds(&self) -> nhuncc_core::pipeline::RunSeeds {
        nhuncc_core::pipeline::RunSeeds {
            codebook: self.codebook_seed,
            channel: self.channel_seed,
            nonce: self.nonce_seed,
            message: self.message_seed,
        }
    }
}
