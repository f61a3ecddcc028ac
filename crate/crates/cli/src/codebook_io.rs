//! Codebook file format.
//!
//! Flat binary: `NHCB` magic, u16 format version, the seven parameter
//! fields, the generation seed, then every codeword as a little-endian
//! u64 in generation order (bin-major). Generation is deterministic in
//! (params, seed), so import regenerates and verifies the stored words
//! bit for bit — a corrupted file cannot load.

use std::fmt;
use std::path::Path;

use nhuncc_core::codebook::Codebook;
use nhuncc_core::params::SystemParams;

const MAGIC: &[u8; 4] = b"NHCB";
const FORMAT_VERSION: u16 = 1;

#[derive(Debug)]
pub enum CodebookFileError {
    Io(String),
    BadMagic,
    BadVersion(u16),
    Truncated,
    Params(String),
    Mismatch { index: u64 },
}

impl fmt::Display for CodebookFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodebookFileError::Io(m) => write!(f, "codebook io: {}", m),
            CodebookFileError::BadMagic => write!(f, "not a codebook file"),
            CodebookFileError::BadVersion(v) => write!(f, "unsupported format version {}", v),
            CodebookFileError::Truncated => write!(f, "codebook file truncated"),
            CodebookFileError::Params(m) => write!(f, "codebook params: {}", m),
            CodebookFileError::Mismatch { index } => {
                write!(f, "stored codeword {} does not match its seed", index)
            }
        }
    }
}

impl std::error::Error for CodebookFileError {}

pub fn export(codebook: &Codebook, path: &Path) -> Result<(), CodebookFileError> {
    let p = codebook.params();
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    for v in [p.num_links, p.eve_links, p.msg_bits, p.eps_bits, p.cipher_rand_bits, p.cipher_expand_bits] {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    buf.extend_from_slice(&p.flip_prob.to_bits().to_le_bytes());
    buf.extend_from_slice(&codebook.seed().to_le_bytes());
    for word in codebook.codewords() {
        buf.extend_from_slice(&word.to_le_bytes());
    }
    std::fs::write(path, buf).map_err(|e| CodebookFileError::Io(format!("{}: {}", path.display(), e)))
}

struct Reader<'a> {
    data: &'a [u8],
    at: usize,
}

impl Reader<'_> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N], CodebookFileError> {
        if self.at + N > self.data.len() {
            return Err(CodebookFileError::Truncated);
        }
        let mut out = [0u8; N];
        out.copy_from_slice(&self.data[self.at..self.at + N]);
        self.at += N;
        Ok(out)
    }
    fn u32(&mut self) -> Result<u32, CodebookFileError> {
        Ok(u32::from_le_bytes(self.take()?))
    }
    fn u64(&mut self) -> Result<u64, CodebookFileError> {
        Ok(u64::from_le_bytes(self.take()?))
    }
}

pub fn import(path: &Path) -> Result<Codebook, CodebookFileError> {
    let data = std::fs::read(path)
        .map_err(|e| CodebookFileError::Io(format!("{}: {}", path.display(), e)))?;
    let mut r = Reader { data: &data, at: 0 };
    if &r.take::<4>()? != MAGIC {
        return Err(CodebookFileError::BadMagic);
    }
    let version = u16::from_le_bytes(r.take::<2>()?);
    if version != FORMAT_VERSION {
        return Err(CodebookFileError::BadVersion(version));
    }
    let num_links = r.u32()?;
    let eve_links = r.u32()?;
    let msg_bits = r.u32()?;
    let eps_bits = r.u32()?;
    let cipher_rand_bits = r.u32()?;
    let cipher_expand_bits = r.u32()?;
    let flip_prob = f64::from_bits(r.u64()?);
    let seed = r.u64()?;
    let params = SystemParams::new(
        num_links,
        flip_prob,
        eve_links,
        msg_bits,
        eps_bits,
        cipher_rand_bits,
        cipher_expand_bits,
    )
    .map_err(|e| CodebookFileError::Params(e.to_string()))?;
    let codebook = Codebook::generate(&params, seed)
        .map_err(|e| CodebookFileError::Params(e.to_string()))?;
    for (index, word) in codebook.codewords().enumerate() {
        let stored = r.u64()?;
        if stored != word {
            return Err(CodebookFileError::Mismatch { index: index as u64 });
        }
    }
    if r.at != data.len() {
        return Err(CodebookFileError::Mismatch { index: u64::MAX });
    }
    Ok(codebook)
}

/// Textual dump: one `bin position hex` row per codeword.
pub fn hex_dump(codebook: &Codebook) -> String {
    let p = codebook.params();
    let width = ((p.num_links + 3) / 4) as usize;
    let mut out = String::new();
    let mut iter = codebook.codewords();
    for bin in 0..p.num_bins() {
        for pos in 0..p.delta() {
            let word = iter.next().expect("generation order");
            out.push_str(&format!("{:04} {:04} {:0w$x}\n", bin, pos, word, w = width));
        }
    }
    out
}
