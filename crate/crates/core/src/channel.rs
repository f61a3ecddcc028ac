//! BSC transmission toward the legitimate receiver and noiseless
//! eavesdropper taps.
//!
//! Eve observes the matrix *before* noise is applied; the simulator
//! snapshots the transmitted matrix for taps, leaving the receiver's copy
//! untouched.

use alloc::vec::Vec;
use core::fmt;

use rand_core::RngCore;

use crate::bits::ColumnWord;
use crate::rng::next_unit_f64;

#[derive(Clone, Debug, PartialEq)]
pub enum ChannelError {
    RowOutOfRange { row: usize, rows: usize },
}

impl fmt::Display for ChannelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelError::RowOutOfRange { row, rows } => {
                write!(f, "tap row {} out of range for a {}-row matrix", row, rows)
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ChannelError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EveKind {
    Weak,
    Strong,
}

/// A noiseless eavesdropper view of selected rows.
#[derive(Clone, Debug, PartialEq)]
pub struct EveView {
    pub kind: EveKind,
    /// Observed row indices, ascending.
    pub rows: Vec<u32>,
    /// Per column, the observed bits in row order.
    pub columns: Vec<ColumnWord>,
}

/// Flip each bit independently with probability `p`, returning the noisy
/// column and the noise vector actually applied.
pub fn bsc_transmit(column: ColumnWord, p: f64, rng: &mut impl RngCore) -> (ColumnWord, ColumnWord) {
    debug_assert!((0.0..0.5).contains(&p));
    let mut noise = ColumnWord::zero(column.len());
    for i in 0..column.len() {
        if next_unit_f64(rng) < p {
            noise.set_bit(i, 1);
        }
    }
    (column.xor(&noise), noise)
}

/// Weak tap: the exact pre-noise bits of the selected rows.
pub fn tap_weak(transmitted: &[ColumnWord], omega: &[u32]) -> Result<EveView, ChannelError> {
    let rows = transmitted.first().map(|c| c.len()).unwrap_or(0) as usize;
    let mut sorted: Vec<u32> = omega.to_vec();
    sorted.sort_unstable();
    for &row in &sorted {
        if row as usize >= rows {
            return Err(ChannelError::RowOutOfRange { row: row as usize, rows });
        }
    }
    let columns = transmitted
        .iter()
        .map(|col| {
            let mut view = ColumnWord::zero(sorted.len() as u32);
            for (i, &row) in sorted.iter().enumerate() {
                view.set_bit(i as u32, col.bit(row));
            }
            view
        })
        .collect();
    Ok(EveView { kind: EveKind::Weak, rows: sorted, columns })
}

/// Strong tap: a full noiseless copy of every row.
pub fn tap_strong(transmitted: &[ColumnWord]) -> EveView {
    let rows = transmitted.first().map(|c| c.len()).unwrap_or(0);
    EveView {
        kind: EveKind::Strong,
        rows: (0..rows).collect(),
        columns: transmitted.to_vec(),
    }
}
