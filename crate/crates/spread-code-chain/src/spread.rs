use daft_core::{DaftSignal, C64};

use crate::{map_constellation, soft_chips, ChainError, SpreadingSequence};

/// Symbol-level spreading: symbol `s` occupies bins `s*Nd .. (s+1)*Nd`,
/// multiplied chipwise by the sequence.
pub fn spread(symbols: &[C64], seq: &SpreadingSequence) -> DaftSignal {
    DaftSignal::new(symbols.iter().flat_map(|&c| seq.chips.iter().map(move |&d| c * d)).collect())
}

/// Inverse of [`spread`] up to the factor `R_d(0) = Nd`:
/// `c_hat[s] = sum_n d[n] x[s*Nd + n]`.
pub fn despread(x: &[C64], seq: &SpreadingSequence) -> Result<Vec<C64>, ChainError> {
    let nd = seq.nd();
    if x.len() % nd != 0 {
        return Err(ChainError::Dimension { expected: x.len().next_multiple_of(nd), got: x.len() });
    }
    Ok(x.chunks_exact(nd).map(|blk| blk.iter().zip(&seq.chips).map(|(v, d)| v * *d).sum()).collect())
}

/// Chip-stream spreading used by the link: every bit becomes `Nd` antipodal
/// chips `(1 - 2b) d[n]`, and the chip stream is Gray mapped two chips per
/// QPSK bin (one per BPSK bin). Needs only `Nd | N log2(Nm)`, not `Nd | N`.
pub fn spread_bits(bits: &[u8], seq: &SpreadingSequence, nm: usize) -> Result<DaftSignal, ChainError> {
    let dbits = seq.bits();
    let chips: Vec<u8> = bits.iter().flat_map(|&b| dbits.iter().map(move |&d| (b & 1) ^ d)).collect();
    Ok(DaftSignal::new(map_constellation(&chips, nm)?))
}

/// Per-bit correlation statistics for [`spread_bits`]; positive means bit 0.
pub fn despread_bits(x: &[C64], seq: &SpreadingSequence, nm: usize) -> Result<Vec<f64>, ChainError> {
    let soft = soft_chips(x, nm)?;
    let nd = seq.nd();
    if soft.len() % nd != 0 {
        return Err(ChainError::Dimension { expected: soft.len().next_multiple_of(nd), got: soft.len() });
    }
    Ok(soft.chunks_exact(nd).map(|blk| blk.iter().zip(&seq.chips).map(|(v, d)| v * d).sum()).collect())
}
