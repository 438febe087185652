use serde::{Deserialize, Serialize};

use crate::ChainError;

/// A ±1 chip sequence of length `Nd`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpreadingSequence {
    pub chips: Vec<f64>,
}

impl SpreadingSequence {
    pub fn from_bits(bits: &[u8]) -> Self {
        Self { chips: bits.iter().map(|&b| 1.0 - 2.0 * f64::from(b & 1)).collect() }
    }

    /// All-ones sequence (no spreading code); `Nd = 1` gives plain modulation.
    pub fn ones(nd: usize) -> Self {
        Self { chips: vec![1.0; nd] }
    }

    pub fn nd(&self) -> usize {
        self.chips.len()
    }

    /// Chips as bits, `+1 -> 0` and `-1 -> 1`.
    pub fn bits(&self) -> Vec<u8> {
        self.chips.iter().map(|&c| u8::from(c < 0.0)).collect()
    }
}

/// Feedback masks of primitive polynomials for degrees 2 to 16. Bit `k - 1`
/// stands for the term `x^k`; the constant term is implied.
pub fn primitive_taps(degree: u32) -> Option<u32> {
    let mask = match degree {
        2 => 0b11,                       // x^2 + x + 1
        3 => 0b101,                      // x^3 + x + 1
        4 => 0b1001,                     // x^4 + x + 1
        5 => 0b10010,                    // x^5 + x^2 + 1
        6 => 0b100001,                   // x^6 + x + 1
        7 => 0b1000001,                  // x^7 + x + 1
        8 => 0b1000_1110,                // x^8 + x^4 + x^3 + x^2 + 1
        9 => 0b1_0000_1000,              // x^9 + x^4 + 1
        10 => 0b10_0000_0100,            // x^10 + x^3 + 1
        11 => 0b100_0000_0010,           // x^11 + x^2 + 1
        12 => 0b1000_0010_1001,          // x^12 + x^6 + x^4 + x + 1
        13 => 0b1_0000_0000_1101,        // x^13 + x^4 + x^3 + x + 1
        14 => 0b10_0010_0010_0001,       // x^14 + x^10 + x^6 + x + 1
        15 => 0b100_0000_0000_0001,      // x^15 + x + 1
        16 => 0b1000_1000_0000_0101,     // x^16 + x^12 + x^3 + x + 1
        _ => return None,
    };
    Some(mask)
}

/// Maximal-length sequence from a Fibonacci LFSR.
///
/// The register holds `s[n..n + r]` (bit `i` is `s[n + i]`), and
/// `s[n + r] = sum_k c_k s[n + k] mod 2` where `c_k` is the coefficient of
/// `x^k` in `taps` with `c_0 = 1`. Non-primitive masks are detected by an
/// early return to the seed state.
pub fn gen_mseq(degree: u32, taps: u32, seed_state: u32) -> Result<SpreadingSequence, ChainError> {
    if !(2..=16).contains(&degree) {
        return Err(ChainError::Domain(format!("LFSR degree {degree} outside 2..=16")));
    }
    let full = (1u32 << degree) - 1;
    let state0 = seed_state & full;
    if state0 == 0 {
        return Err(ChainError::Domain("LFSR seed state must be non-zero".into()));
    }
    if taps & (1 << (degree - 1)) == 0 || taps & !full != 0 {
        return Err(ChainError::Config(format!("taps {taps:#b} do not describe a degree-{degree} polynomial")));
    }
    // c_0 = 1 always; c_k for k in 1..r from the mask; the x^r bit is the leading term
    let feedback = (1 | (taps << 1)) & full;
    let period = full as usize;
    let mut state = state0;
    let mut bits = Vec::with_capacity(period);
    for step in 0..period {
        if step > 0 && state == state0 {
            return Err(ChainError::Config(format!("taps {taps:#b} are not primitive: period {step}")));
        }
        bits.push((state & 1) as u8);
        let fb = (state & feedback).count_ones() & 1;
        state = (state >> 1) | (fb << (degree - 1));
    }
    Ok(SpreadingSequence::from_bits(&bits))
}

/// Gold-family member: chipwise XOR of two m-sequences of equal degree, the
/// second cyclically shifted by `shift`.
pub fn gold(degree: u32, taps_a: u32, taps_b: u32, shift: usize) -> Result<SpreadingSequence, ChainError> {
    let a = gen_mseq(degree, taps_a, 1)?.bits();
    let b = gen_mseq(degree, taps_b, 1)?.bits();
    let n = a.len();
    let bits: Vec<u8> = (0..n).map(|i| a[i] ^ b[(i + shift) % n]).collect();
    Ok(SpreadingSequence::from_bits(&bits))
}

/// Periodic autocorrelation `R_d(k) = sum_n d[n] d[<n - k>]`.
pub fn autocorrelation(seq: &SpreadingSequence, k: usize) -> f64 {
    let nd = seq.nd();
    (0..nd).map(|n| seq.chips[n] * seq.chips[(n + nd - k % nd) % nd]).sum()
}

/// Default sequence for any `Nd`: the m-sequence when `Nd = 2^r - 1`,
/// otherwise the leading `Nd` chips of the shortest m-sequence that is long
/// enough. `Nd = 1` is the single chip `+1`.
pub fn sequence_for_length(nd: usize) -> Result<SpreadingSequence, ChainError> {
    if nd == 0 {
        return Err(ChainError::Domain("spreading length must be positive".into()));
    }
    if nd == 1 {
        return Ok(SpreadingSequence::ones(1));
    }
    let degree = (2..=16u32)
        .find(|&r| (1usize << r) - 1 >= nd)
        .ok_or_else(|| ChainError::Domain(format!("spreading length {nd} exceeds 65535")))?;
    let mut s = gen_mseq(degree, primitive_taps(degree).expect("table covers 2..=16"), 1)?;
    s.chips.truncate(nd);
    Ok(s)
}
