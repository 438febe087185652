use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ChainError;

/// Bounded-distance code model: `Ni` information bits per `No`-bit
/// codeword, decodable iff at most `Ne` of the `No` bits are in error.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EccParams {
    pub ni: usize,
    pub no: usize,
    pub ne: usize,
}

impl EccParams {
    pub fn new(ni: usize, no: usize, ne: usize) -> Result<Self, ChainError> {
        let e = Self { ni, no, ne };
        e.validate()?;
        Ok(e)
    }

    /// `(17, 31, 7)`, the bit-level stand-in for RS(31, 17).
    pub fn rs31_17() -> Self {
        Self { ni: 17, no: 31, ne: 7 }
    }

    pub fn validate(&self) -> Result<(), ChainError> {
        if self.ni == 0 || self.ni > self.no {
            return Err(ChainError::Config(format!("need 0 < Ni <= No, got Ni = {}, No = {}", self.ni, self.no)));
        }
        if self.ne >= self.no {
            return Err(ChainError::Config(format!("need Ne < No, got Ne = {}, No = {}", self.ne, self.no)));
        }
        Ok(())
    }

    pub fn rate(&self) -> f64 {
        self.ni as f64 / self.no as f64
    }
}

const PARITY_SEED: u64 = 0x5eed_0f_f111;

/// Systematic grouping: each `Ni`-bit block is followed by `No - Ni` fill
/// bits drawn from a fixed generator, so the fill never depends on data.
pub fn ecc_encode(info: &[u8], ecc: &EccParams) -> Result<Vec<u8>, ChainError> {
    ecc.validate()?;
    if info.len() % ecc.ni != 0 {
        return Err(ChainError::Dimension { expected: info.len().next_multiple_of(ecc.ni), got: info.len() });
    }
    let mut fill = ChaCha8Rng::seed_from_u64(PARITY_SEED);
    let mut out = Vec::with_capacity(info.len() / ecc.ni * ecc.no);
    for block in info.chunks_exact(ecc.ni) {
        out.extend_from_slice(block);
        out.extend((ecc.ni..ecc.no).map(|_| fill.gen::<bool>() as u8));
    }
    Ok(out)
}

/// Per-codeword decoding outcome: success iff the Hamming distance to the
/// transmitted codeword is at most `Ne`.
pub fn ecc_decode(received: &[u8], reference: &[u8], ecc: &EccParams) -> Result<Vec<bool>, ChainError> {
    ecc.validate()?;
    if received.len() != reference.len() {
        return Err(ChainError::Dimension { expected: reference.len(), got: received.len() });
    }
    if received.len() % ecc.no != 0 {
        return Err(ChainError::Dimension { expected: received.len().next_multiple_of(ecc.no), got: received.len() });
    }
    Ok(received
        .chunks_exact(ecc.no)
        .zip(reference.chunks_exact(ecc.no))
        .map(|(r, t)| r.iter().zip(t).filter(|(a, b)| (*a ^ *b) & 1 == 1).count() <= ecc.ne)
        .collect())
}

/// A packet succeeds only if all of its codewords do.
pub fn packet_success(codewords: &[bool]) -> bool {
    codewords.iter().all(|&c| c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(EccParams::new(0, 31, 7).is_err());
        assert!(EccParams::new(32, 31, 7).is_err());
        assert!(EccParams::new(17, 31, 31).is_err());
        assert!(EccParams::new(17, 31, 7).is_ok());
    }

    #[test]
    fn encode_is_systematic_and_data_independent() {
        let ecc = EccParams::rs31_17();
        let a = ecc_encode(&[0u8; 34], &ecc).unwrap();
        let b = ecc_encode(&[1u8; 34], &ecc).unwrap();
        assert_eq!(a.len(), 62);
        assert_eq!(&b[..17], &[1u8; 17]);
        assert_eq!(&a[17..31], &b[17..31]);
        assert_eq!(&a[48..62], &b[48..62]);
    }

    #[test]
    fn boundary_at_ne() {
        let ecc = EccParams::rs31_17();
        let tx = ecc_encode(&[0u8; 17], &ecc).unwrap();
        assert_eq!(ecc_decode(&tx, &tx, &ecc).unwrap(), vec![true]);
        let mut rx = tx.clone();
        for b in rx.iter_mut().take(7) {
            *b ^= 1;
        }
        assert_eq!(ecc_decode(&rx, &tx, &ecc).unwrap(), vec![true]);
        rx[30] ^= 1;
        assert_eq!(ecc_decode(&rx, &tx, &ecc).unwrap(), vec![false]);
        assert!(!packet_success(&[true, false]));
    }
}
