use serde::{Deserialize, Serialize};

use crate::{ChainError, EccParams};

/// Packet and frame layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameConfig {
    /// Information bits per packet.
    pub np: usize,
    /// Modulation order, 2 or 4.
    pub nm: usize,
    /// Spreading length.
    pub nd: usize,
    /// Interleaver depth in rows.
    pub interleave_rows: usize,
}

impl FrameConfig {
    pub fn log2_nm(&self) -> usize {
        match self.nm {
            4 => 2,
            _ => 1,
        }
    }

    /// Information-carrying (pre-spreading) bits per DAFT frame of `n` bins.
    pub fn bits_per_frame(&self, n: usize) -> usize {
        n * self.log2_nm() / self.nd
    }

    /// Codewords per packet, `G = Np / Ni`.
    pub fn codewords_per_packet(&self, ecc: &EccParams) -> usize {
        self.np / ecc.ni
    }

    pub fn coded_bits_per_packet(&self, ecc: &EccParams) -> usize {
        self.codewords_per_packet(ecc) * ecc.no
    }

    pub fn validate(&self, n: usize, ecc: &EccParams) -> Result<(), ChainError> {
        ecc.validate()?;
        if self.nm != 2 && self.nm != 4 {
            return Err(ChainError::Config(format!("modulation order {} not supported", self.nm)));
        }
        if self.nd == 0 || (n * self.log2_nm()) % self.nd != 0 {
            return Err(ChainError::Config(format!(
                "Nd = {} must divide N log2(Nm) = {}",
                self.nd,
                n * self.log2_nm()
            )));
        }
        if self.np == 0 || self.np % ecc.ni != 0 {
            return Err(ChainError::Config(format!("Np = {} must be a positive multiple of Ni = {}", self.np, ecc.ni)));
        }
        let bpf = self.bits_per_frame(n);
        if self.interleave_rows == 0 || self.interleave_rows % bpf != 0 {
            return Err(ChainError::Config(format!(
                "interleaver depth {} must be a multiple of the {bpf} bits per frame",
                self.interleave_rows
            )));
        }
        Ok(())
    }
}
