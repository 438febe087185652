use serde::{Deserialize, Serialize};

use crate::DaftError;

/// Chirp-transform configuration shared by every signal-domain operation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DaftParams {
    /// Number of subcarriers.
    pub n: usize,
    /// First chirp rate. `2 N c1` must be a non-negative integer.
    pub c1: f64,
    /// Second chirp rate.
    pub c2: f64,
    /// Prefix length in samples.
    pub ncp: usize,
}

impl DaftParams {
    pub fn new(n: usize, c1: f64, c2: f64, ncp: usize) -> Result<Self, DaftError> {
        let p = Self { n, c1, c2, ncp };
        p.validate()?;
        Ok(p)
    }

    /// `c1 = c2 = 0`: the DAFT collapses to the unitary DFT.
    pub fn ofdm(n: usize, ncp: usize) -> Result<Self, DaftError> {
        Self::new(n, 0.0, 0.0, ncp)
    }

    /// Default chirp rates for a maximum normalised Doppler `v_max`
    /// (cycles/sample): `c1 = (2 ceil(N v_max) + 1) / (2N)` and
    /// `c2 = 1 / (2 N^2)`.
    pub fn with_default_chirps(n: usize, ncp: usize, doppler_max_norm: f64) -> Result<Self, DaftError> {
        if !(doppler_max_norm >= 0.0) || !doppler_max_norm.is_finite() {
            return Err(DaftError::InvalidParams(format!(
                "maximum Doppler must be finite and non-negative, got {doppler_max_norm}"
            )));
        }
        let kmax = (n as f64 * doppler_max_norm - 1e-9).ceil().max(0.0);
        let nf = n as f64;
        Self::new(n, (2.0 * kmax + 1.0) / (2.0 * nf), 1.0 / (2.0 * nf * nf), ncp)
    }

    pub fn validate(&self) -> Result<(), DaftError> {
        if self.n < 2 {
            return Err(DaftError::InvalidParams(format!("N must be at least 2, got {}", self.n)));
        }
        if self.ncp >= self.n {
            return Err(DaftError::InvalidParams(format!(
                "prefix length {} must be smaller than N = {}",
                self.ncp, self.n
            )));
        }
        if !self.c1.is_finite() || !self.c2.is_finite() {
            return Err(DaftError::InvalidParams("chirp rates must be finite".into()));
        }
        let q = 2.0 * self.n as f64 * self.c1;
        if q < -1e-9 || (q - q.round()).abs() > 1e-9 {
            return Err(DaftError::InvalidParams(format!(
                "2*N*c1 must be a non-negative integer, got {q}"
            )));
        }
        Ok(())
    }

    /// The integer `2 N c1`.
    pub fn q(&self) -> usize {
        (2.0 * self.n as f64 * self.c1).round() as usize
    }

    /// `c1 n^2 mod 1`, evaluated in exact integer arithmetic.
    pub fn chirp1_turns(&self, n: i64) -> f64 {
        let two_n = 2 * self.n as i128;
        let num = (self.q() as i128 * (n as i128) * (n as i128)).rem_euclid(two_n);
        num as f64 / two_n as f64
    }

    /// `c2 m^2 mod 1`.
    pub fn chirp2_turns(&self, m: i64) -> f64 {
        let v = self.c2 * (m as f64) * (m as f64);
        v - v.floor()
    }

    pub fn is_ofdm(&self) -> bool {
        self.c1 == 0.0 && self.c2 == 0.0
    }
}
