//! Detectors for spread DAFT frames: the linear-cost correlation detector
//! and a dense MMSE reference.

mod cdd;
mod error;
mod mmse;

use daft_core::C64;

pub use cdd::{cdd_despread, cdd_despread_bits, cdd_equalize, dense_adjoint_apply, CddConfig, EqualizedFrame};
pub use error::DetectorError;
pub use mmse::{mmse_detect, MmseFilter};

/// Nearest-point Gray demapping of (despread) symbols; scale invariant.
pub fn hard_decision(symbols: &[C64], nm: usize) -> Result<Vec<u8>, DetectorError> {
    Ok(spread_code_chain::demap_constellation(symbols, nm)?)
}
