//! Transmit and receive bit chain around the DAFT modulator.
//!
//! Bits are grouped into codewords by a bounded-distance ECC model, block
//! interleaved, spread by a ±1 chip sequence and Gray mapped onto BPSK or
//! QPSK bins. The receive side mirrors each stage.

mod constellation;
mod ecc;
mod error;
mod frame;
mod interleave;
mod sequence;
mod spread;

pub use constellation::{demap_constellation, map_constellation, soft_chips};
pub use ecc::{ecc_decode, ecc_encode, packet_success, EccParams};
pub use error::ChainError;
pub use frame::FrameConfig;
pub use interleave::{deinterleave, interleave};
pub use sequence::{
    autocorrelation, gen_mseq, gold, primitive_taps, sequence_for_length, SpreadingSequence,
};
pub use spread::{despread, despread_bits, spread, spread_bits};
