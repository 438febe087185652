use daft_core::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::ChannelError;

/// Add circular complex Gaussian noise of power `pn` per sample
/// (`pn / 2` per real component) using a caller-owned generator.
pub fn add_awgn_in_place<R: Rng + ?Sized>(x: &mut [C64], pn: f64, rng: &mut R) -> Result<(), ChannelError> {
    if !(pn >= 0.0) || !pn.is_finite() {
        return Err(ChannelError::Domain(format!("noise power must be finite and non-negative, got {pn}")));
    }
    if pn == 0.0 {
        return Ok(());
    }
    let normal = Normal::new(0.0, (pn / 2.0).sqrt()).expect("valid sigma");
    for v in x.iter_mut() {
        *v += C64::new(normal.sample(rng), normal.sample(rng));
    }
    Ok(())
}

/// Seeded convenience wrapper around [`add_awgn_in_place`].
pub fn add_awgn(x: &[C64], pn: f64, seed: u64) -> Result<Vec<C64>, ChannelError> {
    let mut out = x.to_vec();
    add_awgn_in_place(&mut out, pn, &mut ChaCha8Rng::seed_from_u64(seed))?;
    Ok(out)
}
