use daft_core::C64;

use crate::ChainError;

fn bits_per_symbol(nm: usize) -> Result<usize, ChainError> {
    match nm {
        2 => Ok(1),
        4 => Ok(2),
        _ => Err(ChainError::Config(format!("modulation order {nm} not supported (use 2 or 4)"))),
    }
}

/// Gray mapping with unit average power. BPSK: `0 -> +1`, `1 -> -1`.
/// QPSK: first bit on I, second on Q, so `00 -> (1 + j)/sqrt(2)`.
pub fn map_constellation(bits: &[u8], nm: usize) -> Result<Vec<C64>, ChainError> {
    let b = bits_per_symbol(nm)?;
    if bits.len() % b != 0 {
        return Err(ChainError::Dimension { expected: bits.len().next_multiple_of(b), got: bits.len() });
    }
    let sign = |x: u8| 1.0 - 2.0 * f64::from(x & 1);
    Ok(match b {
        1 => bits.iter().map(|&x| C64::new(sign(x), 0.0)).collect(),
        _ => bits
            .chunks_exact(2)
            .map(|c| C64::new(sign(c[0]), sign(c[1])) * std::f64::consts::FRAC_1_SQRT_2)
            .collect(),
    })
}

/// Real soft values per mapped bit: `Re` for BPSK, `(Re, Im)` for QPSK.
/// Positive means bit 0.
pub fn soft_chips(symbols: &[C64], nm: usize) -> Result<Vec<f64>, ChainError> {
    Ok(match bits_per_symbol(nm)? {
        1 => symbols.iter().map(|s| s.re).collect(),
        _ => symbols.iter().flat_map(|s| [s.re, s.im]).collect(),
    })
}

/// Nearest-point Gray demapping; invariant to positive real scaling.
pub fn demap_constellation(symbols: &[C64], nm: usize) -> Result<Vec<u8>, ChainError> {
    Ok(soft_chips(symbols, nm)?.into_iter().map(|v| u8::from(v < 0.0)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bpsk_and_qpsk_conventions() {
        assert_eq!(map_constellation(&[0, 1], 2).unwrap(), vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]);
        let s = map_constellation(&[0, 0, 1, 0], 4).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(s, vec![C64::new(r, r), C64::new(-r, r)]);
    }

    #[test]
    fn round_trip_and_power() {
        let bits: Vec<u8> = (0..64).map(|k| ((k * 7 + 3) % 5 % 2) as u8).collect();
        for nm in [2, 4] {
            let s = map_constellation(&bits, nm).unwrap();
            let p = daft_core::mean_power(&s);
            assert!((p - 1.0).abs() < 1e-12);
            assert_eq!(demap_constellation(&s, nm).unwrap(), bits);
        }
    }

    #[test]
    fn rejects_bad_orders_and_lengths() {
        assert!(map_constellation(&[0, 1], 8).is_err());
        assert!(map_constellation(&[0, 1, 1], 4).is_err());
    }
}
