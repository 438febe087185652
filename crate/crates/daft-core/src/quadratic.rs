use crate::{cis_turns, DaftError, C64};

/// `L(n, m) = sum_{k=0}^{|n|-1} exp(j pi (N k + m)^2 / (N n))`.
///
/// The phase is reduced in exact integer arithmetic before the final
/// division, so the result stays accurate for large arguments.
///
/// Note that `|L(n, m)|^2 = |n|` only when `gcd(|n|, N) = 1`; for example
/// `|L(4, 0)| = 4` at `N = 16`.
pub fn quadratic_sum_l(n: i64, m: i64, big_n: usize) -> Result<C64, DaftError> {
    if n == 0 {
        return Err(DaftError::Domain("L(n, m) is undefined for n = 0".into()));
    }
    if big_n == 0 {
        return Err(DaftError::Domain("N must be positive".into()));
    }
    let bn = big_n as i128;
    // turns = (N k + m)^2 / (2 N n)
    let den = 2 * bn * n as i128;
    let den_abs = den.abs();
    Ok((0..n.unsigned_abs() as i128)
        .map(|k| {
            let a = (bn * k + m as i128).pow(2).rem_euclid(den_abs);
            let t = a as f64 / den_abs as f64;
            cis_turns(if den < 0 { -t } else { t })
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_term() {
        for m in 0..8 {
            let v = quadratic_sum_l(1, m, 8).unwrap();
            let expect = cis_turns((m * m) as f64 / 16.0);
            assert!((v - expect).norm() < 1e-14);
            assert!((v.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn direct_summation_reference() {
        // independent float evaluation of the defining sum
        let (n, m, big_n) = (-3i64, 5i64, 32usize);
        let direct: C64 = (0..3)
            .map(|k| {
                let arg = std::f64::consts::PI * ((big_n as f64) * k as f64 + m as f64).powi(2)
                    / (big_n as f64 * n as f64);
                C64::from_polar(1.0, arg)
            })
            .sum();
        let v = quadratic_sum_l(n, m, big_n).unwrap();
        assert!((v - direct).norm() < 1e-12);
        assert!((v - C64::new(1.6574692813001886, -0.5027878096634545)).norm() < 1e-12);
    }

    #[test]
    fn magnitude_with_common_factor() {
        // gcd(4, 16) = 4: every term is equal, so |L| = 4 rather than 2
        let v = quadratic_sum_l(4, 0, 16).unwrap();
        assert!((v.norm() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn magnitude_when_coprime() {
        for big_n in [8usize, 16, 32, 64] {
            for n in [-7i64, -3, 1, 3, 5, 9, 11] {
                for m in 0..big_n as i64 {
                    let v = quadratic_sum_l(n, m, big_n).unwrap();
                    assert!((v.norm_sqr() - n.abs() as f64).abs() < 1e-9 * n.abs() as f64);
                }
            }
        }
    }

    #[test]
    fn zero_n_is_domain_error() {
        assert!(matches!(quadratic_sum_l(0, 1, 8), Err(DaftError::Domain(_))));
    }
}
