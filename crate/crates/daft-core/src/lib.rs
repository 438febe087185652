//! Discrete affine Fourier transform (DAFT) building blocks.
//!
//! The DAFT generalises the unitary DFT with two chirp rates `c1` and `c2`:
//!
//! ```text
//! S[m] = 1/sqrt(N) * exp(-j2pi c2 m^2) * sum_n s[n] exp(-j2pi (mn/N + c1 n^2))
//! ```
//!
//! The crate provides the fast (chirp, FFT, chirp) transform, a direct
//! O(N^2) reference, the chirp-periodic prefix and the quadratic exponential
//! sum `L(n, m)` that appears in closed-form interference images.

mod error;
mod params;
mod prefix;
mod quadratic;
mod transform;

pub use error::DaftError;
pub use params::DaftParams;
pub use prefix::{append_cpp, chirp_periodic_sample, strip_cpp};
pub use quadratic::quadratic_sum_l;
pub use transform::{daft, daft_direct, idaft, idaft_direct, DaftPlan};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

/// Double precision complex sample.
pub type C64 = Complex<f64>;

/// `exp(j 2 pi t)` with `t` first reduced modulo one to keep large phase
/// arguments accurate.
#[inline]
pub fn cis_turns(t: f64) -> C64 {
    let r = t - t.round();
    C64::from_polar(1.0, std::f64::consts::TAU * r)
}

/// Time-domain samples, optionally carrying a chirp-periodic prefix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeSignal {
    pub samples: Vec<C64>,
    pub prefixed: bool,
}

impl TimeSignal {
    /// Unprefixed signal.
    pub fn new(samples: Vec<C64>) -> Self {
        Self { samples, prefixed: false }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Mean power per sample.
    pub fn power(&self) -> f64 {
        mean_power(&self.samples)
    }
}

/// DAFT-domain bins of one frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DaftSignal {
    pub bins: Vec<C64>,
}

impl DaftSignal {
    pub fn new(bins: Vec<C64>) -> Self {
        Self { bins }
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }
}

/// Mean of `|x|^2`; zero for an empty slice.
pub fn mean_power(x: &[C64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    x.iter().map(|v| v.norm_sqr()).sum::<f64>() / x.len() as f64
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len(), "length mismatch");
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
