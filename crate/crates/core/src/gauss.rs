//! Standard normal cdf, tail and quantile.

use statrs::function::erf::erfc_inv;
use std::f64::consts::SQRT_2;

/// Φ(x).
#[inline]
pub fn cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// 1 − Φ(x), accurate in the upper tail.
#[inline]
pub fn sf(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// Φ⁻¹(p) for p in (0, 1).
#[inline]
pub fn quantile(p: f64) -> f64 {
    -SQRT_2 * erfc_inv(2.0 * p)
}

/// Probability of the standard normal falling in `[lo, hi)`.
///
/// The difference is taken on whichever side of zero keeps both terms small,
/// so bins far in either tail keep their relative precision.
pub fn interval_mass(lo: f64, hi: f64) -> f64 {
    debug_assert!(lo <= hi);
    if lo >= 0.0 {
        sf(lo) - sf(hi)
    } else if hi <= 0.0 {
        cdf(hi) - cdf(lo)
    } else {
        1.0 - cdf(lo) - sf(hi)
    }
}
