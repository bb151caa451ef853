//! Quantized Gaussian cover model and the LSB-matching stego pmf.
//!
//! A cover pixel is `Q(θ + ξ)` with `ξ ~ N(0, σ²)` and `Q` the unit-step
//! quantizer. Levels outside the dynamic range are clamped, so the tail mass
//! beyond either end is absorbed by the extreme bins and every pmf sums to one.

use crate::error::{Error, Result};
use crate::gauss;
use crate::image::{check_bit_depth, max_level};

/// Expectation and noise standard deviation of one pixel, in digital numbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PixelParams {
    theta: f64,
    sigma: f64,
}

impl PixelParams {
    pub fn new(theta: f64, sigma: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::NonFinite(theta));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidSigma(sigma));
        }
        Ok(Self { theta, sigma })
    }

    #[inline]
    pub fn theta(&self) -> f64 {
        self.theta
    }

    #[inline]
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub(crate) fn check_in_range(&self, bit_depth: u8) -> Result<()> {
        let max = max_level(bit_depth);
        if self.theta < 0.0 || self.theta > f64::from(max) {
            return Err(Error::ThetaOutOfRange {
                theta: self.theta,
                max,
            });
        }
        Ok(())
    }
}

/// Probability mass function over the grayscale levels `0..2^B`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedPmf {
    bit_depth: u8,
    mass: Vec<f64>,
}

impl QuantizedPmf {
    pub const SUM_TOLERANCE: f64 = 1e-9;

    pub fn new(bit_depth: u8, mass: Vec<f64>) -> Result<Self> {
        check_bit_depth(bit_depth)?;
        let levels = max_level(bit_depth) as usize + 1;
        if mass.len() != levels {
            return Err(Error::DimensionMismatch {
                expected: levels,
                actual: mass.len(),
            });
        }
        if let Some((k, m)) = mass
            .iter()
            .enumerate()
            .find(|(_, m)| !(0.0..=1.0).contains(*m))
        {
            return Err(Error::InvalidPmf(format!("mass[{k}] = {m}")));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > Self::SUM_TOLERANCE {
            return Err(Error::InvalidPmf(format!("masses sum to {total}")));
        }
        Ok(Self { bit_depth, mass })
    }

    pub fn bit_depth(&self) -> u8 {
        self.bit_depth
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    #[inline]
    pub fn get(&self, k: usize) -> f64 {
        self.mass[k]
    }

    pub fn mean(&self) -> f64 {
        self.mass
            .iter()
            .enumerate()
            .map(|(k, m)| k as f64 * m)
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.mass
            .iter()
            .enumerate()
            .map(|(k, m)| (k as f64 - mean).powi(2) * m)
            .sum()
    }
}

/// Unit-step quantizer: `k` such that `y ∈ [k − 1/2, k + 1/2)`, clamped to
/// `[0, 2^B − 1]`.
pub fn quantize(y: f64, bit_depth: u8) -> Result<u16> {
    if !y.is_finite() {
        return Err(Error::NonFinite(y));
    }
    check_bit_depth(bit_depth)?;
    let max = f64::from(max_level(bit_depth));
    let floor = y.floor();
    let k = if y - floor >= 0.5 { floor + 1.0 } else { floor };
    Ok(k.clamp(0.0, max) as u16)
}

/// Mass of level `k` under the cover model, with the tails beyond the dynamic
/// range folded into levels `0` and `max`.
///
/// No range checks; callers validate `params` and `k`.
pub(crate) fn cover_mass(params: &PixelParams, k: u32, max: u32) -> f64 {
    let upper = if k == max {
        f64::INFINITY
    } else {
        ((f64::from(k) - params.theta) + 0.5) / params.sigma
    };
    let lower = if k == 0 {
        f64::NEG_INFINITY
    } else {
        ((f64::from(k) - params.theta) - 0.5) / params.sigma
    };
    gauss::interval_mass(lower, upper)
}

/// Stego mass of level `k` at rate `rate`, given cover masses `p`.
///
/// A fraction `rate/2` of pixels is moved by ±1 with equal probability, except
/// that level 0 can only move up and level `max` only down.
pub(crate) fn stego_mass(p: impl Fn(u32) -> f64, k: u32, max: u32, rate: f64) -> f64 {
    let changed = rate / 2.0;
    let mut q = (1.0 - changed) * p(k);
    if k > 0 {
        let share = if k - 1 == 0 { 1.0 } else { 0.5 };
        q += changed * share * p(k - 1);
    }
    if k < max {
        let share = if k + 1 == max { 1.0 } else { 0.5 };
        q += changed * share * p(k + 1);
    }
    q
}

/// Cover pmf of a pixel with the given parameters, evaluated from exact
/// Gaussian cdf differences.
pub fn cover_pmf(params: &PixelParams, bit_depth: u8) -> Result<QuantizedPmf> {
    check_bit_depth(bit_depth)?;
    params.check_in_range(bit_depth)?;
    let max = max_level(bit_depth);
    let mass = (0..=max).map(|k| cover_mass(params, k, max)).collect();
    QuantizedPmf::new(bit_depth, mass)
}

/// Pmf of a cover pixel after LSB matching at rate `R ∈ [0, 2]`.
///
/// `R = 2` is the conceptual case where every pixel is changed by ±1.
pub fn stego_pmf(cover: &QuantizedPmf, rate: f64) -> Result<QuantizedPmf> {
    if !(0.0..=2.0).contains(&rate) {
        return Err(Error::InvalidRate { rate, max: 2.0 });
    }
    let max = max_level(cover.bit_depth);
    let p = |k: u32| cover.mass[k as usize];
    let mass = (0..=max).map(|k| stego_mass(p, k, max, rate)).collect();
    QuantizedPmf::new(cover.bit_depth, mass)
}
