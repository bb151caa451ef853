//! Practical detector with locally estimated pixel parameters.
//!
//! Each interior pixel's expectation is predicted from its eight neighbours
//! with the kernel
//!
//! ```text
//!        [-1  2 -1]
//!  1/4 · [ 2  0  2]
//!        [-1  2 -1]
//! ```
//!
//! and its spread from the population variance of its four 4-connected
//! neighbours. The one-pixel border has no estimate and is excluded.

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::lrt::{decide, log_sum_exp2, TestOutcome};

/// Local estimates for every pixel; entries outside `valid_mask` are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatedField {
    pub width: usize,
    pub height: usize,
    pub theta_hat: Vec<f64>,
    pub sigma_hat: Vec<f64>,
    pub valid_mask: Vec<bool>,
}

impl EstimatedField {
    pub fn valid_count(&self) -> usize {
        self.valid_mask.iter().filter(|&&v| v).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlrtConfig {
    alpha_stab: f64,
    pub threshold: f64,
}

impl GlrtConfig {
    pub const DEFAULT_STABILIZER: f64 = 0.25;

    pub fn new(alpha_stab: f64, threshold: f64) -> Result<Self> {
        if !(alpha_stab.is_finite() && alpha_stab >= 0.0) {
            return Err(Error::InvalidStabilizer(alpha_stab));
        }
        Ok(Self {
            alpha_stab,
            threshold,
        })
    }

    pub fn alpha_stab(&self) -> f64 {
        self.alpha_stab
    }
}

impl Default for GlrtConfig {
    /// Stabilizer 1/4; threshold 0, the nominal H₀ mean of the statistic.
    fn default() -> Self {
        Self {
            alpha_stab: Self::DEFAULT_STABILIZER,
            threshold: 0.0,
        }
    }
}

fn check_size(image: &GrayImage) -> Result<()> {
    if image.width() < 3 || image.height() < 3 {
        return Err(Error::ImageTooSmall {
            width: image.width(),
            height: image.height(),
        });
    }
    Ok(())
}

fn interior_map(image: &GrayImage, f: impl Fn(usize, usize) -> f64) -> Vec<Option<f64>> {
    let (w, h) = (image.width(), image.height());
    let mut out = vec![None; w * h];
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            out[y * w + x] = Some(f(x, y));
        }
    }
    out
}

#[inline]
fn predict(image: &GrayImage, x: usize, y: usize) -> f64 {
    let z = |x: usize, y: usize| f64::from(image.get(x, y));
    let cross = z(x, y - 1) + z(x, y + 1) + z(x - 1, y) + z(x + 1, y);
    let diag = z(x - 1, y - 1) + z(x + 1, y - 1) + z(x - 1, y + 1) + z(x + 1, y + 1);
    (2.0 * cross - diag) / 4.0
}

#[inline]
fn neighbour_variance(image: &GrayImage, x: usize, y: usize) -> f64 {
    let n = [
        f64::from(image.get(x, y - 1)),
        f64::from(image.get(x, y + 1)),
        f64::from(image.get(x - 1, y)),
        f64::from(image.get(x + 1, y)),
    ];
    let mean = n.iter().sum::<f64>() / 4.0;
    n.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 4.0
}

/// Kernel prediction of each interior pixel; `None` on the border.
pub fn estimate_expectation(image: &GrayImage) -> Result<Vec<Option<f64>>> {
    check_size(image)?;
    Ok(interior_map(image, |x, y| predict(image, x, y)))
}

/// Population variance (divisor 4) of the 4-connected neighbours; `None` on
/// the border.
pub fn estimate_variance(image: &GrayImage) -> Result<Vec<Option<f64>>> {
    check_size(image)?;
    Ok(interior_map(image, |x, y| neighbour_variance(image, x, y)))
}

pub fn estimate_field(image: &GrayImage) -> Result<EstimatedField> {
    check_size(image)?;
    let (w, h) = (image.width(), image.height());
    let mut field = EstimatedField {
        width: w,
        height: h,
        theta_hat: vec![0.0; w * h],
        sigma_hat: vec![0.0; w * h],
        valid_mask: vec![false; w * h],
    };
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            let i = y * w + x;
            field.theta_hat[i] = predict(image, x, y);
            field.sigma_hat[i] = neighbour_variance(image, x, y).sqrt();
            field.valid_mask[i] = true;
        }
    }
    Ok(field)
}

/// Estimated log-LR `log[exp(d/(α+σ̂)²) + exp(−d/(α+σ̂)²)]`, `d = z − θ̂`.
///
/// The stabilizer is added to the standard deviation before squaring.
#[inline]
pub fn estimated_log_lr(z: u32, theta_hat: f64, sigma_hat: f64, alpha_stab: f64) -> f64 {
    let scale = (alpha_stab + sigma_hat).powi(2);
    let a = (f64::from(z) - theta_hat) / scale;
    log_sum_exp2(a, -a)
}

/// Centred per-pixel contribution to the decision statistic.
#[inline]
pub fn centred_term(z: u32, theta_hat: f64, sigma_hat: f64, alpha_stab: f64) -> f64 {
    let scale = (alpha_stab + sigma_hat).powi(2);
    estimated_log_lr(z, theta_hat, sigma_hat, alpha_stab)
        - std::f64::consts::LN_2
        - 1.0 / (4.0 * scale)
}

/// `(1/√N_valid) Σ [Λ̂(zₙ) − log 2 − 1/(4(α+σ̂ₙ)²)]` over interior pixels.
///
/// Deliberately not variance-normalized; thresholds are calibrated on covers.
pub fn glrt_statistic(image: &GrayImage, config: &GlrtConfig) -> Result<f64> {
    let field = estimate_field(image)?;
    let valid = field.valid_count();
    if valid == 0 {
        return Err(Error::EmptyInput("no pixels with a full 3x3 neighbourhood"));
    }
    let sum: f64 = image
        .pixels()
        .iter()
        .enumerate()
        .filter(|(i, _)| field.valid_mask[*i])
        .map(|(i, &z)| {
            centred_term(z.into(), field.theta_hat[i], field.sigma_hat[i], config.alpha_stab)
        })
        .sum();
    Ok(sum / (valid as f64).sqrt())
}

/// H₁ iff the statistic exceeds `config.threshold`.
pub fn detect(image: &GrayImage, config: &GlrtConfig) -> Result<TestOutcome> {
    let statistic = glrt_statistic(image, config)?;
    Ok(decide(statistic, config.threshold, None))
}

/// Threshold with at most a fraction `alpha0` of `cover_scores` strictly above
/// it (empirical `1 − α₀` quantile).
pub fn calibrate_threshold(cover_scores: &[f64], alpha0: f64) -> Result<f64> {
    if !(alpha0 > 0.0 && alpha0 < 1.0) {
        return Err(Error::InvalidAlpha(alpha0));
    }
    if cover_scores.is_empty() {
        return Err(Error::EmptyInput("calibration scores"));
    }
    let mut sorted = cover_scores.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let rank = ((1.0 - alpha0) * n as f64).ceil() as usize;
    Ok(sorted[rank.clamp(1, n) - 1])
}
