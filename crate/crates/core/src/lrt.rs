//! Likelihood-ratio test with known pixel parameters.
//!
//! The per-pixel statistic is the log-LR of "cover" against "every pixel
//! changed by ±1", with the hypothesis-independent constants dropped:
//! `log(exp(d/σ²) + exp(−d/σ²))`, `d = z − θ`. Summed over the image and
//! normalized with its H₀ moments it is asymptotically N(0, 1) under H₀, which
//! fixes the threshold independently of the image and of the rate.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gauss;
use crate::image::{max_level, GrayImage};
use crate::pixel_model::{cover_mass, stego_mass, PixelParams};

/// Per-pixel parameters aligned with an image's flat (row-major) indexing.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamField(Vec<PixelParams>);

impl ParamField {
    pub fn new(params: Vec<PixelParams>) -> Self {
        Self(params)
    }

    pub fn constant(params: PixelParams, n: usize) -> Self {
        Self(vec![params; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn params(&self) -> &[PixelParams] {
        &self.0
    }

    /// The first `n` entries.
    pub fn truncated(&self, n: usize) -> Self {
        Self(self.0[..n.min(self.0.len())].to_vec())
    }
}

/// Mean moments of the per-pixel log-LR under H₀ (`mu0`, `var0`) and under the
/// fully modified alternative (`mu2`, `var2`).
///
/// `gap_sq` is the pixel average of `(μ₂,ₙ − μ₀,ₙ)²`, needed for the exact
/// variance of the mixture at intermediate rates when the moments vary across
/// pixels. For a constant field it equals `(mu2 − mu0)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub mu0: f64,
    pub mu2: f64,
    pub var0: f64,
    pub var2: f64,
    pub gap_sq: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    H0,
    H1,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestOutcome {
    pub statistic: f64,
    pub threshold: f64,
    /// The false-alarm probability the threshold was derived from, if any.
    pub alpha0: Option<f64>,
    pub decision: Hypothesis,
}

/// `log(e^a + e^b)` without overflow.
#[inline]
pub fn log_sum_exp2(a: f64, b: f64) -> f64 {
    let hi = a.max(b);
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (-(a - b).abs()).exp().ln_1p()
}

/// Log-LR of a single pixel value, constants dropped.
#[inline]
pub fn log_lr_pixel(z: u32, params: &PixelParams) -> f64 {
    let a = (f64::from(z) - params.theta()) / (params.sigma() * params.sigma());
    log_sum_exp2(a, -a)
}

/// Exact likelihood ratio `(p[z−1] + p[z+1]) / (2 p[z])` for an interior
/// level, from the quantized pmf without the small-bin approximation.
pub fn exact_lr_pixel(z: u32, params: &PixelParams, bit_depth: u8) -> Result<f64> {
    let max = max_level(bit_depth);
    if z == 0 || z >= max {
        return Err(Error::PixelOutOfRange { value: z, max: max - 1 });
    }
    params.check_in_range(bit_depth)?;
    let p = |k| cover_mass(params, k, max);
    let centre = p(z);
    if centre <= f64::MIN_POSITIVE {
        return Err(Error::OutOfSupport {
            z,
            theta: params.theta(),
            sigma: params.sigma(),
        });
    }
    Ok((p(z - 1) + p(z + 1)) / (2.0 * centre))
}

/// Levels carrying non-negligible mass for a pixel (omitted tail < 1e−30).
fn support(params: &PixelParams, max: u32) -> (u32, u32) {
    let reach = 12.0 * params.sigma() + 2.0;
    let lo = (params.theta() - reach).ceil().max(0.0) as u32;
    let hi = (params.theta() + reach).floor().min(f64::from(max)) as u32;
    (lo, hi)
}

#[derive(Clone, Copy)]
struct PixelMoments {
    mu0: f64,
    var0: f64,
    mu2: f64,
    var2: f64,
}

fn pixel_moments(params: &PixelParams, max: u32) -> PixelMoments {
    let (lo, hi) = support(params, max);
    let first = lo.saturating_sub(1);
    let last = (hi + 1).min(max);
    let cover: Vec<f64> = (first..=last).map(|k| cover_mass(params, k, max)).collect();
    let p = |k: u32| {
        if k < first || k > last {
            0.0
        } else {
            cover[(k - first) as usize]
        }
    };
    let (mut s0, mut ss0, mut s2, mut ss2) = (0.0, 0.0, 0.0, 0.0);
    for k in lo..=hi {
        let l = log_lr_pixel(k, params);
        let p0 = p(k);
        let q = stego_mass(p, k, max, 2.0);
        s0 += p0 * l;
        ss0 += p0 * l * l;
        s2 += q * l;
        ss2 += q * l * l;
    }
    PixelMoments {
        mu0: s0,
        var0: (ss0 - s0 * s0).max(0.0),
        mu2: s2,
        var2: (ss2 - s2 * s2).max(0.0),
    }
}

/// Closed-form log-LR moments under H₀ and under full ±1 modification,
/// averaged over the field.
pub fn moments_r2(field: &ParamField, bit_depth: u8) -> Result<MomentSet> {
    if field.is_empty() {
        return Err(Error::EmptyInput("parameter field"));
    }
    let max = max_level(bit_depth);
    for p in field.params() {
        p.check_in_range(bit_depth)?;
    }
    let mut cache: HashMap<(u64, u64), PixelMoments> = HashMap::new();
    let (mut mu0, mut var0, mut mu2, mut var2, mut gap_sq) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for p in field.params() {
        let m = *cache
            .entry((p.theta().to_bits(), p.sigma().to_bits()))
            .or_insert_with(|| pixel_moments(p, max));
        mu0 += m.mu0;
        var0 += m.var0;
        mu2 += m.mu2;
        var2 += m.var2;
        gap_sq += (m.mu2 - m.mu0).powi(2);
    }
    let n = field.len() as f64;
    Ok(MomentSet {
        mu0: mu0 / n,
        mu2: mu2 / n,
        var0: var0 / n,
        var2: var2 / n,
        gap_sq: gap_sq / n,
        n: field.len(),
    })
}

/// Mean and variance of the per-pixel log-LR at embedding rate `R ∈ [0, 2]`
/// (law of total expectation and variance over changed/unchanged pixels).
pub fn moments_general(m: &MomentSet, rate: f64) -> Result<(f64, f64)> {
    if !(0.0..=2.0).contains(&rate) {
        return Err(Error::InvalidRate { rate, max: 2.0 });
    }
    let w = rate / 2.0;
    let mu = w * m.mu2 + (1.0 - w) * m.mu0;
    let var = w * m.var2 + (1.0 - w) * m.var0 + w * (1.0 - w) * m.gap_sq;
    Ok((mu, var))
}

/// `(Σ log_lr(zₙ) − N μ₀) / √(N σ₀²)`.
pub fn normalized_statistic(image: &GrayImage, field: &ParamField, moments: &MomentSet) -> Result<f64> {
    if field.len() != image.len() {
        return Err(Error::DimensionMismatch {
            expected: image.len(),
            actual: field.len(),
        });
    }
    if moments.n != field.len() {
        return Err(Error::DimensionMismatch {
            expected: field.len(),
            actual: moments.n,
        });
    }
    if moments.var0.is_nan() || moments.var0 <= 0.0 {
        return Err(Error::DegenerateVariance);
    }
    let sum: f64 = image
        .pixels()
        .iter()
        .zip(field.params())
        .map(|(&z, p)| log_lr_pixel(z.into(), p))
        .sum();
    let n = field.len() as f64;
    Ok((sum - n * moments.mu0) / (n * moments.var0).sqrt())
}

fn check_alpha(alpha0: f64) -> Result<()> {
    if alpha0 > 0.0 && alpha0 < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha0))
    }
}

/// Asymptotic threshold `Φ⁻¹(1 − α₀)` on the normalized statistic.
pub fn threshold(alpha0: f64) -> Result<f64> {
    check_alpha(alpha0)?;
    // Φ⁻¹(1 − α) = −Φ⁻¹(α), which keeps precision for small α
    Ok(-gauss::quantile(alpha0))
}

/// Asymptotic power at `R = 2` over `n` pixels.
pub fn power_r2(alpha0: f64, m: &MomentSet, n: usize) -> Result<f64> {
    power_general(alpha0, m, n, 2.0)
}

/// Asymptotic power of the normalized test at embedding rate `R`.
///
/// Under rate `R` the statistic is approximately normal with mean
/// `√N (μ_R − μ₀)/σ₀` and variance `σ_R²/σ₀²`, where `μ_R − μ₀ = (R/2)(μ₂ − μ₀)`.
pub fn power_general(alpha0: f64, m: &MomentSet, n: usize, rate: f64) -> Result<f64> {
    let tau = threshold(alpha0)?;
    let (mu_r, var_r) = moments_general(m, rate)?;
    if !(m.var0 > 0.0 && var_r > 0.0) {
        return Err(Error::DegenerateVariance);
    }
    let sd0 = m.var0.sqrt();
    let sd_r = var_r.sqrt();
    let shift = (n as f64).sqrt() * (m.mu0 - mu_r) / sd_r;
    Ok(gauss::sf(sd0 / sd_r * tau + shift))
}

/// H₁ iff `statistic > threshold`.
pub fn decide(statistic: f64, threshold: f64, alpha0: Option<f64>) -> TestOutcome {
    TestOutcome {
        statistic,
        threshold,
        alpha0,
        decision: if statistic > threshold {
            Hypothesis::H1
        } else {
            Hypothesis::H0
        },
    }
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(theta: f64, sigma: f64) -> PixelParams {
        PixelParams::new(theta, sigma).unwrap()
    }

    #[test]
    fn log_lr_values() {
        assert!((log_lr_pixel(128, &params(128.0, 0.7)) - std::f64::consts::LN_2).abs() < 1e-15);
        // log(2 cosh 1), mpmath
        assert!((log_lr_pixel(129, &params(128.0, 1.0)) - 1.126_928_011_042_972_5).abs() < 1e-15);
        // (α + σ̂)² = 1 style check: d/σ² = 2 → log(2 cosh 2)
        assert!((log_lr_pixel(130, &params(128.0, 1.0)) - (2.0f64.cosh() * 2.0).ln()).abs() < 1e-14);
    }

    #[test]
    fn log_lr_is_stable_for_huge_arguments() {
        let p = params(128.0, 0.0205);
        // |z − θ|/σ² ≈ 2.4e5
        let v = log_lr_pixel(228, &p);
        assert!(v.is_finite());
        assert!((v - 100.0 / (0.0205f64 * 0.0205)).abs() < 1e-6);
        assert_eq!(log_sum_exp2(f64::NEG_INFINITY, f64::NEG_INFINITY), f64::NEG_INFINITY);
    }

    #[test]
    fn exact_lr_oracle() {
        // (p127 + p129)/(2 p128) at θ=128, σ=1, mpmath
        let v = exact_lr_pixel(128, &params(128.0, 1.0), 8).unwrap();
        assert!((v - 0.631_273_451_329_904_4).abs() < 1e-13);
        assert!(exact_lr_pixel(100, &params(100.0, 2.0), 8).unwrap() < 1.0);
        assert!(exact_lr_pixel(0, &params(100.0, 2.0), 8).is_err());
        assert!(exact_lr_pixel(255, &params(100.0, 2.0), 8).is_err());
        assert!(matches!(
            exact_lr_pixel(200, &params(100.0, 0.3), 8),
            Err(Error::OutOfSupport { .. })
        ));
    }

    #[test]
    fn approximation_error_shrinks_with_sigma() {
        let mut last = f64::INFINITY;
        for &sigma in &[1.0, 2.0, 4.0, 8.0] {
            let p = params(128.0, sigma);
            let exact = exact_lr_pixel(129, &p, 8).unwrap();
            let err = (log_lr_pixel(129, &p) - (exact.ln() + std::f64::consts::LN_2 + 1.0 / (2.0 * sigma * sigma))).abs();
            assert!(err <= last, "sigma={sigma}: {err} > {last}");
            last = err;
        }
    }

    #[test]
    fn threshold_values() {
        assert_eq!(threshold(0.5).unwrap(), 0.0);
        assert!((threshold(0.1).unwrap() - 1.281_551_565_544_600_5).abs() < 1e-12);
        assert!((threshold(0.01).unwrap() - 2.326_347_874_040_841).abs() < 1e-12);
        assert!((threshold(0.001).unwrap() - 3.090_232_306_167_813_5).abs() < 1e-12);
        for &a in &[0.5, 0.1, 0.01, 0.001] {
            assert!((gauss::cdf(threshold(a).unwrap()) - (1.0 - a)).abs() < 1e-10);
        }
        for &bad in &[0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(threshold(bad), Err(Error::InvalidAlpha(_))));
        }
    }

    // mpmath, full 256-level sums
    const ORACLE: [(f64, f64, [f64; 4]); 4] = [
        (128.0, 0.5, [1.753_353_328_341_709_1, 2.461_200_751_196_662_8, 4.120_066_690_181_895_6, 4.309_068_310_972_018]),
        (127.5, 0.75, [1.355_443_088_932_112_3, 0.455_452_314_513_672_7, 2.033_144_080_547_226_4, 1.228_643_409_671_032]),
        (128.0, 2.0, [0.808_209_457_035_163_9, 0.022_281_222_089_814_279, 0.833_796_696_823_016_8, 0.031_373_049_733_713_92]),
        (128.0, 1.0, [1.092_598_364_936_425, 0.213_075_396_787_773_77, 1.375_004_425_325_582_9, 0.447_557_670_987_669_46]),
    ];

    #[test]
    fn moments_match_high_precision_sums() {
        for (theta, sigma, [mu0, var0, mu2, var2]) in ORACLE {
            let m = moments_r2(&ParamField::constant(params(theta, sigma), 1), 8).unwrap();
            assert!((m.mu0 - mu0).abs() < 1e-12, "{theta} {sigma}");
            assert!((m.var0 - var0).abs() < 1e-12);
            assert!((m.mu2 - mu2).abs() < 1e-12);
            assert!((m.var2 - var2).abs() < 1e-12);
        }
    }

    #[test]
    fn moments_large_sigma() {
        let m = moments_r2(&ParamField::constant(params(128.0, 20.0), 1), 8).unwrap();
        let gap = m.mu2 - m.mu0;
        assert!(gap > 0.0 && gap < 1e-3, "{gap}");
    }

    #[test]
    fn moments_shift_invariant() {
        for &sigma in &[0.4, 1.0, 3.0] {
            let a = moments_r2(&ParamField::constant(params(100.0, sigma), 1), 8).unwrap();
            let b = moments_r2(&ParamField::constant(params(101.0, sigma), 1), 8).unwrap();
            assert!((a.mu0 - b.mu0).abs() < 1e-12);
            assert!((a.mu2 - b.mu2).abs() < 1e-12);
            assert!((a.var0 - b.var0).abs() < 1e-12);
            assert!((a.var2 - b.var2).abs() < 1e-12);
        }
    }

    #[test]
    fn embedding_raises_expected_log_lr() {
        for &theta in &[127.5, 128.0, 128.25] {
            for &sigma in &[0.5, 0.75, 1.0, 2.0] {
                let m = moments_r2(&ParamField::constant(params(theta, sigma), 1), 8).unwrap();
                assert!(m.mu2 >= m.mu0, "θ={theta} σ={sigma}");
            }
        }
    }

    #[test]
    fn field_moments_average_pixels() {
        let a = params(120.0, 0.6);
        let b = params(60.3, 1.7);
        let ma = moments_r2(&ParamField::constant(a, 1), 8).unwrap();
        let mb = moments_r2(&ParamField::constant(b, 1), 8).unwrap();
        let m = moments_r2(&ParamField::new(vec![a, b, b]), 8).unwrap();
        assert_eq!(m.n, 3);
        assert!((m.mu0 - (ma.mu0 + 2.0 * mb.mu0) / 3.0).abs() < 1e-14);
        assert!((m.var2 - (ma.var2 + 2.0 * mb.var2) / 3.0).abs() < 1e-14);
        assert!(moments_r2(&ParamField::new(vec![]), 8).is_err());
    }

    #[test]
    fn general_moments_endpoints() {
        let m = moments_r2(&ParamField::constant(params(128.0, 0.5), 1), 8).unwrap();
        assert_eq!(moments_general(&m, 0.0).unwrap(), (m.mu0, m.var0));
        assert_eq!(moments_general(&m, 2.0).unwrap(), (m.mu2, m.var2));
        assert!(moments_general(&m, 2.1).is_err());
    }

    #[test]
    fn constant_field_matches_textbook_total_variance() {
        let m = moments_r2(&ParamField::constant(params(128.0, 0.75), 10), 8).unwrap();
        for &r in &[0.1, 0.5, 1.0] {
            let (mu, var) = moments_general(&m, r).unwrap();
            let w = r / 2.0;
            let textbook = w * (m.var2 + m.mu2 * m.mu2) + (1.0 - w) * (m.var0 + m.mu0 * m.mu0) - mu * mu;
            assert!((var - textbook).abs() < 1e-12);
        }
    }

    #[test]
    fn power_edge_cases() {
        let flat = MomentSet { mu0: 1.0, mu2: 1.0, var0: 0.3, var2: 0.3, gap_sq: 0.0, n: 1 };
        for &a in &[0.1, 0.01] {
            assert!((power_r2(a, &flat, 1000).unwrap() - a).abs() < 1e-15);
        }
        let m = moments_r2(&ParamField::constant(params(128.0, 0.5), 1), 8).unwrap();
        assert!(power_r2(0.01, &m, 1_000_000).unwrap() > 1.0 - 1e-12);
        assert!((power_general(0.1, &m, 1000, 1e-9).unwrap() - 0.1).abs() < 1e-6);
        assert!(power_general(0.1, &m, 100_000_000, 0.5).unwrap() > 1.0 - 1e-12);
        let degenerate = MomentSet { var2: 0.0, var0: 0.0, ..flat };
        assert!(matches!(power_r2(0.1, &degenerate, 10), Err(Error::DegenerateVariance)));
    }

    #[test]
    fn decision_rule() {
        assert_eq!(decide(0.0, 0.0, Some(0.5)).decision, Hypothesis::H0);
        assert_eq!(decide(3.2, 1.2816, Some(0.1)).decision, Hypothesis::H1);
        assert_eq!(decide(-1.0, 1.2816, Some(0.1)).decision, Hypothesis::H0);
        let o = decide(0.3, 0.2, None);
        assert_eq!((o.statistic, o.threshold, o.alpha0), (0.3, 0.2, None));
    }

    #[test]
    fn statistic_at_the_mode() {
        let p = params(128.0, 0.8);
        let img = GrayImage::filled(10, 10, 8, 128).unwrap();
        let field = ParamField::constant(p, 100);
        let m = moments_r2(&field, 8).unwrap();
        let t = normalized_statistic(&img, &field, &m).unwrap();
        let expected = (100.0 * std::f64::consts::LN_2 - 100.0 * m.mu0) / (100.0 * m.var0).sqrt();
        assert!((t - expected).abs() < 1e-12);

        let short = ParamField::constant(p, 99);
        assert!(normalized_statistic(&img, &short, &m).is_err());
        let zero = MomentSet { var0: 0.0, ..m };
        assert!(matches!(normalized_statistic(&img, &field, &zero), Err(Error::DegenerateVariance)));
    }

    proptest! {
        #[test]
        fn log_lr_even_and_increasing(theta in 10.0f64..240.0, sigma in 0.2f64..10.0, d in 0u32..8) {
            let p = params(theta.round(), sigma);
            let c = theta.round() as u32;
            prop_assert_eq!(log_lr_pixel(c + d, &p), log_lr_pixel(c - d, &p));
            prop_assert!(log_lr_pixel(c + d + 1, &p) > log_lr_pixel(c + d, &p));
        }

        #[test]
        fn log_lr_finite_up_to_large_ratios(ratio in 0.0f64..700.0) {
            // σ = 1/√ratio puts (z − θ)/σ² = ratio at z − θ = 1
            let sigma = if ratio > 0.0 { ratio.sqrt().recip() } else { 1e3 };
            let p = params(100.0, sigma);
            prop_assert!(log_lr_pixel(101, &p).is_finite());
        }

        #[test]
        fn mixture_mean_is_affine(r in 0.0f64..=1.0) {
            let m = moments_r2(&ParamField::constant(params(128.0, 0.6), 1), 8).unwrap();
            let (mu, _) = moments_general(&m, r).unwrap();
            let (mu1, _) = moments_general(&m, 1.0).unwrap();
            prop_assert!((mu - (m.mu0 + r * (mu1 - m.mu0))).abs() < 1e-12);
        }
    }
}
