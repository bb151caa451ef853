//! Monte-Carlo verification of false-alarm and detection rates against the
//! asymptotic power function.

use rayon::prelude::*;

use crate::embedder::{embed_lsb_matching, EmbedConfig};
use crate::error::{Error, Result};
use crate::glrt::{calibrate_threshold, glrt_statistic, GlrtConfig};
use crate::image::GrayImage;
use crate::lrt::{self, moments_r2, normalized_statistic, MomentSet, ParamField};
use crate::pixel_model::PixelParams;
use crate::rng::derive_seed;

use super::config::{ExperimentConfig, Mode};
use super::table::{McRow, PowerRow};

/// Seed labels for the per-trial streams derived from the master seed.
pub const COVER_LABEL: u16 = 1;
pub const CALIBRATION_LABEL: u16 = 2;
/// Rate `i` of the config embeds with label `EMBED_LABEL_BASE + i`.
pub const EMBED_LABEL_BASE: u16 = 100;

/// Standard error of a proportion estimated from `n` Bernoulli(`p`) trials.
pub fn binomial_se(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

enum Scorer {
    Known { field: ParamField, moments: MomentSet },
    Estimated(GlrtConfig),
}

impl Scorer {
    fn score(&self, image: &GrayImage) -> Result<f64> {
        match self {
            Scorer::Known { field, moments } => normalized_statistic(image, field, moments),
            Scorer::Estimated(config) => glrt_statistic(image, config),
        }
    }
}

struct Trial {
    cover: f64,
    stego: Vec<f64>,
}

fn fraction_above(scores: impl Iterator<Item = f64>, threshold: f64, n: usize) -> f64 {
    scores.filter(|&s| s > threshold).count() as f64 / n as f64
}

/// Runs `n_trials` seeded cover/stego pairs per rate and tabulates, for each
/// `(α₀, R)`, the empirical false-alarm and detection rates next to the
/// asymptotic power of the known-parameter test.
///
/// Trial `t` renders its cover from seed `(master, COVER_LABEL, t)` and embeds
/// rate `i` into that same cover with seed `(master, EMBED_LABEL_BASE + i, t)`.
/// In practical mode the threshold is the empirical `1 − α₀` quantile over a
/// separate set of `n_trials` covers.
pub fn mc_verify(config: &ExperimentConfig) -> Result<Vec<McRow>> {
    config.validate()?;
    let (w, h) = (config.width, config.height);
    let spec = &config.scene;
    let theta = spec.expectation(w, h)?;
    let field = spec.field(w, h)?;
    let moments = moments_r2(&field, spec.bit_depth)?;
    let scorer = match config.mode {
        Mode::TheoreticalLrt => Scorer::Known {
            field,
            moments,
        },
        Mode::PracticalGlrt => Scorer::Estimated(config.glrt_config()?),
    };
    let embeds = config
        .rates
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let label = u16::try_from(i)
                .ok()
                .and_then(|i| EMBED_LABEL_BASE.checked_add(i))
                .ok_or_else(|| Error::Config("too many rates".into()))?;
            Ok((r, label))
        })
        .collect::<Result<Vec<_>>>()?;

    let cover_at = |label: u16, t: usize| spec.render(&theta, w, h, derive_seed(config.master_seed, label, t as u64));

    let trials: Vec<Trial> = (0..config.n_trials)
        .into_par_iter()
        .map(|t| {
            let cover = cover_at(COVER_LABEL, t)?;
            let stego = embeds
                .iter()
                .map(|&(rate, label)| {
                    let embed = EmbedConfig::new(rate, derive_seed(config.master_seed, label, t as u64))?;
                    scorer.score(&embed_lsb_matching(&cover, &embed).0)
                })
                .collect::<Result<_>>()?;
            Ok(Trial {
                cover: scorer.score(&cover)?,
                stego,
            })
        })
        .collect::<Result<_>>()?;

    let calibration: Option<Vec<f64>> = match config.mode {
        Mode::TheoreticalLrt => None,
        Mode::PracticalGlrt => Some(
            (0..config.n_trials)
                .into_par_iter()
                .map(|t| scorer.score(&cover_at(CALIBRATION_LABEL, t)?))
                .collect::<Result<_>>()?,
        ),
    };

    let n = config.n_trials;
    let mut rows = Vec::with_capacity(config.alphas.len() * config.rates.len());
    for &alpha0 in &config.alphas {
        let tau = match &calibration {
            None => lrt::threshold(alpha0)?,
            Some(scores) => calibrate_threshold(scores, alpha0)?,
        };
        let empirical_alpha = fraction_above(trials.iter().map(|t| t.cover), tau, n);
        for (i, &rate) in config.rates.iter().enumerate() {
            rows.push(McRow {
                n_pixels: config.n_pixels(),
                alpha0,
                rate,
                empirical_alpha,
                empirical_power: fraction_above(trials.iter().map(|t| t.stego[i]), tau, n),
                theory_power: lrt::power_general(alpha0, &moments, config.n_pixels(), rate)?,
            });
        }
    }
    Ok(rows)
}

/// Asymptotic power of the known-parameter test for a constant field, over
/// every combination of `ns`, `alphas` and `rates`.
pub fn power_curve(theta: f64, sigma: f64, ns: &[usize], alphas: &[f64], rates: &[f64]) -> Result<Vec<PowerRow>> {
    let params = PixelParams::new(theta, sigma)?;
    let moments = moments_r2(&ParamField::constant(params, 1), 8)?;
    let mut rows = Vec::with_capacity(ns.len() * alphas.len() * rates.len());
    for &n_pixels in ns {
        if n_pixels == 0 {
            return Err(Error::EmptyInput("pixel count"));
        }
        for &alpha0 in alphas {
            for &rate in rates {
                if !(0.0..=1.0).contains(&rate) {
                    return Err(Error::InvalidRate { rate, max: 1.0 });
                }
                rows.push(PowerRow {
                    n_pixels,
                    alpha0,
                    rate,
                    power: lrt::power_general(alpha0, &moments, n_pixels, rate)?,
                });
            }
        }
    }
    Ok(rows)
}
