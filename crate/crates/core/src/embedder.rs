//! LSB-matching embedding simulator.
//!
//! Each pixel independently carries a message bit with probability `R`. A
//! carrying pixel whose LSB already equals the bit is left alone; otherwise it
//! moves by +1 or −1 with probability 1/2 each. Level 0 always moves up and the
//! top level always moves down.

use rand::{Rng, RngCore};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::pixel_model::QuantizedPmf;
use crate::rng::{Domain, StreamFamily};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbedConfig {
    rate: f64,
    seed: u64,
}

impl EmbedConfig {
    pub fn new(rate: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rate) {
            return Err(Error::InvalidRate { rate, max: 1.0 });
        }
        Ok(Self { rate, seed })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EmbedReport {
    pub pixels_carrying: usize,
    pub pixels_changed: usize,
    /// Flat indices of changed pixels, when tracing was requested.
    pub change_positions: Option<Vec<usize>>,
}

/// Random choices made for one pixel; drawn whether or not the pixel carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PixelDecision {
    pub carries: bool,
    pub bit: u16,
    pub up: bool,
}

/// Regenerates the decision for flat index `index` under `config`.
pub fn pixel_decision(config: &EmbedConfig, index: usize) -> PixelDecision {
    decide(&StreamFamily::new(config.seed, Domain::Embedding), index, config.rate)
}

#[inline]
fn decide(family: &StreamFamily, index: usize, rate: f64) -> PixelDecision {
    let mut rng = family.stream(index as u64);
    let u: f64 = rng.random();
    let bit = (rng.next_u32() & 1) as u16;
    let up = rng.next_u32() & 1 == 1;
    PixelDecision {
        carries: u < rate,
        bit,
        up,
    }
}

#[inline]
fn apply(c: u16, d: PixelDecision, max: u16) -> u16 {
    if !d.carries || c & 1 == d.bit {
        c
    } else if c == 0 {
        1
    } else if c == max {
        max - 1
    } else if d.up {
        c + 1
    } else {
        c - 1
    }
}

fn embed(cover: &GrayImage, config: &EmbedConfig, trace: bool) -> (GrayImage, EmbedReport) {
    let family = StreamFamily::new(config.seed, Domain::Embedding);
    let max = cover.max_level() as u16;
    let out: Vec<(u16, bool)> = cover
        .pixels()
        .par_iter()
        .with_min_len(4096)
        .enumerate()
        .map(|(n, &c)| {
            let d = decide(&family, n, config.rate);
            (apply(c, d, max), d.carries)
        })
        .collect();

    let mut report = EmbedReport::default();
    let mut positions = trace.then(Vec::new);
    let pixels = out
        .iter()
        .zip(cover.pixels())
        .enumerate()
        .map(|(n, (&(s, carries), &c))| {
            report.pixels_carrying += usize::from(carries);
            if s != c {
                report.pixels_changed += 1;
                if let Some(p) = positions.as_mut() {
                    p.push(n);
                }
            }
            s
        })
        .collect();
    report.change_positions = positions;
    let stego = GrayImage::new(cover.width(), cover.height(), cover.bit_depth(), pixels)
        .expect("embedding keeps pixels in range");
    (stego, report)
}

/// Embeds a random message at `config.rate` bits per pixel.
///
/// The output is a pure function of `(cover, config)`.
pub fn embed_lsb_matching(cover: &GrayImage, config: &EmbedConfig) -> (GrayImage, EmbedReport) {
    embed(cover, config, false)
}

/// As [`embed_lsb_matching`], also recording the changed positions.
pub fn embed_lsb_matching_traced(
    cover: &GrayImage,
    config: &EmbedConfig,
) -> (GrayImage, EmbedReport) {
    embed(cover, config, true)
}

/// Normalized histogram of all pixels across `images`.
pub fn empirical_pmf(images: &[GrayImage]) -> Result<QuantizedPmf> {
    let first = images
        .first()
        .ok_or(Error::EmptyInput("no images for empirical pmf"))?;
    let bit_depth = first.bit_depth();
    let mut counts = vec![0u64; first.max_level() as usize + 1];
    let mut total = 0u64;
    for img in images {
        if img.bit_depth() != bit_depth {
            return Err(Error::InvalidBitDepth(img.bit_depth()));
        }
        for &p in img.pixels() {
            counts[p as usize] += 1;
        }
        total += img.len() as u64;
    }
    let mass = counts.iter().map(|&c| c as f64 / total as f64).collect();
    QuantizedPmf::new(bit_depth, mass)
}
