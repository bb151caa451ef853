//! Synthetic covers: a deterministic expectation field plus seeded Gaussian
//! noise, quantized to integers.

use std::sync::OnceLock;

use rand::Rng;
use rayon::prelude::*;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::image::{check_bit_depth, max_level, GrayImage};
use crate::lrt::ParamField;
use crate::pixel_model::{quantize, PixelParams};
use crate::rng::{derive_seed, Domain, StreamFamily};

use super::pgm::decode_pgm;

static TEXTURE_PGM: &[u8] = include_bytes!("../../fixtures/texture.pgm");

/// The bundled 64×64 texture used as a natural-looking expectation field.
pub fn texture() -> &'static GrayImage {
    static TEXTURE: OnceLock<GrayImage> = OnceLock::new();
    TEXTURE.get_or_init(|| decode_pgm(TEXTURE_PGM).expect("bundled texture is a valid PGM"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scene {
    Constant { theta: f64 },
    /// `theta0 + dx·x + dy·y`.
    Ramp { theta0: f64, dx: f64, dy: f64 },
    /// Random plane plus a low-frequency undulation, drawn from `seed`.
    Smooth { seed: u64 },
    /// The bundled texture, tiled.
    Texture,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SceneSpec {
    pub scene: Scene,
    /// Noise standard deviation; 0 renders the expectation itself.
    pub sigma: f64,
    pub bit_depth: u8,
}

struct SmoothShape {
    base: f64,
    gx: f64,
    gy: f64,
    amp: f64,
    fx: f64,
    fy: f64,
    px: f64,
    py: f64,
}

impl SmoothShape {
    fn draw(seed: u64) -> Self {
        let mut rng = StreamFamily::new(seed, Domain::Scene).stream(0);
        let tau = std::f64::consts::TAU;
        Self {
            base: rng.random_range(80.0..176.0),
            gx: rng.random_range(-0.5..0.5),
            gy: rng.random_range(-0.5..0.5),
            amp: rng.random_range(5.0..25.0),
            fx: rng.random_range(0.02..0.1),
            fy: rng.random_range(0.02..0.1),
            px: rng.random_range(0.0..tau),
            py: rng.random_range(0.0..tau),
        }
    }
}

impl SceneSpec {
    pub fn new(scene: Scene, sigma: f64) -> Self {
        Self {
            scene,
            sigma,
            bit_depth: 8,
        }
    }

    fn validate(&self) -> Result<()> {
        check_bit_depth(self.bit_depth)?;
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(Error::InvalidSigma(self.sigma));
        }
        Ok(())
    }

    /// Pixel expectations θₙ in row-major order.
    pub fn expectation(&self, width: usize, height: usize) -> Result<Vec<f64>> {
        self.validate()?;
        let max = f64::from(max_level(self.bit_depth));
        let coords = (0..height).flat_map(|y| (0..width).map(move |x| (x as f64, y as f64)));
        let theta: Vec<f64> = match self.scene {
            Scene::Constant { theta } => vec![theta; width * height],
            Scene::Ramp { theta0, dx, dy } => coords.map(|(x, y)| theta0 + dx * x + dy * y).collect(),
            Scene::Smooth { seed } => {
                let s = SmoothShape::draw(seed);
                let (cx, cy) = (width as f64 / 2.0, height as f64 / 2.0);
                let margin = (max * 0.04).min(10.0);
                coords
                    .map(|(x, y)| {
                        let v = s.base
                            + s.gx * (x - cx)
                            + s.gy * (y - cy)
                            + s.amp * (s.fx * x + s.px).sin() * (s.fy * y + s.py).cos();
                        v.clamp(margin, max - margin)
                    })
                    .collect()
            }
            Scene::Texture => {
                let t = texture();
                (0..height)
                    .flat_map(|y| (0..width).map(move |x| f64::from(t.get(x % t.width(), y % t.height()))))
                    .collect()
            }
        };
        if let Some(&bad) = theta.iter().find(|t| !(0.0..=max).contains(*t)) {
            return Err(Error::ThetaOutOfRange {
                theta: bad,
                max: max as u32,
            });
        }
        Ok(theta)
    }

    /// True parameter field; requires `sigma > 0`.
    pub fn field(&self, width: usize, height: usize) -> Result<ParamField> {
        let params = self
            .expectation(width, height)?
            .into_iter()
            .map(|t| PixelParams::new(t, self.sigma))
            .collect::<Result<_>>()?;
        Ok(ParamField::new(params))
    }

    /// Quantized `θₙ + σ ξₙ` with `ξₙ` drawn from the stream `(seed, n)`.
    pub fn render(&self, theta: &[f64], width: usize, height: usize, seed: u64) -> Result<GrayImage> {
        self.validate()?;
        if theta.len() != width * height {
            return Err(Error::DimensionMismatch {
                expected: width * height,
                actual: theta.len(),
            });
        }
        let family = StreamFamily::new(seed, Domain::Noise);
        let pixels = theta
            .iter()
            .enumerate()
            .map(|(n, &t)| {
                let y = if self.sigma > 0.0 {
                    let xi: f64 = family.stream(n as u64).sample(StandardNormal);
                    t + self.sigma * xi
                } else {
                    t
                };
                quantize(y, self.bit_depth)
            })
            .collect::<Result<_>>()?;
        GrayImage::new(width, height, self.bit_depth, pixels)
    }
}

/// Seeded synthetic cover and, when `sigma > 0`, its true parameter field.
pub fn synth_cover(
    spec: &SceneSpec,
    width: usize,
    height: usize,
    seed: u64,
) -> Result<(GrayImage, Option<ParamField>)> {
    let theta = spec.expectation(width, height)?;
    let image = spec.render(&theta, width, height, seed)?;
    let field = if spec.sigma > 0.0 {
        Some(spec.field(width, height)?)
    } else {
        None
    };
    Ok((image, field))
}

/// `count` covers of size `width`×`height`, each a different smooth scene
/// with noise `sigma`. Cover `i` uses scene seed `(master, 3, i)` and noise
/// seed `(master, 4, i)`.
pub fn smooth_corpus(master: u64, count: usize, width: usize, height: usize, sigma: f64) -> Result<Vec<GrayImage>> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let spec = SceneSpec::new(
                Scene::Smooth {
                    seed: derive_seed(master, 3, i),
                },
                sigma,
            );
            Ok(synth_cover(&spec, width, height, derive_seed(master, 4, i))?.0)
        })
        .collect()
}
