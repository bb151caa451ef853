//! Experiment configuration: a flat `key = value` text file.
//!
//! ```text
//! # known-parameter power at a small payload
//! mode = theoretical_lrt        # or practical_glrt
//! scene = constant              # constant | ramp | smooth | texture
//! theta = 128
//! sigma = 0.5
//! n_pixels = 1000               # or: width = 32 / height = 32
//! n_trials = 10000
//! rates = 0, 0.1
//! alphas = 0.1, 0.01
//! master_seed = 42
//! ```
//!
//! Optional keys: `ramp_dx`, `ramp_dy` (ramp scene), `scene_seed` (smooth
//! scene, defaults to `master_seed`), `alpha_stab` (practical mode, default
//! 0.25), `bit_depth` (default 8).

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::glrt::GlrtConfig;

use super::scene::{Scene, SceneSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    TheoreticalLrt,
    PracticalGlrt,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub scene: SceneSpec,
    pub width: usize,
    pub height: usize,
    pub n_trials: usize,
    pub rates: Vec<f64>,
    pub alphas: Vec<f64>,
    pub master_seed: u64,
    pub alpha_stab: f64,
}

const KEYS: &[&str] = &[
    "mode",
    "scene",
    "theta",
    "ramp_dx",
    "ramp_dy",
    "scene_seed",
    "sigma",
    "n_pixels",
    "width",
    "height",
    "n_trials",
    "rates",
    "alphas",
    "master_seed",
    "alpha_stab",
    "bit_depth",
];

fn bad(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

struct Entries(BTreeMap<String, String>);

impl Entries {
    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.0
            .get(key)
            .map(|v| v.parse().map_err(|_| bad(format!("cannot parse {key} = {v:?}"))))
            .transpose()
    }

    fn require<T: FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)?.ok_or_else(|| bad(format!("missing key {key}")))
    }

    fn list(&self, key: &str) -> Result<Vec<f64>> {
        let raw = self.0.get(key).ok_or_else(|| bad(format!("missing key {key}")))?;
        raw.split(',')
            .map(|s| s.trim().parse().map_err(|_| bad(format!("cannot parse {key} entry {s:?}"))))
            .collect()
    }
}

impl ExperimentConfig {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        std::fs::read_to_string(path)?.parse()
    }

    pub fn n_pixels(&self) -> usize {
        self.width * self.height
    }

    pub fn glrt_config(&self) -> Result<GlrtConfig> {
        GlrtConfig::new(self.alpha_stab, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_trials == 0 {
            return Err(bad("n_trials must be at least 1"));
        }
        if self.width == 0 || self.height == 0 {
            return Err(bad("image dimensions must be positive"));
        }
        if self.mode == Mode::PracticalGlrt && (self.width < 3 || self.height < 3) {
            return Err(bad("practical_glrt needs images of at least 3x3"));
        }
        if self.rates.is_empty() || self.rates.iter().any(|r| !(0.0..=1.0).contains(r)) {
            return Err(bad("rates must be a non-empty list in [0, 1]"));
        }
        if self.alphas.is_empty() || self.alphas.iter().any(|a| !(*a > 0.0 && *a < 1.0)) {
            return Err(bad("alphas must be a non-empty list in (0, 1)"));
        }
        if !(self.scene.sigma > 0.0 && self.scene.sigma.is_finite()) {
            return Err(bad("sigma must be positive"));
        }
        if !(self.alpha_stab >= 0.0 && self.alpha_stab.is_finite()) {
            return Err(bad("alpha_stab must be non-negative"));
        }
        Ok(())
    }
}

impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("line {}: expected key = value", i + 1)))?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(bad(format!("line {}: unknown key {key:?}", i + 1)));
            }
            if map.insert(key.to_owned(), value.trim().to_owned()).is_some() {
                return Err(bad(format!("line {}: duplicate key {key:?}", i + 1)));
            }
        }
        let e = Entries(map);

        let mode = match e.require::<String>("mode")?.as_str() {
            "theoretical_lrt" => Mode::TheoreticalLrt,
            "practical_glrt" => Mode::PracticalGlrt,
            other => return Err(bad(format!("unknown mode {other:?}"))),
        };
        let master_seed: u64 = e.require("master_seed")?;
        let scene = match e.require::<String>("scene")?.as_str() {
            "constant" => Scene::Constant {
                theta: e.require("theta")?,
            },
            "ramp" => Scene::Ramp {
                theta0: e.require("theta")?,
                dx: e.get("ramp_dx")?.unwrap_or(0.0),
                dy: e.get("ramp_dy")?.unwrap_or(0.0),
            },
            "smooth" => Scene::Smooth {
                seed: e.get("scene_seed")?.unwrap_or(master_seed),
            },
            "texture" => Scene::Texture,
            other => return Err(bad(format!("unknown scene {other:?}"))),
        };
        let (width, height) = match (e.get::<usize>("n_pixels")?, e.get("width")?, e.get("height")?) {
            (Some(n), None, None) => (n, 1),
            (None, Some(w), Some(h)) => (w, h),
            _ => return Err(bad("give either n_pixels or both width and height")),
        };
        let config = Self {
            mode,
            scene: SceneSpec {
                scene,
                sigma: e.require("sigma")?,
                bit_depth: e.get("bit_depth")?.unwrap_or(8),
            },
            width,
            height,
            n_trials: e.require("n_trials")?,
            rates: e.list("rates")?,
            alphas: e.list("alphas")?,
            master_seed,
            alpha_stab: e.get("alpha_stab")?.unwrap_or(GlrtConfig::DEFAULT_STABILIZER),
        };
        config.validate()?;
        Ok(config)
    }
}
