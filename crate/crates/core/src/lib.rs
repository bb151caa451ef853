//! Detection of LSB matching steganography with hypothesis testing.
//!
//! The crate is organised bottom-up:
//!
//! - [`pixel_model`]: quantized Gaussian cover pmf and the LSB-matching stego pmf.
//! - [`embedder`]: seeded, schedule-independent LSB-matching simulator.
//! - [`lrt`]: the known-parameter likelihood-ratio test, its moments, threshold
//!   and power functions.
//! - [`glrt`]: the practical detector that estimates pixel expectation and
//!   spread from a 3×3 neighbourhood.
//! - [`harness`]: synthetic corpora, Monte-Carlo verification, ROC curves, PGM
//!   and CSV I/O.
//! - [`cli`]: the `lsbm` command-line front end.

pub mod cli;
pub mod embedder;
mod error;
pub mod gauss;
pub mod glrt;
pub mod harness;
pub mod image;
pub mod lrt;
pub mod pixel_model;
pub mod rng;

pub use error::{Error, PgmError, Result};
pub use image::GrayImage;
