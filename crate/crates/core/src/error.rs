use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(thiserror::Error, Debug)]
pub enum Error {
    #[error("non-finite value {0}")]
    NonFinite(f64),
    #[error("noise standard deviation must be positive and finite, got {0}")]
    InvalidSigma(f64),
    #[error("expectation {theta} lies outside the dynamic range [0, {max}]")]
    ThetaOutOfRange { theta: f64, max: u32 },
    #[error("embedding rate {rate} outside [0, {max}]")]
    InvalidRate { rate: f64, max: f64 },
    #[error("false-alarm probability must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),
    #[error("unsupported bit depth {0} (expected 1..=16)")]
    InvalidBitDepth(u8),
    #[error("pixel value {value} exceeds the maximum {max}")]
    PixelOutOfRange { value: u32, max: u32 },
    #[error("invalid pmf: {0}")]
    InvalidPmf(String),
    #[error("size mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("image is {width}x{height}; at least 3x3 is required")]
    ImageTooSmall { width: usize, height: usize },
    #[error("pixel {z} has numerically zero probability under theta={theta}, sigma={sigma}")]
    OutOfSupport { z: u32, theta: f64, sigma: f64 },
    #[error("degenerate log-LR variance")]
    DegenerateVariance,
    #[error("stabilizer must be non-negative and finite, got {0}")]
    InvalidStabilizer(f64),
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("invalid experiment config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Pgm {
        path: PathBuf,
        #[source]
        source: PgmError,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Failures while decoding a binary PGM file.
#[derive(thiserror::Error, Debug)]
pub enum PgmError {
    #[error("unsupported format {0:?}; only binary PGM (P5) is accepted")]
    UnsupportedFormat(String),
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("unsupported maxval {0}; only 255 is accepted")]
    UnsupportedMaxval(u32),
    #[error("truncated pixel data: expected {expected} bytes, found {actual}")]
    Truncated { expected: usize, actual: usize },
    #[error("only 8-bit images can be written as PGM, got bit depth {0}")]
    UnsupportedBitDepth(u8),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
