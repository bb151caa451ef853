use crate::error::{Error, Result};

/// Rectangular grid of B-bit grayscale pixels in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    bit_depth: u8,
    pixels: Vec<u16>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, bit_depth: u8, pixels: Vec<u16>) -> Result<Self> {
        check_bit_depth(bit_depth)?;
        if width == 0 || height == 0 {
            return Err(Error::EmptyInput("image with zero width or height"));
        }
        if pixels.len() != width * height {
            return Err(Error::DimensionMismatch {
                expected: width * height,
                actual: pixels.len(),
            });
        }
        let max = max_level(bit_depth);
        if let Some(&v) = pixels.iter().find(|&&v| u32::from(v) > max) {
            return Err(Error::PixelOutOfRange {
                value: v.into(),
                max,
            });
        }
        Ok(Self {
            width,
            height,
            bit_depth,
            pixels,
        })
    }

    /// 8-bit image from raw bytes.
    pub fn from_u8(width: usize, height: usize, pixels: &[u8]) -> Result<Self> {
        Self::new(width, height, 8, pixels.iter().map(|&p| p.into()).collect())
    }

    pub fn filled(width: usize, height: usize, bit_depth: u8, value: u16) -> Result<Self> {
        Self::new(width, height, bit_depth, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bit_depth(&self) -> u8 {
        self.bit_depth
    }

    /// Largest representable level, 2^B − 1.
    pub fn max_level(&self) -> u32 {
        max_level(self.bit_depth)
    }

    /// Pixel count N.
    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[u16] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u16 {
        self.pixels[y * self.width + x]
    }

    pub fn into_pixels(self) -> Vec<u16> {
        self.pixels
    }
}

pub(crate) fn check_bit_depth(bit_depth: u8) -> Result<()> {
    if (1..=16).contains(&bit_depth) {
        Ok(())
    } else {
        Err(Error::InvalidBitDepth(bit_depth))
    }
}

#[inline]
pub(crate) fn max_level(bit_depth: u8) -> u32 {
    (1u32 << bit_depth) - 1
}
