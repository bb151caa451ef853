//! Binary PGM (P5), 8-bit, maxval 255.

use std::fs;
use std::path::Path;

use crate::error::{Error, PgmError};
use crate::image::GrayImage;

struct Header<'a> {
    rest: &'a [u8],
}

impl<'a> Header<'a> {
    fn skip_space_and_comments(&mut self) {
        loop {
            match self.rest.first() {
                Some(b) if b.is_ascii_whitespace() => self.rest = &self.rest[1..],
                Some(b'#') => {
                    let end = self
                        .rest
                        .iter()
                        .position(|&b| b == b'\n' || b == b'\r')
                        .unwrap_or(self.rest.len());
                    self.rest = &self.rest[end..];
                }
                _ => return,
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u32, PgmError> {
        self.skip_space_and_comments();
        let len = self.rest.iter().take_while(|b| b.is_ascii_digit()).count();
        if len == 0 {
            return Err(PgmError::MalformedHeader(format!("missing {what}")));
        }
        let text = std::str::from_utf8(&self.rest[..len]).expect("ascii digits");
        self.rest = &self.rest[len..];
        text.parse()
            .map_err(|_| PgmError::MalformedHeader(format!("{what} {text} out of range")))
    }
}

/// Parses a P5 image held in memory.
pub fn decode_pgm(bytes: &[u8]) -> Result<GrayImage, PgmError> {
    let magic = bytes.get(..2).unwrap_or(bytes);
    if magic != b"P5" {
        return Err(PgmError::UnsupportedFormat(
            String::from_utf8_lossy(magic).into_owned(),
        ));
    }
    let mut header = Header { rest: &bytes[2..] };
    if !header.rest.first().is_some_and(|b| b.is_ascii_whitespace() || *b == b'#') {
        return Err(PgmError::MalformedHeader("no separator after magic".into()));
    }
    let width = header.number("width")? as usize;
    let height = header.number("height")? as usize;
    let maxval = header.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(PgmError::MalformedHeader(format!("zero dimension {width}x{height}")));
    }
    if maxval != 255 {
        return Err(PgmError::UnsupportedMaxval(maxval));
    }
    // exactly one whitespace byte separates the header from the raster
    match header.rest.first() {
        Some(b) if b.is_ascii_whitespace() => {}
        _ => return Err(PgmError::MalformedHeader("no separator before pixel data".into())),
    }
    let data = &header.rest[1..];
    let expected = width * height;
    if data.len() < expected {
        return Err(PgmError::Truncated {
            expected,
            actual: data.len(),
        });
    }
    Ok(GrayImage::from_u8(width, height, &data[..expected]).expect("dimensions checked"))
}

pub fn encode_pgm(image: &GrayImage) -> Result<Vec<u8>, PgmError> {
    if image.bit_depth() != 8 {
        return Err(PgmError::UnsupportedBitDepth(image.bit_depth()));
    }
    let mut out = format!("P5\n{} {}\n255\n", image.width(), image.height()).into_bytes();
    out.extend(image.pixels().iter().map(|&p| p as u8));
    Ok(out)
}

pub fn load_pgm(path: impl AsRef<Path>) -> Result<GrayImage, Error> {
    let path = path.as_ref();
    let wrap = |source| Error::Pgm {
        path: path.to_path_buf(),
        source,
    };
    let bytes = fs::read(path).map_err(|e| wrap(PgmError::Io(e)))?;
    decode_pgm(&bytes).map_err(wrap)
}

pub fn save_pgm(image: &GrayImage, path: impl AsRef<Path>) -> Result<(), Error> {
    let path = path.as_ref();
    let wrap = |source| Error::Pgm {
        path: path.to_path_buf(),
        source,
    };
    let bytes = encode_pgm(image).map_err(wrap)?;
    fs::write(path, bytes).map_err(|e| wrap(PgmError::Io(e)))
}
