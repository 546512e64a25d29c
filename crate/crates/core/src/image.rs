use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;

/// 8-bit raster image, one (grayscale) or three (RGB) channels, row-major
/// with interleaved samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: u32,
    height: u32,
    channels: u8,
    data: Vec<u8>,
}

impl Image {
    /// Builds an image from raw samples. `channels` must be 1 or 3 and
    /// `data.len()` must equal `width * height * channels`.
    pub fn new(width: u32, height: u32, channels: u8, data: Vec<u8>) -> Result<Self, Error> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter {
                name: "dimensions",
                detail: alloc::format!("{width}x{height} image is empty"),
            });
        }
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidParameter {
                name: "channels",
                detail: alloc::format!("{channels} channels, only 1 or 3 supported"),
            });
        }
        let expected = width as usize * height as usize * channels as usize;
        if data.len() != expected {
            return Err(Error::DataLength { expected, actual: data.len() });
        }
        Ok(Image { width, height, channels, data })
    }

    /// Single-channel image from a buffer of `width * height` gray values.
    pub fn gray(width: u32, height: u32, data: Vec<u8>) -> Result<Self, Error> {
        Image::new(width, height, 1, data)
    }

    /// Three-channel image from interleaved RGB samples.
    pub fn rgb(width: u32, height: u32, data: Vec<u8>) -> Result<Self, Error> {
        Image::new(width, height, 3, data)
    }

    /// Constant gray image.
    pub fn constant(width: u32, height: u32, level: u8) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be nonzero");
        Image { width, height, channels: 1, data: vec![level; width as usize * height as usize] }
    }

    /// Gray image computed per pixel from `f(x, y)`.
    pub fn gray_from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> u8) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be nonzero");
        let mut data = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Image { width, height, channels: 1, data }
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn height(&self) -> u32 {
        self.height
    }

    /// 1 for grayscale, 3 for RGB.
    #[inline]
    pub fn channels(&self) -> u8 {
        self.channels
    }

    /// Raw interleaved samples.
    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn in_bounds(&self, x: u32, y: u32) -> bool {
        x < self.width && y < self.height
    }

    /// Channel samples of the pixel at `(x, y)`. Panics when out of bounds.
    #[inline]
    pub fn pixel(&self, x: u32, y: u32) -> &[u8] {
        debug_assert!(self.in_bounds(x, y));
        let c = self.channels as usize;
        let i = (y as usize * self.width as usize + x as usize) * c;
        &self.data[i..i + c]
    }

    /// Relative luminance in `[0, 1]`: `v / 255` for grayscale, the Rec. 601
    /// weighted sum `(0.299 R + 0.587 G + 0.114 B) / 255` for RGB.
    pub fn luminance(&self, x: u32, y: u32) -> Result<f64, Error> {
        if !self.in_bounds(x, y) {
            return Err(Error::OutOfBounds { x, y, width: self.width, height: self.height });
        }
        Ok(self.luma(x, y))
    }

    /// Unchecked variant of [`Image::luminance`] for callers that maintain
    /// the bounds invariant themselves.
    #[inline]
    pub(crate) fn luma(&self, x: u32, y: u32) -> f64 {
        let px = self.pixel(x, y);
        let v = if self.channels == 1 {
            px[0] as f64
        } else {
            0.299 * px[0] as f64 + 0.587 * px[1] as f64 + 0.114 * px[2] as f64
        };
        (v / 255.0).clamp(0.0, 1.0)
    }
}
