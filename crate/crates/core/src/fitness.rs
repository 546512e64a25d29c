//! Luminance-band fitness: the objective the firefly swarm climbs.

use crate::error::Error;
use crate::image::Image;

/// Closed luminance interval within `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    low: f64,
    high: f64,
}

impl Band {
    /// Dark end of the range, luminance in `[0, 0.1]`.
    pub const DARK: Band = Band { low: 0.0, high: 0.1 };
    /// Bright end of the range, luminance in `[0.9, 1]`.
    pub const BRIGHT: Band = Band { low: 0.9, high: 1.0 };

    pub fn new(low: f64, high: f64) -> Result<Self, Error> {
        let ordered = low.is_finite() && high.is_finite() && low <= high;
        if !ordered || low < 0.0 || high > 1.0 {
            return Err(Error::InvalidBand { low, high });
        }
        Ok(Band { low, high })
    }

    #[inline]
    pub fn low(&self) -> f64 {
        self.low
    }

    #[inline]
    pub fn high(&self) -> f64 {
        self.high
    }

    /// Distance from `value` to the band: zero inside, linear outside.
    #[inline]
    fn distance(&self, value: f64) -> f64 {
        if value < self.low {
            self.low - value
        } else if value > self.high {
            value - self.high
        } else {
            0.0
        }
    }
}

/// An image paired with a target band, evaluated pointwise as a score in
/// `[0, 1]`: 1 on the band, falling off linearly to 0 over `falloff`
/// luminance units outside it.
#[derive(Debug, Clone)]
pub struct FitnessField<'a> {
    image: &'a Image,
    band: Band,
    falloff: f64,
}

impl<'a> FitnessField<'a> {
    pub const DEFAULT_FALLOFF: f64 = 0.25;

    pub fn new(image: &'a Image, band: Band) -> Self {
        FitnessField { image, band, falloff: Self::DEFAULT_FALLOFF }
    }

    /// Overrides the falloff width. Zero makes the band a hard indicator
    /// function; negative values are rejected.
    pub fn with_falloff(image: &'a Image, band: Band, falloff: f64) -> Result<Self, Error> {
        if !falloff.is_finite() || falloff < 0.0 {
            return Err(Error::InvalidParameter {
                name: "falloff",
                detail: alloc::format!("{falloff} is not a nonnegative width"),
            });
        }
        Ok(FitnessField { image, band, falloff })
    }

    #[inline]
    pub fn image(&self) -> &Image {
        self.image
    }

    #[inline]
    pub fn band(&self) -> Band {
        self.band
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.image.width()
    }

    #[inline]
    pub fn height(&self) -> u32 {
        self.image.height()
    }

    /// Band-membership score of the pixel at `(x, y)`, which must be in
    /// bounds.
    #[inline]
    pub fn eval(&self, x: u32, y: u32) -> f64 {
        debug_assert!(self.image.in_bounds(x, y));
        let d = self.band.distance(self.image.luma(x, y));
        if d == 0.0 {
            1.0
        } else if self.falloff > 0.0 {
            (1.0 - d / self.falloff).max(0.0)
        } else {
            0.0
        }
    }
}
