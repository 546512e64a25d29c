//! Synthetic test images with ground-truth masks.
//!
//! Every generator is deterministic: the same spec always produces the same
//! image, and the mask is recomputed from the finished image so it stays
//! honest — a pixel is ground truth exactly when its luminance falls in the
//! target band.

use std::fmt;
use std::str::FromStr;

use fkp_core::{Band, Grid, Image};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureKind {
    Disc,
    Checkerboard,
    BlobGrid,
    StepEdge,
    Constant,
}

impl FixtureKind {
    pub const ALL: [FixtureKind; 5] = [
        FixtureKind::Disc,
        FixtureKind::Checkerboard,
        FixtureKind::BlobGrid,
        FixtureKind::StepEdge,
        FixtureKind::Constant,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FixtureKind::Disc => "disc",
            FixtureKind::Checkerboard => "checkerboard",
            FixtureKind::BlobGrid => "blob-grid",
            FixtureKind::StepEdge => "step-edge",
            FixtureKind::Constant => "constant",
        }
    }
}

impl fmt::Display for FixtureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FixtureKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "disc" => Ok(FixtureKind::Disc),
            "checkerboard" => Ok(FixtureKind::Checkerboard),
            "blob-grid" => Ok(FixtureKind::BlobGrid),
            "step-edge" => Ok(FixtureKind::StepEdge),
            "constant" => Ok(FixtureKind::Constant),
            other => Err(format!(
                "unknown fixture `{other}` (expected disc, checkerboard, blob-grid, step-edge, or constant)"
            )),
        }
    }
}

/// Geometry for one synthetic image. `fg` doubles as the fill level of the
/// `constant` kind, which defaults to mid-gray so that the standard bright
/// band sees an empty mask.
#[derive(Debug, Clone, PartialEq)]
pub struct FixtureSpec {
    pub kind: FixtureKind,
    pub width: u32,
    pub height: u32,
    pub fg: u8,
    pub bg: u8,
    /// Disc radius in pixels.
    pub radius: f64,
    /// Checkerboard cell side in pixels.
    pub cell: u32,
    /// Blob standard deviation in pixels.
    pub blob_sigma: f64,
}

impl FixtureSpec {
    pub fn new(kind: FixtureKind) -> FixtureSpec {
        FixtureSpec {
            kind,
            width: 256,
            height: 256,
            fg: match kind {
                FixtureKind::Constant => 128,
                _ => 255,
            },
            bg: 0,
            radius: 40.0,
            cell: 32,
            blob_sigma: 2.0,
        }
    }

    pub fn with_size(mut self, width: u32, height: u32) -> FixtureSpec {
        self.width = width;
        self.height = height;
        self
    }

    fn validate(&self) -> Result<(), String> {
        if self.width == 0 || self.height == 0 {
            return Err(format!("fixture size {}x{} is empty", self.width, self.height));
        }
        match self.kind {
            FixtureKind::Disc => {
                let max = f64::from(self.width.min(self.height)) / 2.0;
                if self.radius <= 0.0 || self.radius > max {
                    return Err(format!(
                        "disc radius {} does not fit a {}x{} image (max {max})",
                        self.radius, self.width, self.height
                    ));
                }
            }
            FixtureKind::Checkerboard => {
                if self.cell == 0 || self.cell > self.width.min(self.height) {
                    return Err(format!("checkerboard cell {} does not fit", self.cell));
                }
            }
            FixtureKind::BlobGrid => {
                if self.blob_sigma <= 0.0 {
                    return Err(format!("blob sigma {} must be positive", self.blob_sigma));
                }
                if self.width < 16 || self.height < 16 {
                    return Err(format!(
                        "blob grid needs at least 16x16, got {}x{}",
                        self.width, self.height
                    ));
                }
            }
            FixtureKind::StepEdge | FixtureKind::Constant => {}
        }
        Ok(())
    }
}

/// The 3x3 blob-grid centers: quarter points of each axis.
pub fn blob_centers(width: u32, height: u32) -> Vec<(f64, f64)> {
    let xs = [f64::from(width) / 4.0, f64::from(width) / 2.0, 3.0 * f64::from(width) / 4.0];
    let ys = [f64::from(height) / 4.0, f64::from(height) / 2.0, 3.0 * f64::from(height) / 4.0];
    ys.iter().flat_map(|&y| xs.iter().map(move |&x| (x, y))).collect()
}

/// Renders the image and its ground-truth mask: the pixels whose luminance
/// lies in `band`.
pub fn make_fixture(spec: &FixtureSpec, band: Band) -> Result<(Image, Grid<bool>), String> {
    spec.validate()?;
    let (w, h) = (spec.width, spec.height);
    let (fg, bg) = (f64::from(spec.fg), f64::from(spec.bg));
    let img = match spec.kind {
        FixtureKind::Disc => {
            let (cx, cy) = (f64::from(w) / 2.0, f64::from(h) / 2.0);
            Image::gray_from_fn(w, h, |x, y| {
                let dx = f64::from(x) - cx;
                let dy = f64::from(y) - cy;
                if (dx * dx + dy * dy).sqrt() <= spec.radius {
                    spec.fg
                } else {
                    spec.bg
                }
            })
        }
        FixtureKind::Checkerboard => Image::gray_from_fn(w, h, |x, y| {
            if (x / spec.cell + y / spec.cell) % 2 == 0 {
                spec.fg
            } else {
                spec.bg
            }
        }),
        FixtureKind::BlobGrid => {
            let centers = blob_centers(w, h);
            let denom = 2.0 * spec.blob_sigma * spec.blob_sigma;
            Image::gray_from_fn(w, h, |x, y| {
                let peak = centers
                    .iter()
                    .map(|&(cx, cy)| {
                        let dx = f64::from(x) - cx;
                        let dy = f64::from(y) - cy;
                        (-(dx * dx + dy * dy) / denom).exp()
                    })
                    .fold(0.0, f64::max);
                (bg + (fg - bg) * peak).round().clamp(0.0, 255.0) as u8
            })
        }
        FixtureKind::StepEdge => {
            Image::gray_from_fn(w, h, |x, _| if x < w / 2 { spec.bg } else { spec.fg })
        }
        FixtureKind::Constant => Image::constant(w, h, spec.fg),
    };
    let mask = band_mask(&img, band);
    Ok((img, mask))
}

/// Binary mask of the pixels whose luminance falls inside the band.
pub fn band_mask(img: &Image, band: Band) -> Grid<bool> {
    Grid::from_fn(img.width(), img.height(), |x, y| {
        let lum = img.luminance(x, y).expect("in-bounds by construction");
        lum >= band.low() && lum <= band.high()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bright() -> Band {
        Band::new(0.9, 1.0).unwrap()
    }

    #[test]
    fn disc_mask_matches_a_distance_scan() {
        let spec = FixtureSpec::new(FixtureKind::Disc);
        let (img, mask) = make_fixture(&spec, bright()).unwrap();
        let mut expected = 0u32;
        for y in 0..256u32 {
            for x in 0..256u32 {
                let dx = f64::from(x) - 128.0;
                let dy = f64::from(y) - 128.0;
                if (dx * dx + dy * dy).sqrt() <= 40.0 {
                    expected += 1;
                    assert_eq!(img.pixel(x, y)[0], 255);
                    assert!(mask.get(x, y));
                } else {
                    assert_eq!(img.pixel(x, y)[0], 0);
                    assert!(!mask.get(x, y));
                }
            }
        }
        let count = mask.data().iter().filter(|&&m| m).count() as u32;
        assert_eq!(count, expected);
        assert!(expected > 0);
    }

    #[test]
    fn constant_fixture_has_an_empty_bright_mask() {
        let spec = FixtureSpec::new(FixtureKind::Constant);
        let (img, mask) = make_fixture(&spec, bright()).unwrap();
        assert!(img.data().iter().all(|&v| v == 128));
        assert!(mask.data().iter().all(|&m| !m));
    }

    #[test]
    fn step_edge_mask_is_the_bright_half() {
        let spec = FixtureSpec::new(FixtureKind::StepEdge).with_size(64, 32);
        let (_, mask) = make_fixture(&spec, bright()).unwrap();
        for y in 0..32 {
            for x in 0..64 {
                assert_eq!(mask.get(x, y), x >= 32, "at ({x}, {y})");
            }
        }
    }

    #[test]
    fn blob_grid_peaks_at_the_nine_centers() {
        let spec = FixtureSpec::new(FixtureKind::BlobGrid).with_size(128, 128);
        let (img, mask) = make_fixture(&spec, bright()).unwrap();
        for (cx, cy) in blob_centers(128, 128) {
            assert_eq!(img.pixel(cx as u32, cy as u32)[0], 255);
            assert!(mask.get(cx as u32, cy as u32));
        }
        assert_eq!(blob_centers(128, 128).len(), 9);
    }

    #[test]
    fn oversized_disc_is_rejected() {
        let mut spec = FixtureSpec::new(FixtureKind::Disc).with_size(64, 64);
        spec.radius = 40.0;
        assert!(make_fixture(&spec, bright()).is_err());
    }

    #[test]
    fn generators_are_deterministic() {
        for kind in FixtureKind::ALL {
            let spec = FixtureSpec::new(kind).with_size(48, 40);
            let (a, _) = make_fixture(&spec, bright()).unwrap();
            let (b, _) = make_fixture(&spec, bright()).unwrap();
            assert_eq!(a, b, "{kind} not deterministic");
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in FixtureKind::ALL {
            assert_eq!(kind.name().parse::<FixtureKind>().unwrap(), kind);
        }
        assert!("blob".parse::<FixtureKind>().is_err());
    }
}
