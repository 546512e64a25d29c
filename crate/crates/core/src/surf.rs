//! Box-filter Hessian detector over the integral energy image, with an
//! optional Haar-wavelet descriptor.
//!
//! Second-derivative filters are approximated by axis-aligned box
//! combinations evaluated in O(1) each via [`IntegralImage`], stacked over a
//! progression of filter sizes, and scanned for strict 3x3x3 maxima of the
//! Hessian determinant.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::Error;
use crate::grid::Grid;
use crate::image::Image;
use crate::integral::{rowsum_energy, IntegralImage};
use crate::keypoint::{Detector, KeyPoint};

#[derive(Debug, Clone, PartialEq)]
pub struct SurfConfig {
    /// Box filter side lengths, strictly increasing odd multiples of 3.
    pub filter_sizes: Vec<u32>,
    /// Detection threshold as a fraction of the strongest response in the
    /// stack. Ignored when `threshold_abs` is set.
    pub threshold_rel: f64,
    /// Absolute detection threshold override.
    pub threshold_abs: Option<f64>,
    /// Weight balancing the mixed-derivative term in the determinant.
    pub hessian_weight: f64,
    /// Compute descriptors (and orientations) for detected keypoints.
    pub descriptors: bool,
    /// Skip orientation assignment; descriptors stay axis-aligned.
    pub upright: bool,
}

impl Default for SurfConfig {
    fn default() -> Self {
        SurfConfig {
            filter_sizes: alloc::vec![9, 15, 21, 27],
            threshold_rel: 0.10,
            threshold_abs: None,
            hessian_weight: 0.9,
            descriptors: false,
            upright: false,
        }
    }
}

impl SurfConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.filter_sizes.len() < 3 {
            return Err(Error::InvalidParameter {
                name: "filter_sizes",
                detail: alloc::format!(
                    "{} sizes given, need at least 3 for scale suppression",
                    self.filter_sizes.len()
                ),
            });
        }
        for &size in &self.filter_sizes {
            check_filter_size(size)?;
        }
        for pair in self.filter_sizes.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::InvalidParameter {
                    name: "filter_sizes",
                    detail: alloc::format!("sizes must strictly increase, got {pair:?}"),
                });
            }
        }
        if !self.hessian_weight.is_finite() || self.hessian_weight <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "hessian_weight",
                detail: alloc::format!("{} is not a positive weight", self.hessian_weight),
            });
        }
        if !self.threshold_rel.is_finite() || self.threshold_rel < 0.0 {
            return Err(Error::InvalidParameter {
                name: "threshold_rel",
                detail: alloc::format!("{} is not a nonnegative fraction", self.threshold_rel),
            });
        }
        if let Some(abs) = self.threshold_abs {
            if !abs.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "threshold_abs",
                    detail: alloc::format!("{abs} is not finite"),
                });
            }
        }
        Ok(())
    }
}

/// Filter responses at one size: the Hessian determinant per pixel plus the
/// sign of the trace (`true` where `Dxx + Dyy >= 0`), which distinguishes
/// bright-on-dark from dark-on-bright structures. Border pixels where the
/// filter does not fit hold response 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseLayer {
    pub filter_size: u32,
    /// Equivalent Gaussian scale of this filter size: `1.2 * size / 9`.
    pub scale: f64,
    pub responses: Grid<f64>,
    pub laplacian: Grid<bool>,
}

/// Detection result; `descriptors`, when computed, runs parallel to
/// `keypoints`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfDetection {
    pub keypoints: Vec<KeyPoint>,
    pub descriptors: Option<Vec<SurfDescriptor>>,
}

/// 4x4 subregions x (sum dx, sum |dx|, sum dy, sum |dy|) of Haar responses,
/// L2-normalized. A window with no usable samples (constant or fully outside
/// the image) yields the zero vector with `degenerate` set.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfDescriptor {
    pub values: [f64; 64],
    pub degenerate: bool,
}

/// Box-filter second derivatives `(Dxx, Dyy, Dxy)` at `(x, y)`, each
/// normalized by the filter area.
///
/// For side length `L = 3l` (odd `l`), the filters are composed of box sums
/// over the integral image:
///
/// * `Dxx`: +1 over the full `L x (2l-1)` horizontal strip, -3 over its
///   middle `l x (2l-1)` box — the classic +1/-2/+1 lobe pattern.
/// * `Dyy`: the transpose.
/// * `Dxy`: four `l x l` boxes one pixel off the center axes, +1 in the
///   (-,-) and (+,+) quadrants, -1 in the mixed ones.
///
/// Errors with [`Error::FilterOutOfBounds`] when the `L x L` support does
/// not fit inside the image at `(x, y)`.
pub fn box_hessian(
    ii: &IntegralImage,
    x: u32,
    y: u32,
    filter_size: u32,
) -> Result<(f64, f64, f64), Error> {
    check_filter_size(filter_size)?;
    let half = (filter_size - 1) / 2;
    let fits = x >= half
        && y >= half
        && x + half < ii.width()
        && y + half < ii.height();
    if !fits {
        return Err(Error::FilterOutOfBounds { x, y, filter_size });
    }
    Ok(hessian_boxes(ii, x as i64, y as i64, filter_size))
}

/// Unchecked core of [`box_hessian`]; the caller guarantees fit.
fn hessian_boxes(ii: &IntegralImage, x: i64, y: i64, filter_size: u32) -> (f64, f64, f64) {
    let l = (filter_size / 3) as i64;
    let half = ((filter_size - 1) / 2) as i64;
    let lobe_half = (l - 1) / 2;
    // Inclusive-rectangle sum.
    let rect = |x0: i64, y0: i64, x1: i64, y1: i64| -> f64 {
        ii.sum_rect(x0 as u32, y0 as u32, (x1 + 1) as u32, (y1 + 1) as u32) as f64
    };
    let area = (filter_size as f64) * (filter_size as f64);

    let xx_strip = rect(x - half, y - (l - 1), x + half, y + (l - 1));
    let xx_mid = rect(x - lobe_half, y - (l - 1), x + lobe_half, y + (l - 1));
    let dxx = (xx_strip - 3.0 * xx_mid) / area;

    let yy_strip = rect(x - (l - 1), y - half, x + (l - 1), y + half);
    let yy_mid = rect(x - (l - 1), y - lobe_half, x + (l - 1), y + lobe_half);
    let dyy = (yy_strip - 3.0 * yy_mid) / area;

    let pp = rect(x + 1, y + 1, x + l, y + l);
    let mm = rect(x - l, y - l, x - 1, y - 1);
    let pm = rect(x + 1, y - l, x + l, y - 1);
    let mp = rect(x - l, y + 1, x - 1, y + l);
    let dxy = (pp + mm - pm - mp) / area;

    (dxx, dyy, dxy)
}

/// Approximated Hessian determinant: `Dxx * Dyy - (weight * Dxy)^2`.
#[inline]
pub fn hessian_det(dxx: f64, dyy: f64, dxy: f64, weight: f64) -> f64 {
    dxx * dyy - (weight * dxy) * (weight * dxy)
}

fn check_filter_size(size: u32) -> Result<(), Error> {
    if size < 3 || size % 3 != 0 || size % 2 == 0 {
        return Err(Error::InvalidParameter {
            name: "filter_size",
            detail: alloc::format!("{size} is not an odd multiple of 3"),
        });
    }
    Ok(())
}

/// One response layer per filter size, all at full image resolution.
/// Sizes must be strictly increasing odd multiples of 3.
pub fn build_layers(
    ii: &IntegralImage,
    filter_sizes: &[u32],
    hessian_weight: f64,
) -> Result<Vec<ResponseLayer>, Error> {
    if filter_sizes.is_empty() {
        return Err(Error::InvalidParameter {
            name: "filter_sizes",
            detail: alloc::string::String::from("at least one filter size required"),
        });
    }
    for pair in filter_sizes.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::InvalidParameter {
                name: "filter_sizes",
                detail: alloc::format!("sizes must strictly increase, got {pair:?}"),
            });
        }
    }
    let (w, h) = (ii.width(), ii.height());
    let mut layers = Vec::with_capacity(filter_sizes.len());
    for &size in filter_sizes {
        check_filter_size(size)?;
        let mut responses = Grid::filled(w, h, 0.0f64);
        let mut laplacian = Grid::filled(w, h, false);
        let half = (size - 1) / 2;
        if 2 * half < w && 2 * half < h {
            for y in half..h - half {
                for x in half..w - half {
                    let (dxx, dyy, dxy) = hessian_boxes(ii, x as i64, y as i64, size);
                    responses.set(x, y, hessian_det(dxx, dyy, dxy, hessian_weight));
                    laplacian.set(x, y, dxx + dyy >= 0.0);
                }
            }
        }
        layers.push(ResponseLayer {
            filter_size: size,
            scale: 1.2 * size as f64 / 9.0,
            responses,
            laplacian,
        });
    }
    Ok(layers)
}

/// Scans the middle layers of the stack for points whose response exceeds
/// `threshold` and strictly exceeds all 26 neighbors in position and size.
/// The reported scale is parabola-interpolated between adjacent layers.
///
/// Layers must share dimensions (as produced by [`build_layers`]); stacks
/// with fewer than three layers have no interior and yield nothing.
pub fn nms_3x3x3(layers: &[ResponseLayer], threshold: f64) -> Vec<KeyPoint> {
    let mut found = Vec::new();
    if layers.len() < 3 {
        return found;
    }
    let (w, h) = (layers[0].responses.width(), layers[0].responses.height());
    debug_assert!(layers.iter().all(|l| l.responses.width() == w && l.responses.height() == h));
    if w < 3 || h < 3 {
        return found;
    }
    for m in 1..layers.len() - 1 {
        for y in 1..h - 1 {
            'candidate: for x in 1..w - 1 {
                let v = layers[m].responses.get(x, y);
                if v <= threshold {
                    continue;
                }
                for dm in 0..3 {
                    let neighbor = &layers[m - 1 + dm].responses;
                    for ny in y - 1..=y + 1 {
                        for nx in x - 1..=x + 1 {
                            if dm == 1 && nx == x && ny == y {
                                continue;
                            }
                            if neighbor.get(nx, ny) >= v {
                                continue 'candidate;
                            }
                        }
                    }
                }
                found.push(KeyPoint {
                    x: x as f64,
                    y: y as f64,
                    scale: interpolate_scale(layers, m, x, y),
                    score: v,
                    orientation: None,
                    detector: Detector::Surf,
                });
            }
        }
    }
    found
}

/// 1D parabola through the responses of the adjacent layers; the vertex
/// offset (clamped to `[-1, 1]`) linearly interpolates the layer scales.
fn interpolate_scale(layers: &[ResponseLayer], m: usize, x: u32, y: u32) -> f64 {
    let prev = layers[m - 1].responses.get(x, y);
    let here = layers[m].responses.get(x, y);
    let next = layers[m + 1].responses.get(x, y);
    let denom = prev - 2.0 * here + next;
    let delta = if denom == 0.0 { 0.0 } else { (0.5 * (prev - next) / denom).clamp(-1.0, 1.0) };
    let scale = layers[m].scale;
    if delta >= 0.0 {
        scale + delta * (layers[m + 1].scale - scale)
    } else {
        scale + delta * (scale - layers[m - 1].scale)
    }
}

/// Full pipeline: energy integral, response stack, 3x3x3 suppression,
/// optional orientation + descriptor pass. Keypoints come back strongest
/// first.
pub fn detect_surf(img: &Image, cfg: &SurfConfig) -> Result<SurfDetection, Error> {
    cfg.validate()?;
    let min_size = cfg.filter_sizes[0];
    if img.width() < min_size || img.height() < min_size {
        return Err(Error::ImageTooSmall {
            width: img.width(),
            height: img.height(),
            min_width: min_size,
            min_height: min_size,
        });
    }

    let ii = IntegralImage::build(&rowsum_energy(img))?;
    let layers = build_layers(&ii, &cfg.filter_sizes, cfg.hessian_weight)?;

    let threshold = cfg.threshold_abs.unwrap_or_else(|| {
        let peak = layers
            .iter()
            .flat_map(|l| l.responses.data().iter().copied())
            .fold(0.0f64, f64::max);
        cfg.threshold_rel * peak
    });

    let mut keypoints = nms_3x3x3(&layers, threshold);
    keypoints.sort_by(|a, b| b.score.total_cmp(&a.score));

    let descriptors = if cfg.descriptors {
        let lum = luminance_integral(img);
        let mut all = Vec::with_capacity(keypoints.len());
        for kp in &mut keypoints {
            let theta = if cfg.upright { 0.0 } else { orientation_at(&lum, kp) };
            if !cfg.upright {
                kp.orientation = Some(theta);
            }
            all.push(descriptor_at(&lum, kp, theta));
        }
        Some(all)
    } else {
        None
    };

    Ok(SurfDetection { keypoints, descriptors })
}

/// Haar descriptor for one keypoint. With `upright` the sampling grid stays
/// axis-aligned; otherwise it is rotated to the dominant Haar direction.
pub fn surf_descriptor(img: &Image, kp: &KeyPoint, upright: bool) -> SurfDescriptor {
    let lum = luminance_integral(img);
    let theta = if upright { 0.0 } else { orientation_at(&lum, kp) };
    descriptor_at(&lum, kp, theta)
}

/// Integral image over rounded 8-bit luminance (Haar responses act on
/// intensity, not on squared energy).
fn luminance_integral(img: &Image) -> IntegralImage {
    let grid = Grid::from_fn(img.width(), img.height(), |x, y| {
        let px = img.pixel(x, y);
        if img.channels() == 1 {
            px[0] as u64
        } else {
            (0.299 * px[0] as f64 + 0.587 * px[1] as f64 + 0.114 * px[2] as f64).round() as u64
        }
    });
    IntegralImage::build(&grid).expect("8-bit luminance cannot overflow u64")
}

/// Haar response in x at `(cx, cy)`: right box minus left box, each `h`
/// columns wide, spanning rows `cy-h ..= cy+h` (the center column is
/// excluded, making the response odd in x). `None` when the support leaves
/// the image.
fn haar_x(ii: &IntegralImage, cx: i64, cy: i64, h: i64) -> Option<f64> {
    if cx - h < 0 || cy - h < 0 || cx + h >= ii.width() as i64 || cy + h >= ii.height() as i64 {
        return None;
    }
    let rect = |x0: i64, y0: i64, x1: i64, y1: i64| {
        ii.sum_rect(x0 as u32, y0 as u32, (x1 + 1) as u32, (y1 + 1) as u32) as f64
    };
    let right = rect(cx + 1, cy - h, cx + h, cy + h);
    let left = rect(cx - h, cy - h, cx - 1, cy + h);
    Some(right - left)
}

/// Haar response in y: lower box minus upper box; the transpose of
/// [`haar_x`].
fn haar_y(ii: &IntegralImage, cx: i64, cy: i64, h: i64) -> Option<f64> {
    if cx - h < 0 || cy - h < 0 || cx + h >= ii.width() as i64 || cy + h >= ii.height() as i64 {
        return None;
    }
    let rect = |x0: i64, y0: i64, x1: i64, y1: i64| {
        ii.sum_rect(x0 as u32, y0 as u32, (x1 + 1) as u32, (y1 + 1) as u32) as f64
    };
    let lower = rect(cx - h, cy + 1, cx + h, cy + h);
    let upper = rect(cx - h, cy - h, cx + h, cy - 1);
    Some(lower - upper)
}

/// Dominant direction: the angle of the summed Haar response over a disc of
/// radius `6 * scale` sampled at integer offsets, wavelet half-width
/// `2 * scale`. Zero when no sample is usable or the region is flat.
fn orientation_at(lum: &IntegralImage, kp: &KeyPoint) -> f64 {
    let cx = kp.x.round() as i64;
    let cy = kp.y.round() as i64;
    let radius = (6.0 * kp.scale).round().max(1.0) as i64;
    let h = (2.0 * kp.scale).round().max(1.0) as i64;
    let mut gx = 0.0;
    let mut gy = 0.0;
    for dv in -radius..=radius {
        for du in -radius..=radius {
            if du * du + dv * dv > radius * radius {
                continue;
            }
            if let (Some(hx), Some(hy)) =
                (haar_x(lum, cx + du, cy + dv, h), haar_y(lum, cx + du, cy + dv, h))
            {
                gx += hx;
                gy += hy;
            }
        }
    }
    if gx == 0.0 && gy == 0.0 {
        0.0
    } else {
        gy.atan2(gx)
    }
}

fn descriptor_at(lum: &IntegralImage, kp: &KeyPoint, theta: f64) -> SurfDescriptor {
    let s = kp.scale.max(0.5);
    let cx = kp.x.round();
    let cy = kp.y.round();
    let h = s.round().max(1.0) as i64;
    let (sin_t, cos_t) = theta.sin_cos();

    let mut values = [0.0f64; 64];
    let mut sampled = false;
    for row in 0..20u32 {
        for col in 0..20u32 {
            // Sample offsets symmetric about the keypoint: +-(0.5..9.5) * s.
            let u = (col as f64 - 9.5) * s;
            let v = (row as f64 - 9.5) * s;
            let gu = u * cos_t - v * sin_t;
            let gv = u * sin_t + v * cos_t;
            let px = (cx + gu).round() as i64;
            let py = (cy + gv).round() as i64;
            let (Some(dx), Some(dy)) = (haar_x(lum, px, py, h), haar_y(lum, px, py, h)) else {
                continue;
            };
            sampled = true;
            // Project the responses onto the rotated frame.
            let rdx = cos_t * dx + sin_t * dy;
            let rdy = -sin_t * dx + cos_t * dy;
            let sub = ((row / 5) * 4 + col / 5) as usize;
            values[sub * 4] += rdx;
            values[sub * 4 + 1] += rdx.abs();
            values[sub * 4 + 2] += rdy;
            values[sub * 4 + 3] += rdy.abs();
        }
    }

    let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !sampled || norm <= 1e-12 {
        return SurfDescriptor { values: [0.0; 64], degenerate: true };
    }
    for v in &mut values {
        *v /= norm;
    }
    SurfDescriptor { values, degenerate: false }
}
