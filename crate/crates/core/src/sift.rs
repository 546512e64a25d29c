//! Difference-of-Gaussians detector: Gaussian scale space, 26-neighbor
//! extrema, iterative sub-pixel Taylor refinement, contrast and edge
//! rejection.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::Error;
use crate::grid::Grid;
use crate::image::Image;
use crate::keypoint::{Detector, KeyPoint};

pub const DEFAULT_BASE_SIGMA: f64 = 1.6;
pub const DEFAULT_CONTRAST_THRESHOLD: f64 = 0.03;
pub const DEFAULT_EDGE_RATIO: f64 = 10.0;
/// Lattice re-localization attempts before a refinement is abandoned.
pub const MAX_REFINE_ATTEMPTS: usize = 5;

const MIN_IMAGE_SIDE: u32 = 16;
const MIN_OCTAVE_SIDE: u32 = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct SiftConfig {
    /// Blur of the first scale-space level.
    pub base_sigma: f64,
    /// Gaussian levels per octave (at least 3; at least 4 gives the
    /// difference pyramid an interior scale to detect in).
    pub scales_per_octave: usize,
    /// Octave count; `None` derives it from the image size.
    pub octaves: Option<usize>,
    /// Minimum absolute difference-of-Gaussians contrast, both for raw
    /// extrema and for the refined value.
    pub contrast_threshold: f64,
    /// Maximum allowed ratio of principal curvatures.
    pub edge_ratio: f64,
}

impl Default for SiftConfig {
    fn default() -> Self {
        SiftConfig {
            base_sigma: DEFAULT_BASE_SIGMA,
            scales_per_octave: 6,
            octaves: None,
            contrast_threshold: DEFAULT_CONTRAST_THRESHOLD,
            edge_ratio: DEFAULT_EDGE_RATIO,
        }
    }
}

impl SiftConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if !self.base_sigma.is_finite() || self.base_sigma <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "base_sigma",
                detail: alloc::format!("{} is not a positive blur", self.base_sigma),
            });
        }
        if self.scales_per_octave < 3 {
            return Err(Error::InvalidParameter {
                name: "scales_per_octave",
                detail: alloc::format!("{} levels, need at least 3", self.scales_per_octave),
            });
        }
        if !self.contrast_threshold.is_finite() || self.contrast_threshold < 0.0 {
            return Err(Error::InvalidParameter {
                name: "contrast_threshold",
                detail: alloc::format!("{} is not nonnegative", self.contrast_threshold),
            });
        }
        if !self.edge_ratio.is_finite() || self.edge_ratio < 1.0 {
            return Err(Error::InvalidParameter {
                name: "edge_ratio",
                detail: alloc::format!("{} is below 1", self.edge_ratio),
            });
        }
        Ok(())
    }
}

/// Gaussian levels of one octave; `sigmas` are absolute blurs relative to
/// the base image (level `s` of octave `o` carries
/// `base_sigma * 2^(o + s / scales_per_octave)`).
#[derive(Debug, Clone, PartialEq)]
pub struct Octave {
    pub levels: Vec<Grid<f64>>,
    pub sigmas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaleSpace {
    pub octaves: Vec<Octave>,
    pub base_sigma: f64,
    pub scales_per_octave: usize,
}

/// Adjacent-level differences of one octave: `levels[s] = L[s+1] - L[s]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DogOctave {
    pub levels: Vec<Grid<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DogPyramid {
    pub octaves: Vec<DogOctave>,
    pub base_sigma: f64,
    pub scales_per_octave: usize,
}

impl DogPyramid {
    /// Absolute blur attributed to (possibly fractional) difference level
    /// `level` of `octave`: the geometric mean of the two Gaussian levels it
    /// separates.
    pub fn sigma_at(&self, octave: usize, level: f64) -> f64 {
        let s = self.scales_per_octave as f64;
        self.base_sigma * ((octave as f64) + (level + 0.5) / s).exp2()
    }
}

/// Separable Gaussian convolution with kernel radius `ceil(3 * sigma)`,
/// normalized to unit sum, replicating edge samples. `sigma` must be
/// positive.
pub fn gaussian_blur(grid: &Grid<f64>, sigma: f64) -> Grid<f64> {
    assert!(sigma > 0.0, "blur sigma must be positive, got {sigma}");
    let radius = (3.0 * sigma).ceil() as i64;
    let mut kernel = Vec::with_capacity(2 * radius as usize + 1);
    for i in -radius..=radius {
        kernel.push((-((i * i) as f64) / (2.0 * sigma * sigma)).exp());
    }
    let total: f64 = kernel.iter().sum();
    for k in &mut kernel {
        *k /= total;
    }

    let (w, h) = (grid.width(), grid.height());
    let clamp = |v: i64, hi: u32| v.clamp(0, hi as i64 - 1) as u32;
    // Horizontal pass, then vertical.
    let horizontal = Grid::from_fn(w, h, |x, y| {
        kernel
            .iter()
            .enumerate()
            .map(|(i, k)| k * grid.get(clamp(x as i64 + i as i64 - radius, w), y))
            .sum::<f64>()
    });
    Grid::from_fn(w, h, |x, y| {
        kernel
            .iter()
            .enumerate()
            .map(|(i, k)| k * horizontal.get(x, clamp(y as i64 + i as i64 - radius, h)))
            .sum::<f64>()
    })
}

fn downsample(grid: &Grid<f64>) -> Grid<f64> {
    Grid::from_fn(grid.width() / 2, grid.height() / 2, |x, y| grid.get(2 * x, 2 * y))
}

/// Octave count derived from the image: halvings until the shorter side
/// would drop below 8 pixels (at least one octave).
pub fn derive_octaves(width: u32, height: u32) -> usize {
    let side = width.min(height) / MIN_OCTAVE_SIDE;
    side.max(1).ilog2().max(1) as usize
}

/// Builds the Gaussian pyramid from the image luminance. Octave 0 is at
/// image resolution; each further octave halves the dimensions (floor),
/// never below 8x8 — an explicit `octaves` request is capped accordingly.
/// The image must be at least 16x16.
pub fn build_scale_space(
    img: &Image,
    base_sigma: f64,
    scales_per_octave: usize,
    octaves: Option<usize>,
) -> Result<ScaleSpace, Error> {
    let cfg = SiftConfig {
        base_sigma,
        scales_per_octave,
        octaves,
        ..SiftConfig::default()
    };
    cfg.validate()?;
    if img.width() < MIN_IMAGE_SIDE || img.height() < MIN_IMAGE_SIDE {
        return Err(Error::ImageTooSmall {
            width: img.width(),
            height: img.height(),
            min_width: MIN_IMAGE_SIDE,
            min_height: MIN_IMAGE_SIDE,
        });
    }
    // Deepest octave that still spans 8x8 after halvings.
    let deepest = (img.width().min(img.height()) / MIN_OCTAVE_SIDE).ilog2() as usize + 1;
    let count = octaves.unwrap_or_else(|| derive_octaves(img.width(), img.height()));
    let count = count.clamp(1, deepest);

    let s = scales_per_octave as f64;
    let base = Grid::from_fn(img.width(), img.height(), |x, y| img.luma(x, y));

    let mut all = Vec::with_capacity(count);
    // In its own pixel units every octave runs the same blur ladder
    // base_sigma * 2^(s / S); absolute blur doubles octave over octave.
    let own_sigma: Vec<f64> =
        (0..scales_per_octave).map(|i| base_sigma * (i as f64 / s).exp2()).collect();

    let mut seed = base;
    // Blur already carried by `seed`, in the pixel units of the octave
    // being built. The raw image counts as unblurred.
    let mut seed_blur = 0.0f64;
    for o in 0..count {
        let mut levels: Vec<Grid<f64>> = Vec::with_capacity(scales_per_octave);
        for (i, &target) in own_sigma.iter().enumerate() {
            let prev_blur = if i == 0 { seed_blur } else { own_sigma[i - 1] };
            let source = if i == 0 { &seed } else { &levels[i - 1] };
            let increment = (target * target - prev_blur * prev_blur).sqrt();
            levels.push(gaussian_blur(source, increment));
        }
        let sigmas = (0..scales_per_octave)
            .map(|i| base_sigma * (o as f64 + i as f64 / s).exp2())
            .collect();
        if o + 1 < count {
            // Halving the grid halves the blur expressed in new pixel units.
            seed = downsample(levels.last().expect("at least 3 levels"));
            seed_blur = own_sigma[scales_per_octave - 1] / 2.0;
        }
        all.push(Octave { levels, sigmas });
    }
    Ok(ScaleSpace { octaves: all, base_sigma, scales_per_octave })
}

/// Adjacent differences per octave; exact elementwise subtraction, so each
/// octave has `scales_per_octave - 1` levels.
pub fn build_dog(ss: &ScaleSpace) -> DogPyramid {
    let octaves = ss
        .octaves
        .iter()
        .map(|oct| DogOctave {
            levels: oct
                .levels
                .windows(2)
                .map(|pair| {
                    Grid::from_fn(pair[0].width(), pair[0].height(), |x, y| {
                        pair[1].get(x, y) - pair[0].get(x, y)
                    })
                })
                .collect(),
        })
        .collect();
    DogPyramid { octaves, base_sigma: ss.base_sigma, scales_per_octave: ss.scales_per_octave }
}

/// Position of a raw (unrefined) scale-space extremum. `level` indexes the
/// difference grids of `octave`; coordinates are in octave pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawExtremum {
    pub octave: usize,
    pub level: usize,
    pub x: u32,
    pub y: u32,
}

/// Scans every octave for interior points that strictly dominate (or are
/// strictly dominated by) all 26 neighbors in position and level, with
/// `|D| > contrast_threshold`.
pub fn find_extrema(dog: &DogPyramid, contrast_threshold: f64) -> Vec<RawExtremum> {
    let mut found = Vec::new();
    for (o, oct) in dog.octaves.iter().enumerate() {
        if oct.levels.len() < 3 {
            continue;
        }
        let (w, h) = (oct.levels[0].width(), oct.levels[0].height());
        for level in 1..oct.levels.len() - 1 {
            for y in 1..h - 1 {
                'candidate: for x in 1..w - 1 {
                    let v = oct.levels[level].get(x, y);
                    if v.abs() <= contrast_threshold {
                        continue;
                    }
                    let mut above = false;
                    let mut below = false;
                    for dl in 0..3 {
                        let grid = &oct.levels[level - 1 + dl];
                        for ny in y - 1..=y + 1 {
                            for nx in x - 1..=x + 1 {
                                if dl == 1 && nx == x && ny == y {
                                    continue;
                                }
                                let n = grid.get(nx, ny);
                                if n >= v {
                                    above = true;
                                }
                                if n <= v {
                                    below = true;
                                }
                                if above && below {
                                    continue 'candidate;
                                }
                            }
                        }
                    }
                    found.push(RawExtremum { octave: o, level, x, y });
                }
            }
        }
    }
    found
}

/// Why a raw extremum was not promoted to a keypoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RejectReason {
    /// The Taylor offset kept exceeding half a pixel after
    /// [`MAX_REFINE_ATTEMPTS`] re-localizations.
    OffsetDiverged,
    /// Re-localization walked outside the interior of the octave.
    OutOfBounds,
    /// The 3x3 second-derivative system has no solution.
    SingularHessian,
    /// Refined contrast `|D̂|` below the threshold.
    LowContrast,
    /// Principal-curvature ratio test failed (edge-like point).
    Edge,
}

/// An accepted keypoint together with the sub-lattice offset
/// `[dx, dy, dlevel]` measured at the final lattice point.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinedKeypoint {
    pub keypoint: KeyPoint,
    pub offset: [f64; 3],
}

/// Three-dimensional quadratic (Taylor) refinement of a raw extremum.
///
/// Finite-difference gradient and Hessian give the sub-lattice offset
/// `X̂ = -H⁻¹ ∇D`; an offset component beyond 0.5 moves the candidate to the
/// adjacent lattice point and retries, up to [`MAX_REFINE_ATTEMPTS`] times.
/// Accepted points must keep the refined contrast
/// `D̂ = D + (∇D · X̂) / 2` at or above `contrast_threshold` in magnitude and
/// pass the curvature-ratio test `tr²/det < (r+1)²/r`.
pub fn refine_keypoint(
    dog: &DogPyramid,
    raw: &RawExtremum,
    cfg: &SiftConfig,
) -> Result<RefinedKeypoint, RejectReason> {
    let oct = &dog.octaves[raw.octave];
    let levels = &oct.levels;
    let (w, h) = (levels[0].width(), levels[0].height());
    assert!(
        raw.level >= 1 && raw.level + 1 < levels.len() && raw.x >= 1 && raw.y >= 1
            && raw.x + 1 < w && raw.y + 1 < h,
        "raw extremum must be interior"
    );

    let (mut x, mut y, mut level) = (raw.x, raw.y, raw.level);
    let mut solution: Option<([f64; 3], [f64; 3], f64, f64)> = None;
    for _ in 0..MAX_REFINE_ATTEMPTS {
        let d = |dl: i64, dy: i64, dx: i64| {
            levels[(level as i64 + dl) as usize]
                .get((x as i64 + dx) as u32, (y as i64 + dy) as u32)
        };
        let value = d(0, 0, 0);
        let g = [
            (d(0, 0, 1) - d(0, 0, -1)) / 2.0,
            (d(0, 1, 0) - d(0, -1, 0)) / 2.0,
            (d(1, 0, 0) - d(-1, 0, 0)) / 2.0,
        ];
        let dxx = d(0, 0, 1) - 2.0 * value + d(0, 0, -1);
        let dyy = d(0, 1, 0) - 2.0 * value + d(0, -1, 0);
        let dss = d(1, 0, 0) - 2.0 * value + d(-1, 0, 0);
        let dxy = (d(0, 1, 1) - d(0, 1, -1) - d(0, -1, 1) + d(0, -1, -1)) / 4.0;
        let dxs = (d(1, 0, 1) - d(1, 0, -1) - d(-1, 0, 1) + d(-1, 0, -1)) / 4.0;
        let dys = (d(1, 1, 0) - d(1, -1, 0) - d(-1, 1, 0) + d(-1, -1, 0)) / 4.0;
        let hess = [[dxx, dxy, dxs], [dxy, dyy, dys], [dxs, dys, dss]];

        let offset = solve_3x3(&hess, &[-g[0], -g[1], -g[2]])
            .ok_or(RejectReason::SingularHessian)?;
        if offset.iter().all(|c| c.abs() <= 0.5) {
            let refined = value + 0.5 * (g[0] * offset[0] + g[1] * offset[1] + g[2] * offset[2]);
            solution = Some((offset, g, refined, value));
            break;
        }

        // Walk one lattice step toward the offset and try again.
        let step = |c: f64| {
            if c > 0.5 {
                1i64
            } else if c < -0.5 {
                -1
            } else {
                0
            }
        };
        let nx = x as i64 + step(offset[0]);
        let ny = y as i64 + step(offset[1]);
        let nl = level as i64 + step(offset[2]);
        if nx < 1 || ny < 1 || nl < 1 || nx + 1 >= w as i64 || ny + 1 >= h as i64
            || nl + 1 >= levels.len() as i64
        {
            return Err(RejectReason::OutOfBounds);
        }
        (x, y, level) = (nx as u32, ny as u32, nl as usize);
    }
    let Some((offset, _g, refined, _value)) = solution else {
        return Err(RejectReason::OffsetDiverged);
    };

    if refined.abs() < cfg.contrast_threshold {
        return Err(RejectReason::LowContrast);
    }

    // Spatial curvature test at the settled lattice point.
    let d = |dy: i64, dx: i64| {
        levels[level].get((x as i64 + dx) as u32, (y as i64 + dy) as u32)
    };
    let value = d(0, 0);
    let sxx = d(0, 1) - 2.0 * value + d(0, -1);
    let syy = d(1, 0) - 2.0 * value + d(-1, 0);
    let sxy = (d(1, 1) - d(1, -1) - d(-1, 1) + d(-1, -1)) / 4.0;
    let trace = sxx + syy;
    let det = sxx * syy - sxy * sxy;
    let r = cfg.edge_ratio;
    if det <= 0.0 || trace * trace / det >= (r + 1.0) * (r + 1.0) / r {
        return Err(RejectReason::Edge);
    }

    let factor = (1u32 << raw.octave) as f64;
    Ok(RefinedKeypoint {
        keypoint: KeyPoint {
            x: (x as f64 + offset[0]) * factor,
            y: (y as f64 + offset[1]) * factor,
            scale: dog.sigma_at(raw.octave, level as f64 + offset[2]),
            score: refined,
            orientation: None,
            detector: Detector::Sift,
        },
        offset,
    })
}

/// Cramer solve of `A x = b`; `None` when the determinant vanishes.
fn solve_3x3(a: &[[f64; 3]; 3], b: &[f64; 3]) -> Option<[f64; 3]> {
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(a);
    if d == 0.0 || !d.is_finite() {
        return None;
    }
    let mut x = [0.0f64; 3];
    for (col, slot) in x.iter_mut().enumerate() {
        let mut m = *a;
        for row in 0..3 {
            m[row][col] = b[row];
        }
        *slot = det(&m) / d;
    }
    Some(x)
}

/// Full pipeline: scale space, difference pyramid, raw extrema, refinement.
/// Keypoints are mapped to base-image coordinates and sorted by `|score|`
/// descending. Rejected extrema are dropped silently.
pub fn detect_sift(img: &Image, cfg: &SiftConfig) -> Result<Vec<KeyPoint>, Error> {
    cfg.validate()?;
    let ss = build_scale_space(img, cfg.base_sigma, cfg.scales_per_octave, cfg.octaves)?;
    let dog = build_dog(&ss);
    let mut keypoints: Vec<KeyPoint> = find_extrema(&dog, cfg.contrast_threshold)
        .iter()
        .filter_map(|raw| refine_keypoint(&dog, raw, cfg).ok())
        .map(|r| r.keypoint)
        .collect();
    keypoints.sort_by(|a, b| b.score.abs().total_cmp(&a.score.abs()));
    Ok(keypoints)
}
