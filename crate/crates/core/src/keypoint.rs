use crate::error::Error;

/// Which pipeline produced a keypoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Detector {
    Sfa,
    Surf,
    Sift,
}

impl Detector {
    pub const ALL: [Detector; 3] = [Detector::Sfa, Detector::Surf, Detector::Sift];

    pub fn name(&self) -> &'static str {
        match self {
            Detector::Sfa => "sfa",
            Detector::Surf => "surf",
            Detector::Sift => "sift",
        }
    }
}

impl core::fmt::Display for Detector {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for Detector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sfa" => Ok(Detector::Sfa),
            "surf" => Ok(Detector::Surf),
            "sift" => Ok(Detector::Sift),
            other => Err(Error::InvalidParameter {
                name: "detector",
                detail: alloc::format!("unknown detector `{other}`, expected sfa, surf or sift"),
            }),
        }
    }
}

/// A detected image location.
///
/// Coordinates are in base-image pixels (sub-pixel for the refining
/// detectors, integer-valued for the swarm). `scale` is the characteristic
/// blur radius in pixels; the swarm reports a nominal 1.0. `score` is
/// detector-specific: band fitness, box-Hessian response, or refined
/// difference-of-Gaussians contrast.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyPoint {
    pub x: f64,
    pub y: f64,
    pub scale: f64,
    pub score: f64,
    /// Dominant gradient direction in radians, when the detector computes one.
    pub orientation: Option<f64>,
    pub detector: Detector,
}
