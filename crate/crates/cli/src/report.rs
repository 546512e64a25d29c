//! Run reports and keypoint persistence.
//!
//! The JSON report is a single object whose key order is fixed by the
//! struct definitions below, so identical runs serialize identically. The
//! keypoint CSV carries one row per keypoint with a fixed header.

use std::io::Write;

use fkp_core::surf::SurfConfig;
use fkp_core::sfa::SfaParams;
use fkp_core::sift::SiftConfig;
use fkp_core::KeyPoint;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectionReport {
    pub detector: String,
    pub image_width: u32,
    pub image_height: u32,
    pub band_low: f64,
    pub band_high: f64,
    pub seed: u64,
    pub params: ParamEcho,
    pub keypoint_count: usize,
    pub millis: f64,
    pub precision: f64,
    pub recall: f64,
    pub spread: f64,
}

/// Parameter echo, tagged by detector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ParamEcho {
    Sfa {
        fireflies: usize,
        generations: usize,
        beta_pop: f64,
        gamma: f64,
        mu: f64,
        best_ratio: f64,
    },
    Surf {
        sizes: Vec<u32>,
        threshold_rel: f64,
        threshold_abs: Option<f64>,
        descriptors: bool,
    },
    Sift {
        scales_per_octave: usize,
        octaves: Option<usize>,
        base_sigma: f64,
        contrast_threshold: f64,
        edge_ratio: f64,
    },
}

impl ParamEcho {
    pub fn sfa(p: &SfaParams) -> ParamEcho {
        ParamEcho::Sfa {
            fireflies: p.fireflies,
            generations: p.generations,
            beta_pop: p.beta_pop,
            gamma: p.gamma,
            mu: p.mu,
            best_ratio: p.best_ratio,
        }
    }

    pub fn surf(c: &SurfConfig) -> ParamEcho {
        ParamEcho::Surf {
            sizes: c.filter_sizes.clone(),
            threshold_rel: c.threshold_rel,
            threshold_abs: c.threshold_abs,
            descriptors: c.descriptors,
        }
    }

    pub fn sift(c: &SiftConfig) -> ParamEcho {
        ParamEcho::Sift {
            scales_per_octave: c.scales_per_octave,
            octaves: c.octaves,
            base_sigma: c.base_sigma,
            contrast_threshold: c.contrast_threshold,
            edge_ratio: c.edge_ratio,
        }
    }
}

pub const KEYPOINT_HEADER: &str = "x,y,scale,score,detector";

/// Serializes keypoints as CSV: fixed header, one row per keypoint, LF line
/// endings, plain decimal formatting.
pub fn keypoints_to_csv(kps: &[KeyPoint]) -> String {
    let mut out = String::from(KEYPOINT_HEADER);
    out.push('\n');
    for kp in kps {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            kp.x,
            kp.y,
            kp.scale,
            kp.score,
            kp.detector.name()
        ));
    }
    out
}

pub fn write_keypoints_csv(path: &std::path::Path, kps: &[KeyPoint]) -> std::io::Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(keypoints_to_csv(kps).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use fkp_core::Detector;

    fn sample_report() -> DetectionReport {
        DetectionReport {
            detector: "sfa".into(),
            image_width: 256,
            image_height: 256,
            band_low: 0.9,
            band_high: 1.0,
            seed: 7,
            params: ParamEcho::sfa(&SfaParams::default()),
            keypoint_count: 140,
            millis: 12.5,
            precision: 1.0,
            recall: 1.0,
            spread: 3.25,
        }
    }

    #[test]
    fn report_round_trips_through_json() {
        let report = sample_report();
        let json = serde_json::to_string_pretty(&report).unwrap();
        let back: DetectionReport = serde_json::from_str(&json).unwrap();
        assert_eq!(report, back);
    }

    #[test]
    fn serialization_is_stable() {
        let a = serde_json::to_string(&sample_report()).unwrap();
        let b = serde_json::to_string(&sample_report()).unwrap();
        assert_eq!(a, b);
        let detector_at = a.find("\"detector\"").unwrap();
        let millis_at = a.find("\"millis\"").unwrap();
        assert!(detector_at < millis_at, "field order must follow the struct");
    }

    #[test]
    fn unknown_report_keys_are_rejected() {
        let mut value: serde_json::Value =
            serde_json::to_value(sample_report()).unwrap();
        value.as_object_mut().unwrap().insert("surprise".into(), 1.into());
        assert!(serde_json::from_value::<DetectionReport>(value).is_err());
    }

    #[test]
    fn keypoint_csv_has_header_and_rows() {
        let kps = vec![
            KeyPoint {
                x: 12.0,
                y: 34.0,
                scale: 1.0,
                score: 0.5,
                orientation: None,
                detector: Detector::Sfa,
            },
            KeyPoint {
                x: 1.25,
                y: 2.5,
                scale: 2.0,
                score: -3.5,
                orientation: Some(0.1),
                detector: Detector::Sift,
            },
        ];
        let csv = keypoints_to_csv(&kps);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x,y,scale,score,detector");
        assert_eq!(lines[1], "12,34,1,0.5,sfa");
        assert_eq!(lines[2], "1.25,2.5,2,-3.5,sift");
        assert_eq!(lines.len(), 3);
        assert!(csv.ends_with('\n'));
    }

    #[test]
    fn empty_keypoint_csv_is_just_the_header() {
        assert_eq!(keypoints_to_csv(&[]), "x,y,scale,score,detector\n");
    }
}
