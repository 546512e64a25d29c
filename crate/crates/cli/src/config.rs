//! Config-file schema and flag resolution.
//!
//! Every setting can come from three places; the first hit wins:
//! command-line flag, then config-file key, then built-in default. Unknown
//! config keys are rejected so typos surface instead of silently falling
//! back to defaults.

use std::path::Path;

use fkp_core::surf::SurfConfig;
use fkp_core::sfa::SfaParams;
use fkp_core::sift::SiftConfig;
use fkp_core::{Band, Detector};
use serde::Deserialize;

use crate::args::{DetectArgs, SfaFlags, SiftFlags, SurfFlags};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default, deserialize_with = "detector_name")]
    pub detector: Option<Detector>,
    pub seed: Option<u64>,
    pub band_low: Option<f64>,
    pub band_high: Option<f64>,
    #[serde(default)]
    pub sfa: SfaSection,
    #[serde(default)]
    pub surf: SurfSection,
    #[serde(default)]
    pub sift: SiftSection,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SfaSection {
    pub fireflies: Option<usize>,
    pub generations: Option<usize>,
    pub beta_pop: Option<f64>,
    pub gamma: Option<f64>,
    pub mu: Option<f64>,
    pub best_ratio: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SurfSection {
    pub sizes: Option<Vec<u32>>,
    pub threshold_rel: Option<f64>,
    pub threshold_abs: Option<f64>,
    pub descriptors: Option<bool>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SiftSection {
    pub scales_per_octave: Option<usize>,
    pub octaves: Option<usize>,
    pub base_sigma: Option<f64>,
    pub contrast_threshold: Option<f64>,
    pub edge_ratio: Option<f64>,
}

fn detector_name<'de, D>(de: D) -> Result<Option<Detector>, D::Error>
where
    D: serde::Deserializer<'de>,
{
    let name: Option<String> = Option::deserialize(de)?;
    name.map(|n| n.parse().map_err(serde::de::Error::custom)).transpose()
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<FileConfig, String> {
        toml::from_str(text).map_err(|e| format!("config file: {e}"))
    }

    pub fn load(path: &Path) -> Result<FileConfig, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("config file {}: {e}", path.display()))?;
        FileConfig::parse(&text)
    }
}

/// Fully resolved detector choice with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum DetectorRun {
    Sfa(SfaParams),
    Surf(SurfConfig),
    Sift(SiftConfig),
}

impl DetectorRun {
    pub fn detector(&self) -> Detector {
        match self {
            DetectorRun::Sfa(_) => Detector::Sfa,
            DetectorRun::Surf(_) => Detector::Surf,
            DetectorRun::Sift(_) => Detector::Sift,
        }
    }
}

/// Everything a detect run needs, after merging the three layers.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub run: DetectorRun,
    pub band: Band,
    pub seed: u64,
}

pub fn resolve_band(
    cli_low: Option<f64>,
    cli_high: Option<f64>,
    file: &FileConfig,
) -> Result<Band, String> {
    let low = cli_low.or(file.band_low).unwrap_or(0.9);
    let high = cli_high.or(file.band_high).unwrap_or(1.0);
    Band::new(low, high)
        .map_err(|_| format!("--band-low {low} / --band-high {high} is not a valid band in [0, 1]"))
}

pub fn resolve_sfa(flags: &SfaFlags, file: &FileConfig, seed: u64) -> Result<SfaParams, String> {
    let d = SfaParams::default();
    let params = SfaParams {
        fireflies: flags.fireflies.or(file.sfa.fireflies).unwrap_or(d.fireflies),
        generations: flags.generations.or(file.sfa.generations).unwrap_or(d.generations),
        beta_pop: flags.beta_pop.or(file.sfa.beta_pop).unwrap_or(d.beta_pop),
        gamma: flags.gamma.or(file.sfa.gamma).unwrap_or(d.gamma),
        mu: flags.mu.or(file.sfa.mu).unwrap_or(d.mu),
        best_ratio: flags.best_ratio.or(file.sfa.best_ratio).unwrap_or(d.best_ratio),
        seed,
        ..d
    };
    params.validate().map_err(|e| e.to_string())?;
    Ok(params)
}

pub fn resolve_surf(flags: &SurfFlags, file: &FileConfig) -> Result<SurfConfig, String> {
    let d = SurfConfig::default();
    let cfg = SurfConfig {
        filter_sizes: flags
            .surf_sizes
            .clone()
            .or_else(|| file.surf.sizes.clone())
            .unwrap_or(d.filter_sizes),
        threshold_rel: flags
            .surf_threshold_rel
            .or(file.surf.threshold_rel)
            .unwrap_or(d.threshold_rel),
        threshold_abs: flags.surf_threshold_abs.or(file.surf.threshold_abs),
        descriptors: flags.surf_descriptors || file.surf.descriptors.unwrap_or(d.descriptors),
        ..d
    };
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

pub fn resolve_sift(flags: &SiftFlags, file: &FileConfig) -> Result<SiftConfig, String> {
    let d = SiftConfig::default();
    let cfg = SiftConfig {
        scales_per_octave: flags
            .sift_scales
            .or(file.sift.scales_per_octave)
            .unwrap_or(d.scales_per_octave),
        octaves: flags.sift_octaves.or(file.sift.octaves),
        base_sigma: flags.sift_base_sigma.or(file.sift.base_sigma).unwrap_or(d.base_sigma),
        contrast_threshold: flags
            .sift_contrast
            .or(file.sift.contrast_threshold)
            .unwrap_or(d.contrast_threshold),
        edge_ratio: flags.sift_edge_ratio.or(file.sift.edge_ratio).unwrap_or(d.edge_ratio),
    };
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

/// Merges flags and config file into the final run plan.
pub fn resolve(args: &DetectArgs, file: &FileConfig) -> Result<RunSettings, String> {
    let detector = args
        .detector
        .or(file.detector)
        .ok_or("no detector selected: pass --detector sfa|surf|sift")?;
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let band = resolve_band(args.band_low, args.band_high, file)?;
    let run = match detector {
        Detector::Sfa => DetectorRun::Sfa(resolve_sfa(&args.sfa, file, seed)?),
        Detector::Surf => DetectorRun::Surf(resolve_surf(&args.surf, file)?),
        Detector::Sift => DetectorRun::Sift(resolve_sift(&args.sift, file)?),
    };
    Ok(RunSettings { run, band, seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args() -> DetectArgs {
        DetectArgs { detector: Some(Detector::Sfa), ..DetectArgs::default() }
    }

    #[test]
    fn defaults_match_the_library() {
        let settings = resolve(&args(), &FileConfig::default()).unwrap();
        assert_eq!(settings.band, Band::new(0.9, 1.0).unwrap());
        assert_eq!(settings.seed, 0);
        match settings.run {
            DetectorRun::Sfa(p) => assert_eq!(p, SfaParams::default()),
            other => panic!("expected sfa, got {other:?}"),
        }
    }

    #[test]
    fn flag_beats_file_beats_default() {
        let file = FileConfig::parse("[sfa]\nfireflies = 100\ngenerations = 7\n").unwrap();
        let mut a = args();
        a.sfa.fireflies = Some(50);
        let settings = resolve(&a, &file).unwrap();
        match settings.run {
            DetectorRun::Sfa(p) => {
                assert_eq!(p.fireflies, 50);
                assert_eq!(p.generations, 7);
                assert_eq!(p.beta_pop, SfaParams::default().beta_pop);
            }
            other => panic!("expected sfa, got {other:?}"),
        }
    }

    #[test]
    fn detector_can_come_from_the_file() {
        let file = FileConfig::parse("detector = \"sift\"\n").unwrap();
        let a = DetectArgs::default();
        let settings = resolve(&a, &file).unwrap();
        assert_eq!(settings.run.detector(), Detector::Sift);
    }

    #[test]
    fn missing_detector_names_the_flag() {
        let err = resolve(&DetectArgs::default(), &FileConfig::default()).unwrap_err();
        assert!(err.contains("--detector"), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected_by_name() {
        let err = FileConfig::parse("fireflies = 10\n").unwrap_err();
        assert!(err.contains("fireflies"), "{err}");
        let err = FileConfig::parse("[sfa]\nfirefly-count = 10\n").unwrap_err();
        assert!(err.contains("firefly-count"), "{err}");
    }

    #[test]
    fn kebab_case_keys_parse() {
        let file = FileConfig::parse(
            "band-low = 0.5\nband-high = 0.75\n[sfa]\nbest-ratio = 0.5\nbeta-pop = 0.1\n[sift]\nscales-per-octave = 4\n",
        )
        .unwrap();
        assert_eq!(file.band_low, Some(0.5));
        assert_eq!(file.sfa.best_ratio, Some(0.5));
        assert_eq!(file.sift.scales_per_octave, Some(4));
    }

    #[test]
    fn out_of_range_ratio_is_rejected() {
        let mut a = args();
        a.sfa.best_ratio = Some(1.5);
        assert!(resolve(&a, &FileConfig::default()).is_err());
    }

    #[test]
    fn invalid_band_is_rejected() {
        let mut a = args();
        a.band_low = Some(0.8);
        a.band_high = Some(0.2);
        assert!(resolve(&a, &FileConfig::default()).is_err());
    }
}
