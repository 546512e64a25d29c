//! Command-line surface. All flags are kebab-case; every detector
//! parameter is optional here so that the resolution order stays
//! flag > config file > built-in default.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use fkp_core::Detector;

use crate::fixture::FixtureKind;

#[derive(Debug, Parser)]
#[command(name = "fkp", version, about = "Keypoint detection toolkit: swarm search plus box-Hessian and scale-space baselines")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one detector over one image and report coverage metrics.
    Detect(DetectArgs),
    /// Sweep detectors over synthetic fixtures and seeds, appending CSV rows.
    Bench(BenchArgs),
    /// Generate a synthetic fixture image and its ground-truth mask.
    Fixture(FixtureArgs),
}

#[derive(Debug, Args, Default)]
pub struct DetectArgs {
    /// Input image (binary PGM or PPM).
    #[arg(long, conflicts_with = "fixture")]
    pub input: Option<PathBuf>,

    /// Generate a synthetic fixture instead of reading a file.
    #[arg(long)]
    pub fixture: Option<FixtureKind>,

    /// Square side of the generated fixture.
    #[arg(long, default_value_t = 256)]
    pub fixture_size: u32,

    /// Detector to run. May also come from the config file.
    #[arg(long)]
    pub detector: Option<Detector>,

    /// TOML config file supplying defaults for any omitted flag.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Random seed (used by the swarm detector, echoed for the others).
    #[arg(long)]
    pub seed: Option<u64>,

    /// Lower luminance bound of the target band.
    #[arg(long)]
    pub band_low: Option<f64>,

    /// Upper luminance bound of the target band.
    #[arg(long)]
    pub band_high: Option<f64>,

    #[command(flatten)]
    pub sfa: SfaFlags,

    #[command(flatten)]
    pub surf: SurfFlags,

    #[command(flatten)]
    pub sift: SiftFlags,

    /// Write the annotated image (PPM, keypoints crossed in red).
    #[arg(long)]
    pub out_image: Option<PathBuf>,

    /// Write the JSON report here as well as to stdout.
    #[arg(long)]
    pub out_report: Option<PathBuf>,

    /// Write the keypoint list (CSV: x,y,scale,score,detector).
    #[arg(long)]
    pub out_keypoints: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct SfaFlags {
    /// Swarm population size.
    #[arg(long)]
    pub fireflies: Option<usize>,

    /// Swarm evolution steps.
    #[arg(long)]
    pub generations: Option<usize>,

    /// Attractiveness at distance zero.
    #[arg(long)]
    pub beta_pop: Option<f64>,

    /// Attractiveness decay over squared distance.
    #[arg(long)]
    pub gamma: Option<f64>,

    /// Uniform jitter amplitude per move.
    #[arg(long)]
    pub mu: Option<f64>,

    /// Fraction of the swarm retained as the elite.
    #[arg(long)]
    pub best_ratio: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct SurfFlags {
    /// Box filter side lengths (odd multiples of 3, increasing).
    #[arg(long, value_delimiter = ',')]
    pub surf_sizes: Option<Vec<u32>>,

    /// Determinant threshold as a fraction of the stack maximum.
    #[arg(long)]
    pub surf_threshold_rel: Option<f64>,

    /// Absolute determinant threshold (overrides the relative one).
    #[arg(long)]
    pub surf_threshold_abs: Option<f64>,

    /// Also compute 64-dimensional descriptors.
    #[arg(long)]
    pub surf_descriptors: bool,
}

#[derive(Debug, Args, Default)]
pub struct SiftFlags {
    /// Gaussian levels per octave.
    #[arg(long)]
    pub sift_scales: Option<usize>,

    /// Octave count (derived from the image when omitted).
    #[arg(long)]
    pub sift_octaves: Option<usize>,

    /// Blur of the first pyramid level.
    #[arg(long)]
    pub sift_base_sigma: Option<f64>,

    /// Minimum refined response magnitude.
    #[arg(long)]
    pub sift_contrast: Option<f64>,

    /// Maximum principal-curvature ratio.
    #[arg(long)]
    pub sift_edge_ratio: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Fixtures to sweep (default: all five).
    #[arg(long, value_delimiter = ',')]
    pub fixtures: Option<Vec<FixtureKind>>,

    /// Detectors to sweep (default: all three).
    #[arg(long, value_delimiter = ',')]
    pub detectors: Option<Vec<Detector>>,

    /// Number of seeds per cell (seeds 0..N).
    #[arg(long, default_value_t = 5)]
    pub seeds: u64,

    /// Square side of the generated fixtures.
    #[arg(long, default_value_t = 256)]
    pub size: u32,

    /// TOML config file supplying detector parameters.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Lower luminance bound of the target band.
    #[arg(long)]
    pub band_low: Option<f64>,

    /// Upper luminance bound of the target band.
    #[arg(long)]
    pub band_high: Option<f64>,

    /// CSV file to append result rows to (header written when new).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FixtureArgs {
    /// Which fixture to generate.
    #[arg(long)]
    pub kind: FixtureKind,

    #[arg(long, default_value_t = 256)]
    pub width: u32,

    #[arg(long, default_value_t = 256)]
    pub height: u32,

    /// Foreground level; also the fill level of `constant` (default 128
    /// there, 255 elsewhere).
    #[arg(long)]
    pub fg: Option<u8>,

    /// Background level.
    #[arg(long, default_value_t = 0)]
    pub bg: u8,

    /// Disc radius.
    #[arg(long, default_value_t = 40.0)]
    pub radius: f64,

    /// Checkerboard cell side.
    #[arg(long, default_value_t = 32)]
    pub cell: u32,

    /// Blob standard deviation.
    #[arg(long, default_value_t = 2.0)]
    pub blob_sigma: f64,

    /// Band used to derive the ground-truth mask.
    #[arg(long, default_value_t = 0.9)]
    pub band_low: f64,

    #[arg(long, default_value_t = 1.0)]
    pub band_high: f64,

    /// Output image path (PGM).
    #[arg(long)]
    pub out: PathBuf,

    /// Also write the ground-truth mask (PGM, 255 = in band).
    #[arg(long)]
    pub out_mask: Option<PathBuf>,
}
