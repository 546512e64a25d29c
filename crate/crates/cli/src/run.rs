//! Command execution: wiring parsed flags to the detectors and the disk.

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use fkp_core::pnm::{read_pnm, write_pnm};
use fkp_core::sfa;
use fkp_core::sift::detect_sift;
use fkp_core::surf::detect_surf;
use fkp_core::{Band, Error, FitnessField, Grid, Image, KeyPoint};

use crate::annotate::annotate;
use crate::args::{Cli, Command, DetectArgs, FixtureArgs};
use crate::bench;
use crate::config::{resolve, DetectorRun, FileConfig, RunSettings};
use crate::fixture::{band_mask, make_fixture, FixtureKind, FixtureSpec};
use crate::metrics;
use crate::report::{write_keypoints_csv, DetectionReport, ParamEcho};

/// Failures split by exit code: bad configuration (2) versus I/O and
/// execution trouble (1).
#[derive(Debug)]
pub enum CmdError {
    Config(String),
    Io(String),
}

impl CmdError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CmdError::Config(_) => 2,
            CmdError::Io(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CmdError::Config(m) | CmdError::Io(m) => m,
        }
    }
}

/// Library errors surfacing at run time: parameter-shaped ones are config
/// mistakes, the rest are execution failures.
pub fn from_core(e: Error) -> CmdError {
    match e {
        Error::InvalidParameter { .. }
        | Error::InvalidBand { .. }
        | Error::ImageTooSmall { .. }
        | Error::FilterOutOfBounds { .. } => CmdError::Config(e.to_string()),
        other => CmdError::Io(other.to_string()),
    }
}

pub fn dispatch(cli: Cli) -> ExitCode {
    let result = match cli.command {
        Command::Detect(args) => execute_detect(&args),
        Command::Bench(args) => bench::execute_bench(&args),
        Command::Fixture(args) => execute_fixture(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<FileConfig, CmdError> {
    match path {
        Some(p) => FileConfig::load(p).map_err(CmdError::Config),
        None => Ok(FileConfig::default()),
    }
}

fn read_image(path: &Path) -> Result<Image, CmdError> {
    let bytes =
        std::fs::read(path).map_err(|e| CmdError::Io(format!("{}: {e}", path.display())))?;
    read_pnm(&bytes).map_err(|e| CmdError::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CmdError> {
    std::fs::write(path, bytes).map_err(|e| CmdError::Io(format!("{}: {e}", path.display())))
}

/// Runs one detector over one image, returning the keypoints and the
/// wall-clock milliseconds spent inside the detector.
pub fn run_detector(
    img: &Image,
    run: &DetectorRun,
    band: Band,
) -> Result<(Vec<KeyPoint>, f64), CmdError> {
    let start = Instant::now();
    let kps = match run {
        DetectorRun::Sfa(params) => {
            let field = FitnessField::new(img, band);
            sfa::run(&field, params).map_err(from_core)?
        }
        DetectorRun::Surf(cfg) => detect_surf(img, cfg).map_err(from_core)?.keypoints,
        DetectorRun::Sift(cfg) => detect_sift(img, cfg).map_err(from_core)?,
    };
    let millis = (start.elapsed().as_secs_f64() * 1e3).max(1e-6);
    Ok((kps, millis))
}

/// Assembles the report from a finished run.
pub fn build_report(
    img: &Image,
    settings: &RunSettings,
    kps: &[KeyPoint],
    mask: &Grid<bool>,
    millis: f64,
) -> DetectionReport {
    let params = match &settings.run {
        DetectorRun::Sfa(p) => ParamEcho::sfa(p),
        DetectorRun::Surf(c) => ParamEcho::surf(c),
        DetectorRun::Sift(c) => ParamEcho::sift(c),
    };
    DetectionReport {
        detector: settings.run.detector().name().to_string(),
        image_width: img.width(),
        image_height: img.height(),
        band_low: settings.band.low(),
        band_high: settings.band.high(),
        seed: settings.seed,
        params,
        keypoint_count: kps.len(),
        millis,
        precision: metrics::precision(kps, mask),
        recall: metrics::recall(kps, mask),
        spread: metrics::spread(kps),
    }
}

fn execute_detect(args: &DetectArgs) -> Result<(), CmdError> {
    let file = load_config(args.config.as_deref())?;
    let settings = resolve(args, &file).map_err(CmdError::Config)?;

    let img = match (&args.input, args.fixture) {
        (Some(path), None) => read_image(path)?,
        (None, Some(kind)) => {
            let spec = FixtureSpec::new(kind).with_size(args.fixture_size, args.fixture_size);
            make_fixture(&spec, settings.band).map_err(CmdError::Config)?.0
        }
        (None, None) => {
            return Err(CmdError::Config(
                "no input: pass --input FILE or --fixture KIND".to_string(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap rejects --input with --fixture"),
    };

    let (kps, millis) = run_detector(&img, &settings.run, settings.band)?;
    let mask = band_mask(&img, settings.band);
    let report = build_report(&img, &settings, &kps, &mask, millis);

    if let Some(path) = &args.out_image {
        write_file(path, &write_pnm(&annotate(&img, &kps)))?;
    }
    if let Some(path) = &args.out_keypoints {
        write_keypoints_csv(path, &kps)
            .map_err(|e| CmdError::Io(format!("{}: {e}", path.display())))?;
    }
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| CmdError::Io(format!("report serialization: {e}")))?;
    if let Some(path) = &args.out_report {
        write_file(path, format!("{json}\n").as_bytes())?;
    }
    println!("{json}");
    Ok(())
}

fn execute_fixture(args: &FixtureArgs) -> Result<(), CmdError> {
    let mut spec = FixtureSpec::new(args.kind).with_size(args.width, args.height);
    if let Some(fg) = args.fg {
        spec.fg = fg;
    }
    spec.bg = args.bg;
    spec.radius = args.radius;
    spec.cell = args.cell;
    spec.blob_sigma = args.blob_sigma;
    let band = Band::new(args.band_low, args.band_high).map_err(|e| {
        CmdError::Config(format!("--band-low/--band-high: {e}"))
    })?;
    let (img, mask) = make_fixture(&spec, band).map_err(CmdError::Config)?;
    write_file(&args.out, &write_pnm(&img))?;
    if let Some(path) = &args.out_mask {
        let mask_img = Image::gray_from_fn(img.width(), img.height(), |x, y| {
            if mask.get(x, y) {
                255
            } else {
                0
            }
        });
        write_file(path, &write_pnm(&mask_img))?;
    }
    Ok(())
}

// Re-exported for integration tests that need the same fixture geometry the
// bench sweep uses.
pub fn bench_fixture(kind: FixtureKind, size: u32, band: Band) -> Result<(Image, Grid<bool>), CmdError> {
    let spec = FixtureSpec::new(kind).with_size(size, size);
    make_fixture(&spec, band).map_err(CmdError::Config)
}
