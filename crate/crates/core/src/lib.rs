//! Keypoint search on 2D images with a simplified firefly swarm, plus two
//! classical baseline detectors.
//!
//! The crate provides three detection pipelines over the same [`Image`] and
//! [`KeyPoint`] model:
//!
//! * [`sfa`] — a population of integer pixel positions walks toward brighter
//!   (or darker) luminance bands; the best-ranked survivors are reported as
//!   keypoints.
//! * [`surf`] — box-filter Hessian responses on an integral image, with
//!   3x3x3 non-maximum suppression and an optional 64-element descriptor.
//! * [`sift`] — a Gaussian scale-space / difference-of-Gaussians pyramid with
//!   sub-pixel Taylor refinement and edge rejection.
//!
//! All pipelines are deterministic: the swarm takes an explicit seed and uses
//! a portable stream cipher RNG, the baselines are seed-free.
//!
//! The crate is `no_std`-compatible (`alloc` required). The default `std`
//! feature uses the platform float intrinsics; disable it and enable `libm`
//! for freestanding targets.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("building without `std` requires the `libm` feature for float math");

extern crate alloc;

pub mod error;
pub mod fitness;
pub mod grid;
pub mod image;
pub mod integral;
pub mod keypoint;
pub mod pnm;
pub mod sfa;
pub mod sift;
pub mod surf;

pub use error::Error;
pub use fitness::{Band, FitnessField};
pub use grid::Grid;
pub use image::Image;
pub use integral::IntegralImage;
pub use keypoint::{Detector, KeyPoint};
