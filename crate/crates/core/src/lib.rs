//! Image kernels for synthesizing, restoring and scoring hazy analog-gauge imagery.
//!
//! Everything in this crate is a pure function over in-memory buffers and only
//! needs `alloc`. File formats, dataset layout and the benchmark driver live in
//! the companion `gauge-dehaze` crate.
//!
//! # Modules
//!
//! - [`image`]: [`ImageBuffer`] and [`ScalarMap`] containers
//! - [`filter`]: min/max, box and guided filters (replicate borders)
//! - [`scene`]: procedural gauge renderer with paired depth
//! - [`scatter`]: forward scattering, exact inversion, haze/smoke transmission
//! - [`dcp`]: dark channel prior restoration
//! - [`bccr`]: boundary constraint + weighted L1 contextual regularization
//! - [`metrics`]: MSE, PSNR, global and windowed SSIM
//! - [`split`]: seeded group-level train/val/test assignment

#![no_std]
#![warn(
    clippy::cast_lossless,
    clippy::redundant_closure_for_method_calls,
    clippy::map_unwrap_or
)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bccr;
pub mod dcp;
mod error;
pub mod fft;
pub mod filter;
pub mod image;
pub mod metrics;
pub mod noise;
pub mod scatter;
pub mod scene;
pub mod split;

pub use self::{
    error::{Error, Result},
    image::{ImageBuffer, ScalarMap},
    scatter::AtmosphericLight,
};

/// Luminance weights (R, G, B) used for grayscale conversion everywhere.
pub const LUMA_WEIGHTS: [f32; 3] = [0.299, 0.587, 0.114];
