//! File formats, dataset generation, the benchmark harness and the
//! `gauge-dehaze` command line on top of [`gauge_dehaze_core`].

#![warn(missing_debug_implementations, rust_2018_idioms)]

pub mod codec;
pub mod dataset;
mod error;
pub mod harness;
pub mod manifest;
pub mod report;

pub use gauge_dehaze_core as kernels;

pub use self::{
    error::{Error, Result},
    report::STATISTICS_NOTE,
};

/// Tool identifier recorded in manifests and reports.
pub const GENERATOR: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Runs `f` on a dedicated pool of `jobs` threads (`None`: one per core).
pub(crate) fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::Usage(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}
