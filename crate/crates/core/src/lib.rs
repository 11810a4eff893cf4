//! Prime-indicator and von Mangoldt series, their discrete Fourier spectra,
//! spectral reconstruction, and prime-counting diagnostics.
//!
//! The pipeline is: [`sieve`] a window into a [`MangoldtSeries`], transform it
//! with [`transform::dft_fast`] (or the reference [`transform::dft_naive`]),
//! read peaks and the spiral trace off the [`Spectrum`] with [`spectral`],
//! and rebuild the series with [`reconstruct`].

pub mod cli;
pub mod reconstruct;
pub mod sieve;
pub mod spectral;
pub mod stats;
pub mod transform;

pub use reconstruct::{reconstruct_full, reconstruct_topk, Reconstruction};
pub use sieve::{
    build_series, count_primes, sieve_range, MangoldtSeries, SeriesMode, Sieve, Window,
};
pub use spectral::{extract_peaks, spiral_trace, PeakSet, SpiralTrace};
pub use stats::{interval_histogram, IntervalHistogram, PsiComparison};
pub use transform::{dft_fast, dft_naive, inverse_dft, Spectrum};
