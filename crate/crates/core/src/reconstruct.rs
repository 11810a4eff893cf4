//! Amplitude-phase resynthesis of a series from its spectrum, and prime
//! detection on the result.
//!
//! A real series of length `N` is rebuilt as
//!
//! ```text
//! s(i) = (1/N)·[X(0) + Σ_l w_l·A_l·cos(2π·l·i/N + φ_l)]
//! ```
//!
//! over half-spectrum bins `l = 1..=floor(N/2)`, with `w_l = 2` except for
//! the Nyquist bin of even `N` where `w_l = 1`. Using every bin reproduces the
//! series exactly; a top-k subset keeps the `k` largest amplitudes.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sieve::{SeriesMode, Window};
use crate::spectral::PeakSet;
use crate::transform::{inverse_dft, Spectrum};

/// Indicator series: midpoint between 0 and 1.
pub const INDICATOR_DETECTION_THRESHOLD: f64 = 0.5;
/// Log-weighted series: midpoint between 0 and the smallest weight `ln 2`.
pub const LOG_DETECTION_THRESHOLD: f64 = 0.5 * LN_2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconstructError {
    #[error("top-k requires 1 <= k <= {max}, got {k}")]
    KOutOfRange { k: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reconstruction {
    pub window: Window,
    pub values: Vec<f64>,
    pub detected_primes: Vec<u64>,
    /// Max absolute deviation from the original series.
    pub residual: f64,
    /// Number of non-DC half-spectrum bins summed.
    pub components_used: usize,
    /// `Σ (original − reconstructed)²`.
    pub residual_energy: f64,
    /// Time-domain energy of the bins left out, by Parseval.
    pub omitted_energy: f64,
}

pub fn detection_threshold(mode: SeriesMode) -> f64 {
    match mode {
        SeriesMode::Indicator => INDICATOR_DETECTION_THRESHOLD,
        SeriesMode::LogWeighted => LOG_DETECTION_THRESHOLD,
    }
}

/// Largest accepted `k` for a spectrum of `n` points: `ceil(n/2)`.
pub fn max_components(n: usize) -> usize {
    n.div_ceil(2)
}

/// Time-domain weight of half-spectrum bin `l`: 2, or 1 at Nyquist/DC.
fn bin_weight(l: usize, n: usize) -> f64 {
    if l == 0 || 2 * l == n {
        1.0
    } else {
        2.0
    }
}

/// Rebuild from DC plus the given half-spectrum bins.
fn resynthesize(spectrum: &Spectrum, bins: &[usize]) -> Vec<f64> {
    let n = spectrum.n_points();
    if n == 0 {
        return Vec::new();
    }
    let roots: Vec<Complex64> = (0..n)
        .map(|m| {
            let (s, c) = (2.0 * PI * m as f64 / n as f64).sin_cos();
            Complex64::new(c, s)
        })
        .collect();
    let amps = spectrum.amplitudes();
    let phases = spectrum.phases();
    let dc = amps[0] * phases[0].cos();
    // A·cos(θ + φ) = Re(A·e^{iφ}·e^{iθ})
    let terms: Vec<(usize, Complex64)> = bins
        .iter()
        .map(|&l| {
            let (s, c) = phases[l].sin_cos();
            (l, Complex64::new(c, s) * (amps[l] * bin_weight(l, n)))
        })
        .collect();
    let scale = 1.0 / n as f64;
    (0..n)
        .map(|i| {
            let mut acc = dc;
            for &(l, c) in &terms {
                let r = roots[(l * i) % n];
                acc += c.re * r.re - c.im * r.im;
            }
            acc * scale
        })
        .collect()
}

fn finish(spectrum: &Spectrum, values: Vec<f64>, bins: &[usize]) -> Reconstruction {
    let n = spectrum.n_points();
    let window = spectrum.source_window();
    let original = inverse_dft(spectrum);
    let (mut residual, mut residual_energy) = (0.0f64, 0.0f64);
    for (a, b) in original.iter().zip(&values) {
        let d = a - b;
        residual = residual.max(d.abs());
        residual_energy += d * d;
    }
    let mut used = vec![false; n / 2 + 1];
    for &l in bins {
        used[l] = true;
    }
    let amps = spectrum.amplitudes();
    let omitted_energy = (1..=n / 2)
        .filter(|&l| !used[l])
        .map(|l| bin_weight(l, n) * amps[l] * amps[l])
        .sum::<f64>()
        / n as f64;
    let threshold = detection_threshold(spectrum.mode());
    let detected_primes = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v >= threshold)
        .map(|(i, _)| window.start() + i as u64)
        .collect();
    Reconstruction {
        window,
        values,
        detected_primes,
        residual,
        components_used: bins.len(),
        residual_energy,
        omitted_energy,
    }
}

/// Resynthesis from every half-spectrum bin.
pub fn reconstruct_full(spectrum: &Spectrum) -> Reconstruction {
    let bins: Vec<usize> = (1..=spectrum.half_len()).collect();
    let values = resynthesize(spectrum, &bins);
    finish(spectrum, values, &bins)
}

/// Half-spectrum bins ordered by descending amplitude, ties by ascending bin.
pub fn ranked_bins(spectrum: &Spectrum) -> Vec<usize> {
    let amps = spectrum.amplitudes();
    let mut bins: Vec<usize> = (1..=spectrum.half_len()).collect();
    bins.sort_by(|&a, &b| amps[b].total_cmp(&amps[a]).then(a.cmp(&b)));
    bins
}

/// Resynthesis from DC plus the `k` largest-amplitude half-spectrum bins.
///
/// `k` may go up to `ceil(N/2)`; for odd `N` that exceeds the `floor(N/2)`
/// available bins by one and simply selects all of them.
pub fn reconstruct_topk(spectrum: &Spectrum, k: usize) -> Result<Reconstruction, ReconstructError> {
    let max = max_components(spectrum.n_points());
    if k < 1 || k > max {
        return Err(ReconstructError::KOutOfRange { k, max });
    }
    let mut bins = ranked_bins(spectrum);
    bins.truncate(k);
    bins.sort_unstable();
    let values = resynthesize(spectrum, &bins);
    Ok(finish(spectrum, values, &bins))
}

/// Literal single-frequency superposition `Σ_t A_t·sin(f_t + ω·i)` over the
/// given peaks, with `f_t` the bin index and amplitudes scaled by `2/N`.
///
/// Exposed for inspection only; it does not reproduce the source series.
pub fn reconstruct_single_frequency(
    spectrum: &Spectrum,
    peaks: &PeakSet,
    omega: f64,
) -> Reconstruction {
    let n = spectrum.n_points();
    let scale = 2.0 / n as f64;
    let values: Vec<f64> = (0..n)
        .map(|i| {
            peaks
                .entries()
                .iter()
                .map(|p| scale * p.amplitude * (p.bin as f64 + omega * i as f64).sin())
                .sum()
        })
        .collect();
    let bins: Vec<usize> = peaks.entries().iter().map(|p| p.bin).collect();
    finish(spectrum, values, &bins)
}
