//! Peak extraction, grid-convergence checks and the Fermat-spiral trace.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sieve::Window;
use crate::transform::Spectrum;

/// Fraction of the largest non-DC amplitude used as the default peak threshold.
pub const DEFAULT_THRESHOLD_FRACTION: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("threshold must be positive and finite, got {0}")]
    InvalidThreshold(f64),
    #[error("index t = {t} outside [{min}, {max}]")]
    IndexOutOfRange { t: usize, min: usize, max: usize },
    #[error("spiral scale must be positive and finite, got {0}")]
    InvalidScale(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub bin: usize,
    /// Cycles per sample, `bin / N`.
    pub frequency: f64,
    pub amplitude: f64,
    pub phase: f64,
}

/// Half-spectrum bins whose amplitude reaches a threshold, ascending by bin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakSet {
    entries: Vec<Peak>,
    threshold: f64,
    n_points: usize,
    source_window: Window,
}

impl PeakSet {
    pub fn entries(&self) -> &[Peak] {
        &self.entries
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn source_window(&self) -> Window {
        self.source_window
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn bins(&self) -> Vec<usize> {
        self.entries.iter().map(|p| p.bin).collect()
    }
}

/// Anything that carries an `N`-point uniform frequency grid.
pub trait UniformGrid {
    fn grid_len(&self) -> usize;
}

impl UniformGrid for Spectrum {
    fn grid_len(&self) -> usize {
        self.n_points()
    }
}

impl UniformGrid for PeakSet {
    fn grid_len(&self) -> usize {
        self.n_points
    }
}

/// Bins `1..=floor(N/2)` with amplitude `>= threshold`.
pub fn extract_peaks(spectrum: &Spectrum, threshold: f64) -> Result<PeakSet, SpectralError> {
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(SpectralError::InvalidThreshold(threshold));
    }
    let amplitudes = spectrum.amplitudes();
    let entries = (1..=spectrum.half_len())
        .filter(|&l| amplitudes[l] >= threshold)
        .map(|l| Peak {
            bin: l,
            frequency: spectrum.freq_grid()[l],
            amplitude: amplitudes[l],
            phase: spectrum.phases()[l],
        })
        .collect();
    Ok(PeakSet {
        entries,
        threshold,
        n_points: spectrum.n_points(),
        source_window: spectrum.source_window(),
    })
}

/// Default threshold for a spectrum: a quarter of the largest non-DC amplitude.
pub fn default_threshold(spectrum: &Spectrum) -> f64 {
    DEFAULT_THRESHOLD_FRACTION * spectrum.max_non_dc_amplitude()
}

/// `f_{t+1} / f_t` on the uniform grid, i.e. `(t+1)/t`.
///
/// Requires `1 <= t` and `t + 1 <= floor(N/2)`.
pub fn ratio_convergence<G: UniformGrid + ?Sized>(
    grid: &G,
    t: usize,
) -> Result<f64, SpectralError> {
    let half = grid.grid_len() / 2;
    if t < 1 || t + 1 > half {
        return Err(SpectralError::IndexOutOfRange {
            t,
            min: 1,
            max: half.saturating_sub(1),
        });
    }
    let n = grid.grid_len() as f64;
    let f = |l: usize| l as f64 / n;
    Ok(f(t + 1) / f(t))
}

/// `1 / f_t = N / t` in samples per cycle.
pub fn reciprocal_convergence(t: usize, n: usize) -> Result<f64, SpectralError> {
    if t < 1 || t > n {
        return Err(SpectralError::IndexOutOfRange { t, min: 1, max: n });
    }
    Ok(n as f64 / t as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpiralPoint {
    pub f: f64,
    pub x: f64,
    pub y: f64,
}

/// Points `(a·f·cos f, a·f·sin f)` of the spiral `r = a·f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpiralTrace {
    points: Vec<SpiralPoint>,
    scale: f64,
}

impl SpiralTrace {
    pub fn from_parameters<I>(params: I, scale: f64) -> Result<Self, SpectralError>
    where
        I: IntoIterator<Item = f64>,
    {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(SpectralError::InvalidScale(scale));
        }
        let points = params
            .into_iter()
            .map(|f| {
                let (s, c) = f.sin_cos();
                SpiralPoint {
                    f,
                    x: scale * f * c,
                    y: scale * f * s,
                }
            })
            .collect();
        Ok(SpiralTrace { points, scale })
    }

    pub fn points(&self) -> &[SpiralPoint] {
        &self.points
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Cumulative polyline length from the first point.
    pub fn arc_lengths(&self) -> Vec<f64> {
        let mut total = 0.0;
        let mut out = Vec::with_capacity(self.points.len());
        let mut prev: Option<&SpiralPoint> = None;
        for p in &self.points {
            if let Some(q) = prev {
                total += (p.x - q.x).hypot(p.y - q.y);
            }
            out.push(total);
            prev = Some(p);
        }
        out
    }
}

/// Spiral through the peak bins, using the bin index as the angle in radians.
pub fn spiral_trace(peaks: &PeakSet, scale: f64) -> Result<SpiralTrace, SpectralError> {
    SpiralTrace::from_parameters(peaks.entries.iter().map(|p| p.bin as f64), scale)
}

/// Spiral through every half-spectrum bin `0..=floor(N/2)`.
pub fn spiral_all_bins<G: UniformGrid + ?Sized>(
    grid: &G,
    scale: f64,
) -> Result<SpiralTrace, SpectralError> {
    SpiralTrace::from_parameters((0..=grid.grid_len() / 2).map(|l| l as f64), scale)
}
