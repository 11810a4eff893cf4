//! Discrete Fourier transform of a sampled series.
//!
//! Samples are indexed `0..N` relative to the window start, so bin `l` holds
//! `X(l) = Σ_k s[k]·exp(-2πi·lk/N)` and sits at `ν = l/N` cycles per sample.
//! The physical offset of the window only contributes a linear phase, which
//! is left in place. Forward transforms are unnormalized; the inverse
//! carries `1/N`.

mod fft;

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::sieve::{MangoldtSeries, SeriesMode, Window};

pub use fft::FftPlan;

/// Largest length `dft_naive` accepts by default.
pub const DEFAULT_NAIVE_CAP: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("series of length {0} is too short; at least 2 samples are required")]
    TooShort(usize),
    #[error("naive DFT refused for N = {len} (cap {cap}); use the fast transform")]
    NaiveCapExceeded { len: usize, cap: usize },
    #[error("bin index {l} out of range for N = {n}")]
    BinOutOfRange { l: usize, n: usize },
    #[error("period multiplier z must be at least 1")]
    ZeroPeriod,
}

/// Complex DFT coefficients with the derived frequency grid, amplitudes and phases.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    coefficients: Vec<Complex64>,
    freq_grid: Vec<f64>,
    amplitudes: Vec<f64>,
    phases: Vec<f64>,
    source_window: Window,
    mode: SeriesMode,
}

impl Spectrum {
    /// Builds a spectrum from raw coefficients, deriving grid, amplitude and phase.
    pub fn from_coefficients(
        source_window: Window,
        mode: SeriesMode,
        coefficients: Vec<Complex64>,
    ) -> Self {
        let n = coefficients.len();
        let freq_grid = (0..n).map(|l| l as f64 / n as f64).collect();
        let amplitudes = coefficients.iter().map(|c| c.norm()).collect();
        let phases = coefficients.iter().map(|c| principal_phase(*c)).collect();
        Spectrum {
            coefficients,
            freq_grid,
            amplitudes,
            phases,
            source_window,
            mode,
        }
    }

    /// `N`, the number of bins (equal to the series length).
    pub fn n_points(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// `ν = l/N` in cycles per sample.
    pub fn freq_grid(&self) -> &[f64] {
        &self.freq_grid
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    /// Arguments in `(-π, π]`.
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn source_window(&self) -> Window {
        self.source_window
    }

    pub fn mode(&self) -> SeriesMode {
        self.mode
    }

    /// Largest bin of the positive half-spectrum, `floor(N/2)`.
    pub fn half_len(&self) -> usize {
        self.n_points() / 2
    }

    /// Largest amplitude over bins `1..N` (the DC bin is skipped). Zero when `N < 2`.
    pub fn max_non_dc_amplitude(&self) -> f64 {
        self.amplitudes.iter().skip(1).copied().fold(0.0, f64::max)
    }
}

/// `arg z` mapped into `(-π, π]`.
pub fn principal_phase(z: Complex64) -> f64 {
    let p = z.im.atan2(z.re);
    if p <= -PI {
        PI
    } else {
        p
    }
}

/// Direct `O(N²)` evaluation; the reference for [`dft_fast`].
#[derive(Debug, Clone, Copy)]
pub struct NaiveDft {
    cap: usize,
}

impl Default for NaiveDft {
    fn default() -> Self {
        NaiveDft {
            cap: DEFAULT_NAIVE_CAP,
        }
    }
}

impl NaiveDft {
    pub fn with_cap(cap: usize) -> Self {
        NaiveDft { cap }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn transform(&self, series: &MangoldtSeries) -> Result<Spectrum, TransformError> {
        let values = series.values();
        let n = values.len();
        if n < 2 {
            return Err(TransformError::TooShort(n));
        }
        if n > self.cap {
            return Err(TransformError::NaiveCapExceeded {
                len: n,
                cap: self.cap,
            });
        }
        // Table of exact roots; l·k is reduced mod N before lookup.
        let roots: Vec<Complex64> = (0..n).map(|k| fft::unit_root(k as u64, n)).collect();
        let coefficients = (0..n)
            .map(|l| {
                let mut acc = Complex64::new(0.0, 0.0);
                let mut idx = 0usize;
                for &v in values {
                    if v != 0.0 {
                        acc += roots[idx] * v;
                    }
                    idx += l;
                    if idx >= n {
                        idx -= n;
                    }
                }
                acc
            })
            .collect();
        Ok(Spectrum::from_coefficients(
            series.window(),
            series.mode(),
            coefficients,
        ))
    }
}

/// Naive DFT with the default length cap.
pub fn dft_naive(series: &MangoldtSeries) -> Result<Spectrum, TransformError> {
    NaiveDft::default().transform(series)
}

/// `O(N log N)` DFT for any `N >= 2`.
pub fn dft_fast(series: &MangoldtSeries) -> Result<Spectrum, TransformError> {
    let n = series.len();
    if n < 2 {
        return Err(TransformError::TooShort(n));
    }
    let mut buf: Vec<Complex64> = series
        .values()
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    FftPlan::new(n).forward(&mut buf);
    // DC bin of a real series is its (real) sum.
    buf[0] = Complex64::new(series.sum(), 0.0);
    Ok(Spectrum::from_coefficients(
        series.window(),
        series.mode(),
        buf,
    ))
}

/// Real part of the normalized inverse DFT.
pub fn inverse_dft(spectrum: &Spectrum) -> Vec<f64> {
    inverse_dft_with_residue(spectrum).0
}

/// Inverse DFT together with the largest discarded imaginary part.
pub fn inverse_dft_with_residue(spectrum: &Spectrum) -> (Vec<f64>, f64) {
    let n = spectrum.n_points();
    if n == 0 {
        return (Vec::new(), 0.0);
    }
    let mut buf = spectrum.coefficients().to_vec();
    FftPlan::new(n).inverse_unscaled(&mut buf);
    let scale = 1.0 / n as f64;
    let residue = buf.iter().map(|c| (c.im * scale).abs()).fold(0.0, f64::max);
    (buf.iter().map(|c| c.re * scale).collect(), residue)
}

/// Evaluates the defining sum at an arbitrary (unreduced) bin index.
///
/// The angle `2π·k·bin/N` is formed from the exact integer product `k·bin`,
/// with no reduction modulo `N`.
pub fn evaluate_bin(values: &[f64], bin: u64) -> Complex64 {
    let n = values.len() as f64;
    values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0.0)
        .map(|(k, &v)| {
            let theta = -2.0 * PI * ((k as u64 * bin) as f64 / n);
            let (s, c) = theta.sin_cos();
            Complex64::new(c, s) * v
        })
        .sum()
}

/// `|X(l + zN) − X(l)|` with both bins evaluated from the raw sum.
pub fn check_periodicity(series: &MangoldtSeries, z: u64, l: usize) -> Result<f64, TransformError> {
    let n = series.len();
    if l >= n {
        return Err(TransformError::BinOutOfRange { l, n });
    }
    if z == 0 {
        return Err(TransformError::ZeroPeriod);
    }
    let values = series.values();
    let base = evaluate_bin(values, l as u64);
    let shifted = evaluate_bin(values, l as u64 + z * n as u64);
    Ok((shifted - base).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::{build_series, SeriesMode, Window};

    fn series(values: &[f64]) -> MangoldtSeries {
        MangoldtSeries::from_values(2, SeriesMode::Indicator, values.to_vec()).unwrap()
    }

    #[test]
    fn dc_bin_is_sum() {
        let s = series(&[1.0, 1.0, 0.0, 1.0]);
        let spec = dft_naive(&s).unwrap();
        assert_eq!(spec.coefficients()[0], Complex64::new(3.0, 0.0));
        assert_eq!(spec.n_points(), 4);
        assert_eq!(spec.freq_grid(), &[0.0, 0.25, 0.5, 0.75]);
    }

    #[test]
    fn zero_input() {
        let spec = dft_naive(&series(&[0.0, 0.0, 0.0])).unwrap();
        assert!(spec.coefficients().iter().all(|c| c.norm() == 0.0));
        let fast = dft_fast(&series(&[0.0, 0.0, 0.0])).unwrap();
        assert!(fast.amplitudes().iter().all(|&a| a == 0.0));
    }

    #[test]
    fn mirror_amplitudes() {
        let s = build_series(Window::new(2, 10).unwrap(), SeriesMode::Indicator).unwrap();
        let spec = dft_naive(&s).unwrap();
        let a = spec.amplitudes();
        for l in 1..=8 {
            assert!((a[l] - a[9 - l]).abs() < 1e-12);
        }
    }

    #[test]
    fn impulse_is_flat() {
        let mut v = vec![0.0; 37];
        v[0] = 1.0;
        let spec = dft_fast(&series(&v)).unwrap();
        assert!(spec.amplitudes().iter().all(|a| (a - 1.0).abs() < 1e-12));
    }

    #[test]
    fn errors() {
        assert_eq!(dft_naive(&series(&[1.0])), Err(TransformError::TooShort(1)));
        assert_eq!(dft_fast(&series(&[1.0])), Err(TransformError::TooShort(1)));
        let s = series(&[1.0; 10]);
        assert_eq!(
            NaiveDft::with_cap(8).transform(&s),
            Err(TransformError::NaiveCapExceeded { len: 10, cap: 8 })
        );
        assert_eq!(
            check_periodicity(&s, 1, 10),
            Err(TransformError::BinOutOfRange { l: 10, n: 10 })
        );
        assert_eq!(check_periodicity(&s, 0, 1), Err(TransformError::ZeroPeriod));
    }

    #[test]
    fn inversion_small() {
        let s = series(&[1.0, 1.0, 0.0, 1.0]);
        let back = inverse_dft(&dft_naive(&s).unwrap());
        for (a, b) in back.iter().zip(s.values()) {
            assert!((a - b).abs() < 1e-9);
        }
        let zero =
            Spectrum::from_coefficients(s.window(), s.mode(), vec![Complex64::new(0.0, 0.0); 5]);
        assert!(inverse_dft(&zero).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn periodicity_examples() {
        let s = series(&[1.0, 1.0, 0.0, 1.0]);
        assert!(check_periodicity(&s, 1, 3).unwrap() < 1e-9);
        assert!(check_periodicity(&s, 5, 0).unwrap() < 1e-9);
        let s = build_series(Window::new(2, 101).unwrap(), SeriesMode::Indicator).unwrap();
        assert!(check_periodicity(&s, 2, 50).unwrap() < 1e-9);
    }

    #[test]
    fn phases_in_principal_range() {
        assert_eq!(principal_phase(Complex64::new(-1.0, -0.0)), PI);
        assert_eq!(principal_phase(Complex64::new(-1.0, 0.0)), PI);
        assert_eq!(principal_phase(Complex64::new(0.0, 0.0)), 0.0);
        let s = build_series(Window::new(2, 300).unwrap(), SeriesMode::Indicator).unwrap();
        let spec = dft_fast(&s).unwrap();
        assert!(spec.phases().iter().all(|&p| p > -PI && p <= PI));
    }
}
