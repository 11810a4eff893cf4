//! Segmented sieve of Eratosthenes over arbitrary integer windows, and the
//! prime-indicator / von Mangoldt series built on top of it.
//!
//! A window `[start, end]` is processed in fixed-size blocks. Each block is
//! crossed off with the base primes `p <= isqrt(end)`, so memory stays
//! proportional to one block plus `π(√end)` base primes no matter how far the
//! window sits from the origin.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default number of integers per sieve block.
pub const DEFAULT_BLOCK_SIZE: usize = 1 << 16;

/// Default upper bound accepted for `Window::end`.
pub const DEFAULT_MAX_END: u64 = i64::MAX as u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SieveError {
    #[error("invalid window [{start}, {end}]: need 2 <= start <= end")]
    InvalidWindow { start: u64, end: u64 },
    #[error("window end {end} exceeds the configured maximum {max}")]
    Capacity { end: u64, max: u64 },
    #[error("block size must be positive")]
    ZeroBlockSize,
}

/// Inclusive integer range `[start, end]` with `start >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    start: u64,
    end: u64,
}

impl Window {
    pub fn new(start: u64, end: u64) -> Result<Self, SieveError> {
        if start < 2 || end < start {
            return Err(SieveError::InvalidWindow { start, end });
        }
        Ok(Window { start, end })
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn end(&self) -> u64 {
        self.end
    }

    /// Number of integers in the window (the series length `L`).
    pub fn len(&self) -> u64 {
        self.end - self.start + 1
    }

    /// Always false; a valid window holds at least one integer.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, n: u64) -> bool {
        self.start <= n && n <= self.end
    }

    /// Iterator over the integers of the window.
    pub fn iter(&self) -> std::ops::RangeInclusive<u64> {
        self.start..=self.end
    }
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.start, self.end)
    }
}

/// Weighting applied at prime (power) positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesMode {
    /// `L(n)`: 1 at primes, 0 elsewhere.
    Indicator,
    /// `Λ(n)`: `ln p` at prime powers `p^k`, 0 elsewhere.
    LogWeighted,
}

impl SeriesMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            SeriesMode::Indicator => "indicator",
            SeriesMode::LogWeighted => "log",
        }
    }
}

/// A real series sampled at every integer of a window (unit sampling period).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MangoldtSeries {
    window: Window,
    mode: SeriesMode,
    values: Vec<f64>,
}

impl MangoldtSeries {
    /// Wraps raw values as a series over a window starting at `start`.
    ///
    /// Used for synthetic inputs (impulses, random 0/1 sequences) and for
    /// re-ingesting data; no primality invariant is checked.
    pub fn from_values(start: u64, mode: SeriesMode, values: Vec<f64>) -> Result<Self, SieveError> {
        let len = values.len() as u64;
        if len == 0 {
            return Err(SieveError::InvalidWindow {
                start,
                end: start.saturating_sub(1),
            });
        }
        let window = Window::new(start, start + len - 1)?;
        Ok(MangoldtSeries {
            window,
            mode,
            values,
        })
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn mode(&self) -> SeriesMode {
        self.mode
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sampling period in integer steps. Always 1.
    pub fn delta(&self) -> u64 {
        1
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// `(n, value)` pairs.
    pub fn points(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.window.iter().zip(self.values.iter().copied())
    }
}

/// Sieve configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sieve {
    block_size: usize,
    max_end: u64,
}

impl Default for Sieve {
    fn default() -> Self {
        Sieve {
            block_size: DEFAULT_BLOCK_SIZE,
            max_end: DEFAULT_MAX_END,
        }
    }
}

impl Sieve {
    pub fn new(block_size: usize, max_end: u64) -> Result<Self, SieveError> {
        if block_size == 0 {
            return Err(SieveError::ZeroBlockSize);
        }
        Ok(Sieve {
            block_size,
            max_end,
        })
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn max_end(&self) -> u64 {
        self.max_end
    }

    fn check(&self, window: Window) -> Result<(), SieveError> {
        if window.end > self.max_end {
            return Err(SieveError::Capacity {
                end: window.end,
                max: self.max_end,
            });
        }
        Ok(())
    }

    /// Calls `visit(block_start, is_prime)` for consecutive blocks covering
    /// the window, in ascending order. `is_prime[i]` refers to `block_start + i`.
    pub fn for_each_block<F>(&self, window: Window, mut visit: F) -> Result<(), SieveError>
    where
        F: FnMut(u64, &[bool]),
    {
        self.check(window)?;
        let base = base_primes(window.end.isqrt());
        let mut flags = vec![true; self.block_size];
        let mut lo = window.start;
        loop {
            let span = (window.end - lo).min(self.block_size as u64 - 1);
            let hi = lo + span;
            let block = &mut flags[..=span as usize];
            block.fill(true);
            for &p in &base {
                let p = p as u64;
                let sq = p * p;
                if sq > hi {
                    break;
                }
                let mut m = if sq >= lo { sq } else { lo.div_ceil(p) * p };
                while m <= hi {
                    block[(m - lo) as usize] = false;
                    m += p;
                }
            }
            visit(lo, block);
            if hi == window.end {
                break;
            }
            lo = hi + 1;
        }
        Ok(())
    }

    /// Primes in the window, ascending.
    pub fn sieve_range(&self, window: Window) -> Result<Vec<u64>, SieveError> {
        let mut primes = Vec::new();
        self.for_each_block(window, |lo, flags| {
            primes.extend(
                flags
                    .iter()
                    .enumerate()
                    .filter(|(_, &f)| f)
                    .map(|(i, _)| lo + i as u64),
            );
        })?;
        Ok(primes)
    }

    /// Number of primes in the window.
    pub fn count_in(&self, window: Window) -> Result<u64, SieveError> {
        let mut count = 0u64;
        self.for_each_block(window, |_, flags| {
            count += flags.iter().filter(|&&f| f).count() as u64;
        })?;
        Ok(count)
    }

    /// `π(x)`; zero for `x < 2`.
    pub fn count_primes(&self, x: u64) -> Result<u64, SieveError> {
        if x < 2 {
            return Ok(0);
        }
        self.count_in(Window::new(2, x)?)
    }

    pub fn build_series(
        &self,
        window: Window,
        mode: SeriesMode,
    ) -> Result<MangoldtSeries, SieveError> {
        self.check(window)?;
        let len = window.len() as usize;
        let mut values = vec![0.0; len];
        match mode {
            SeriesMode::Indicator => {
                self.for_each_block(window, |lo, flags| {
                    let off = (lo - window.start) as usize;
                    for (v, &f) in values[off..off + flags.len()].iter_mut().zip(flags) {
                        if f {
                            *v = 1.0;
                        }
                    }
                })?;
            }
            SeriesMode::LogWeighted => {
                self.for_each_block(window, |lo, flags| {
                    let off = (lo - window.start) as usize;
                    for (i, &f) in flags.iter().enumerate() {
                        if f {
                            values[off + i] = ((lo + i as u64) as f64).ln();
                        }
                    }
                })?;
                // Higher powers p^k (k >= 2) all have p <= isqrt(end).
                for p in base_primes(window.end.isqrt()) {
                    let p = p as u64;
                    let weight = (p as f64).ln();
                    let mut power = p * p;
                    while power <= window.end {
                        if power >= window.start {
                            values[(power - window.start) as usize] = weight;
                        }
                        match power.checked_mul(p) {
                            Some(next) => power = next,
                            None => break,
                        }
                    }
                }
            }
        }
        Ok(MangoldtSeries {
            window,
            mode,
            values,
        })
    }
}

/// Primes `<= limit` by a plain sieve of Eratosthenes. Used for base primes.
pub(crate) fn base_primes(limit: u64) -> Vec<u32> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for n in 2..=limit {
        if composite[n] {
            continue;
        }
        primes.push(n as u32);
        let mut m = n * n;
        while m <= limit {
            composite[m] = true;
            m += n;
        }
    }
    primes
}

/// Primes in `window` with the default sieve configuration.
pub fn sieve_range(window: Window) -> Result<Vec<u64>, SieveError> {
    Sieve::default().sieve_range(window)
}

/// `L(n)` or `Λ(n)` over `window` with the default sieve configuration.
pub fn build_series(window: Window, mode: SeriesMode) -> Result<MangoldtSeries, SieveError> {
    Sieve::default().build_series(window, mode)
}

/// `π(x)` with the default sieve configuration.
pub fn count_primes(x: u64) -> Result<u64, SieveError> {
    Sieve::default().count_primes(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    fn w(a: u64, b: u64) -> Window {
        Window::new(a, b).unwrap()
    }

    #[test]
    fn small_windows() {
        assert_eq!(sieve_range(w(2, 10)).unwrap(), vec![2, 3, 5, 7]);
        assert_eq!(sieve_range(w(2, 2)).unwrap(), vec![2]);
        let oracle: Vec<u64> = (2..=100).filter(|&n| trial_division(n)).collect();
        assert_eq!(oracle.len(), 25);
        assert_eq!(sieve_range(w(2, 100)).unwrap(), oracle);
    }

    #[test]
    fn invalid_windows() {
        assert!(matches!(
            Window::new(1, 10),
            Err(SieveError::InvalidWindow { .. })
        ));
        assert!(matches!(
            Window::new(0, 0),
            Err(SieveError::InvalidWindow { .. })
        ));
        assert!(matches!(
            Window::new(10, 9),
            Err(SieveError::InvalidWindow { .. })
        ));
        assert_eq!(w(5, 5).len(), 1);
    }

    #[test]
    fn capacity_error() {
        let sieve = Sieve::new(1024, 1000).unwrap();
        assert_eq!(
            sieve.sieve_range(w(900, 1001)),
            Err(SieveError::Capacity {
                end: 1001,
                max: 1000
            })
        );
        assert!(sieve.sieve_range(w(900, 1000)).is_ok());
        assert_eq!(Sieve::new(0, 10), Err(SieveError::ZeroBlockSize));
    }

    #[test]
    fn tiny_blocks_match_default() {
        let small = Sieve::new(7, DEFAULT_MAX_END).unwrap();
        let win = w(2, 5000);
        assert_eq!(small.sieve_range(win).unwrap(), sieve_range(win).unwrap());
        let off = w(1_000_003, 1_001_000);
        assert_eq!(small.sieve_range(off).unwrap(), sieve_range(off).unwrap());
    }

    #[test]
    fn indicator_series() {
        let s = build_series(w(2, 10), SeriesMode::Indicator).unwrap();
        assert_eq!(s.values(), &[1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        assert_eq!(s.delta(), 1);
        let s = build_series(w(8, 8), SeriesMode::Indicator).unwrap();
        assert_eq!(s.values(), &[0.0]);
    }

    #[test]
    fn log_weighted_series() {
        let s = build_series(w(8, 9), SeriesMode::LogWeighted).unwrap();
        assert_eq!(s.values(), &[2f64.ln(), 3f64.ln()]);
        let s = build_series(w(2, 16), SeriesMode::LogWeighted).unwrap();
        let expected: Vec<f64> = (2..=16u64)
            .map(|n| match n {
                2 | 4 | 8 | 16 => 2f64.ln(),
                3 | 9 => 3f64.ln(),
                5 | 7 | 11 | 13 => (n as f64).ln(),
                _ => 0.0,
            })
            .collect();
        assert_eq!(s.values(), expected.as_slice());
    }

    #[test]
    fn counts() {
        assert_eq!(count_primes(10).unwrap(), 4);
        assert_eq!(count_primes(2).unwrap(), 1);
        assert_eq!(count_primes(1000).unwrap(), 168);
        assert_eq!(count_primes(1).unwrap(), 0);
    }

    #[test]
    fn large_offset_window() {
        let win = w(10_200_000, 10_201_000);
        let primes = sieve_range(win).unwrap();
        assert!(!primes.is_empty());
        assert!(primes.iter().all(|&p| trial_division(p)));
        let oracle = win.iter().filter(|&n| trial_division(n)).count();
        assert_eq!(primes.len(), oracle);
    }

    #[test]
    fn from_values_window() {
        let s = MangoldtSeries::from_values(2, SeriesMode::Indicator, vec![1.0, 0.0]).unwrap();
        assert_eq!(s.window(), w(2, 3));
        assert!(MangoldtSeries::from_values(2, SeriesMode::Indicator, vec![]).is_err());
        assert!(MangoldtSeries::from_values(0, SeriesMode::Indicator, vec![1.0]).is_err());
    }
}
