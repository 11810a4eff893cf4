//! Prime-counting diagnostics: `π(x)`, Chebyshev `θ`/`ψ`, the offset
//! logarithmic integral `Li(x) = ∫₂ˣ dt/ln t`, and per-interval prime counts.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sieve::{SeriesMode, Sieve, SieveError, Window};

/// Per-subinterval tolerance of the adaptive Simpson rule.
pub const SIMPSON_TOLERANCE: f64 = 1e-10;
const SIMPSON_MAX_DEPTH: u32 = 48;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("{what} requires {bound}, got {value}")]
    Domain {
        what: &'static str,
        bound: &'static str,
        value: f64,
    },
    #[error(transparent)]
    Sieve(#[from] SieveError),
}

fn domain(what: &'static str, bound: &'static str, value: f64) -> StatsError {
    StatsError::Domain { what, bound, value }
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, eps: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (fa, fb) = (f(a), f(b));
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&f, a, b, fa, fm, fb, whole, eps, SIMPSON_MAX_DEPTH)
}

/// `∫₂ˣ dt / ln t`.
///
/// The range is cut at powers of two and each piece integrated adaptively.
pub fn li(x: f64) -> Result<f64, StatsError> {
    if !x.is_finite() || x < 2.0 {
        return Err(domain("li", "finite x >= 2", x));
    }
    let mut total = 0.0;
    let mut a = 2.0;
    while a < x {
        let b = (2.0 * a).min(x);
        total += adaptive_simpson(|t: f64| 1.0 / t.ln(), a, b, SIMPSON_TOLERANCE);
        a = b;
    }
    Ok(total)
}

/// Chebyshev `ψ(x) = Σ_{n<=x} Λ(n)`.
pub fn psi(x: u64) -> Result<f64, StatsError> {
    psi_with(&Sieve::default(), x)
}

pub fn psi_with(sieve: &Sieve, x: u64) -> Result<f64, StatsError> {
    if x < 2 {
        return Err(domain("psi", "x >= 2", x as f64));
    }
    Ok(sieve
        .build_series(Window::new(2, x)?, SeriesMode::LogWeighted)?
        .sum())
}

/// Chebyshev `θ(x) = Σ_{p<=x} ln p`.
pub fn theta(x: u64) -> Result<f64, StatsError> {
    if x < 2 {
        return Err(domain("theta", "x >= 2", x as f64));
    }
    let mut total = 0.0;
    Sieve::default().for_each_block(Window::new(2, x)?, |lo, flags| {
        for (i, &f) in flags.iter().enumerate() {
            if f {
                total += ((lo + i as u64) as f64).ln();
            }
        }
    })?;
    Ok(total)
}

/// `π(x)·ln x / x`.
pub fn pnt_ratio(x: u64) -> Result<f64, StatsError> {
    if x < 3 {
        return Err(domain("pnt_ratio", "x >= 3", x as f64));
    }
    let pi = Sieve::default().count_primes(x)?;
    let xf = x as f64;
    Ok(pi as f64 * xf.ln() / xf)
}

/// `ψ`, `π`, `Li` at one point together with the error scale `√x·(ln x)²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiComparison {
    pub x: u64,
    pub psi: f64,
    pub theta: f64,
    pub li: f64,
    pub pi_x: u64,
    pub bound: f64,
}

impl PsiComparison {
    pub fn at(x: u64) -> Result<Self, StatsError> {
        if x < 3 {
            return Err(domain("PsiComparison", "x >= 3", x as f64));
        }
        let xf = x as f64;
        let psi = psi(x)?;
        let theta = theta(x)?;
        // Sanity: θ only drops the higher prime powers.
        debug_assert!(theta <= psi + 1e-9 * psi);
        Ok(PsiComparison {
            x,
            psi,
            theta,
            li: li(xf)?,
            pi_x: Sieve::default().count_primes(x)?,
            bound: xf.sqrt() * xf.ln().powi(2),
        })
    }

    /// `|π(x) − Li(x)| < √x·(ln x)²`.
    pub fn pi_within_bound(&self) -> bool {
        (self.pi_x as f64 - self.li).abs() < self.bound
    }

    pub fn pnt_ratio(&self) -> f64 {
        let xf = self.x as f64;
        self.pi_x as f64 * xf.ln() / xf
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bucket {
    pub start: u64,
    pub count: u64,
}

/// Prime counts over `[k·w, (k+1)·w)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalHistogram {
    pub bucket_width: u64,
    pub buckets: Vec<Bucket>,
}

impl IntervalHistogram {
    pub fn total(&self) -> u64 {
        self.buckets.iter().map(|b| b.count).sum()
    }

    pub fn counts(&self) -> Vec<u64> {
        self.buckets.iter().map(|b| b.count).collect()
    }

    /// Sliding mean over `span` consecutive buckets.
    pub fn moving_average(&self, span: usize) -> Vec<f64> {
        if span == 0 {
            return Vec::new();
        }
        self.buckets
            .windows(span)
            .map(|w| w.iter().map(|b| b.count as f64).sum::<f64>() / span as f64)
            .collect()
    }

    /// Means over consecutive non-overlapping groups of `span` buckets.
    pub fn block_averages(&self, span: usize) -> Vec<f64> {
        if span == 0 {
            return Vec::new();
        }
        self.buckets
            .chunks_exact(span)
            .map(|c| c.iter().map(|b| b.count as f64).sum::<f64>() / span as f64)
            .collect()
    }

    /// Trend summary of the `span`-bucket block means.
    pub fn trend(&self, span: usize) -> Trend {
        Trend::of(&self.block_averages(span))
    }
}

/// Trend-level description of a sequence of block means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trend {
    pub first: f64,
    pub last: f64,
    /// Largest mean after the first block.
    pub max_after_first: f64,
    /// Least-squares slope per block.
    pub slope: f64,
}

impl Trend {
    pub fn of(means: &[f64]) -> Self {
        let n = means.len();
        let first = means.first().copied().unwrap_or(0.0);
        let last = means.last().copied().unwrap_or(0.0);
        let max_after_first = means
            .iter()
            .skip(1)
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let slope = if n < 2 {
            0.0
        } else {
            let xm = (n - 1) as f64 / 2.0;
            let ym = means.iter().sum::<f64>() / n as f64;
            let (mut sxy, mut sxx) = (0.0, 0.0);
            for (i, &y) in means.iter().enumerate() {
                let dx = i as f64 - xm;
                sxy += dx * (y - ym);
                sxx += dx * dx;
            }
            sxy / sxx
        };
        Trend {
            first,
            last,
            max_after_first,
            slope,
        }
    }

    /// Never rises above the opening level, ends lower, and slopes downward.
    pub fn is_non_increasing(&self) -> bool {
        self.last <= self.first && self.max_after_first <= self.first && self.slope <= 0.0
    }
}

pub fn interval_histogram(x_max: u64, width: u64) -> Result<IntervalHistogram, StatsError> {
    if width < 1 {
        return Err(domain("interval_histogram", "width >= 1", width as f64));
    }
    if x_max < width {
        return Err(domain("interval_histogram", "x_max >= width", x_max as f64));
    }
    let n_buckets = x_max / width;
    let mut buckets: Vec<Bucket> = (0..n_buckets)
        .map(|k| Bucket {
            start: k * width,
            count: 0,
        })
        .collect();
    let last = n_buckets * width - 1;
    if last >= 2 {
        Sieve::default().for_each_block(Window::new(2, last)?, |lo, flags| {
            for (i, &f) in flags.iter().enumerate() {
                if f {
                    buckets[((lo + i as u64) / width) as usize].count += 1;
                }
            }
        })?;
    }
    Ok(IntervalHistogram {
        bucket_width: width,
        buckets,
    })
}

/// Partial sums `(Σ_{n<=m} n^{-a}, Σ_{p<=m} p^{-a})`.
///
/// Diagnostic only: the two series are compared side by side, nothing is
/// asserted about their relation.
pub fn dirichlet_partial_sums(m: u64, a: f64) -> Result<(f64, f64), StatsError> {
    if m < 2 {
        return Err(domain("dirichlet_partial_sums", "m >= 2", m as f64));
    }
    if a.is_nan() || a <= 1.0 {
        return Err(domain("dirichlet_partial_sums", "a > 1", a));
    }
    let full = (1..=m).map(|n| (n as f64).powf(-a)).sum();
    let series = Sieve::default().build_series(Window::new(2, m)?, SeriesMode::Indicator)?;
    let primes = series
        .points()
        .filter(|&(_, v)| v != 0.0)
        .map(|(n, _)| (n as f64).powf(-a))
        .sum();
    Ok((full, primes))
}
