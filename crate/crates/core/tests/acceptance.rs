//! Acceptance suite. Each criterion runs in sequence, is timed, and prints a
//! single PASS/FAIL line; the test fails if any criterion fails.
//!
//! Run with `cargo test -p prime-spectrum --test acceptance`.

use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use prime_spectrum::reconstruct::{max_components, reconstruct_full, reconstruct_topk};
use prime_spectrum::sieve::{
    build_series, count_primes, sieve_range, MangoldtSeries, SeriesMode, Window,
};
use prime_spectrum::spectral::{
    default_threshold, extract_peaks, spiral_all_bins, spiral_trace, SpiralTrace,
};
use prime_spectrum::stats::{interval_histogram, li, pnt_ratio};
use prime_spectrum::transform::{check_periodicity, dft_fast, dft_naive, inverse_dft};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const SEED: u64 = 0x5EED_2013;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

fn trial_division(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

fn window(a: u64, b: u64) -> Window {
    Window::new(a, b).unwrap()
}

fn indicator(a: u64, b: u64) -> MangoldtSeries {
    build_series(window(a, b), SeriesMode::Indicator).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// 1. Sieve vs trial division on 200 random windows in [2, 10^5].
fn sieve_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut checked = 0usize;
    for i in 0..200 {
        let a = rng.gen_range(2..=100_000u64);
        let b = rng.gen_range(a..=(a + 5_000).min(100_000));
        let got = sieve_range(window(a, b)).map_err(|e| e.to_string())?;
        let want: Vec<u64> = (a..=b).filter(|&n| trial_division(n)).collect();
        ensure(got == want, || format!("window #{i} [{a}, {b}] differs"))?;
        checked += want.len();
    }
    Ok(format!("200 windows, {checked} primes"))
}

/// 2. Fast vs naive DFT for N in {17, 64, 1000, 4096}.
fn dft_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED + 1);
    let mut worst_ratio = 0.0f64;
    for n in [17usize, 64, 1000, 4096] {
        let primes = indicator(2, n as u64 + 1);
        let random = MangoldtSeries::from_values(
            2,
            SeriesMode::Indicator,
            (0..n)
                .map(|_| if rng.gen_bool(0.3) { 1.0 } else { 0.0 })
                .collect(),
        )
        .unwrap();
        for s in [primes, random] {
            let fast = dft_fast(&s).map_err(|e| e.to_string())?;
            let slow = dft_naive(&s).map_err(|e| e.to_string())?;
            let err = fast
                .coefficients()
                .iter()
                .zip(slow.coefficients())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            let tol = 1e-6 * n as f64;
            ensure(err < tol, || {
                format!("N = {n}: max error {err:e} >= {tol:e}")
            })?;
            worst_ratio = worst_ratio.max(err / tol);
        }
    }
    Ok(format!("worst error/tolerance {worst_ratio:.1e}"))
}

/// 3. Inversion and full reconstruction on [2, 10001].
fn inversion() -> Outcome {
    let s = indicator(2, 10_001);
    let spec = dft_fast(&s).map_err(|e| e.to_string())?;
    let back = inverse_dft(&spec);
    let err = back
        .iter()
        .zip(s.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    ensure(err < 1e-9, || format!("inversion error {err:e}"))?;
    let rec = reconstruct_full(&spec);
    let truth = sieve_range(window(2, 10_001)).map_err(|e| e.to_string())?;
    ensure(truth.len() == 1229, || {
        format!("sieve found {} primes", truth.len())
    })?;
    ensure(rec.detected_primes == truth, || {
        format!("detected {} primes", rec.detected_primes.len())
    })?;
    Ok(format!("max error {err:.1e}, 1229 primes detected"))
}

/// 4. |X(l + zN) − X(l)| < 1e-9 for 50 random (z <= 5, l) at N = 1000.
fn periodicity() -> Outcome {
    let s = indicator(2, 1001);
    let mut rng = StdRng::seed_from_u64(SEED + 2);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let z = rng.gen_range(1..=5u64);
        let l = rng.gen_range(0..1000usize);
        let d = check_periodicity(&s, z, l).map_err(|e| e.to_string())?;
        ensure(d < 1e-9, || format!("z = {z}, l = {l}: deviation {d:e}"))?;
        worst = worst.max(d);
    }
    Ok(format!("worst deviation {worst:.1e}"))
}

/// 5. Mirror-symmetric amplitudes for both comparison windows.
fn conjugate_symmetry() -> Outcome {
    let mut notes = Vec::new();
    for (a, b) in [(2u64, 10_001u64), (10_200_000, 10_201_000)] {
        let spec = dft_fast(&indicator(a, b)).map_err(|e| e.to_string())?;
        let n = spec.n_points();
        let amp = spec.amplitudes();
        let worst = (1..n)
            .map(|l| (amp[l] - amp[n - l]).abs())
            .fold(0.0, f64::max);
        ensure(worst < 1e-9, || format!("[{a}, {b}]: asymmetry {worst:e}"))?;
        notes.push(format!("[{a},{b}] {worst:.1e}"));
    }
    Ok(notes.join(", "))
}

fn check_spiral(trace: &SpiralTrace) -> Result<usize, String> {
    let a = trace.scale();
    for p in trace.points() {
        let dev = (p.x.hypot(p.y) - a * p.f).abs();
        ensure(dev < 1e-12, || format!("f = {}: |r − a·f| = {dev:e}", p.f))?;
    }
    let arcs = trace.arc_lengths();
    ensure(arcs.windows(2).all(|w| w[1] > w[0]), || {
        "arc length not strictly increasing".into()
    })?;
    Ok(trace.points().len())
}

/// 6. r = a·f for every spiral point; arc length strictly increasing.
fn spiral() -> Outcome {
    let spec = dft_fast(&indicator(2, 10_001)).map_err(|e| e.to_string())?;
    let peaks = extract_peaks(&spec, default_threshold(&spec)).map_err(|e| e.to_string())?;
    let mut total = 0;
    for a in [1.0, 0.5] {
        total += check_spiral(&spiral_trace(&peaks, a).map_err(|e| e.to_string())?)?;
        total += check_spiral(&spiral_all_bins(&spec, a).map_err(|e| e.to_string())?)?;
    }
    Ok(format!("{total} points"))
}

/// 7. Σ residual² = omitted-bin energy (Parseval) for top-k on [2, 2001].
fn parseval_topk() -> Outcome {
    let s = indicator(2, 2001);
    let spec = dft_fast(&s).map_err(|e| e.to_string())?;
    let energy: f64 = s.values().iter().map(|v| v * v).sum();
    let mut worst = 0.0f64;
    for k in [1, 10, 100, max_components(spec.n_points())] {
        let r = reconstruct_topk(&spec, k).map_err(|e| e.to_string())?;
        let direct: f64 = s
            .values()
            .iter()
            .zip(&r.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        let rel = (direct - r.omitted_energy).abs() / energy;
        ensure(rel < 1e-9, || format!("k = {k}: relative mismatch {rel:e}"))?;
        worst = worst.max(rel);
    }
    Ok(format!("worst relative mismatch {worst:.1e}"))
}

/// 8. |π(x) − Li(x)| < √x·(ln x)², and π(x)·ln x / x decreasing toward 1.
fn desk_statistics() -> Outcome {
    let mut prev = f64::INFINITY;
    let mut notes = Vec::new();
    for x in [1_000u64, 10_000, 100_000, 1_000_000] {
        let xf = x as f64;
        let pi = count_primes(x).map_err(|e| e.to_string())? as f64;
        let l = li(xf).map_err(|e| e.to_string())?;
        let bound = xf.sqrt() * xf.ln().powi(2);
        ensure((pi - l).abs() < bound, || {
            format!("x = {x}: |π − Li| = {} >= {bound}", (pi - l).abs())
        })?;
        let r = pnt_ratio(x).map_err(|e| e.to_string())?;
        ensure(r > 1.0 && r < prev, || {
            format!("x = {x}: ratio {r} not in (1, {prev})")
        })?;
        prev = r;
        notes.push(format!("{r:.4}"));
    }
    Ok(format!("PNT ratios {}", notes.join(" > ")))
}

/// 9. Primes per 1000 over [0, 10^6): first bucket 168, long-run decrease.
fn histogram() -> Outcome {
    let h = interval_histogram(1_000_000, 1000).map_err(|e| e.to_string())?;
    ensure(h.buckets.len() == 1000, || {
        format!("{} buckets", h.buckets.len())
    })?;
    ensure(h.buckets[0].count == 168, || {
        format!("first bucket {}", h.buckets[0].count)
    })?;
    ensure(h.total() == 78_498, || format!("total {}", h.total()))?;
    let moving = h.moving_average(10);
    let (first, last) = (moving[0], moving[moving.len() - 1]);
    ensure(last <= first, || {
        format!("moving average rises end to end: {first} -> {last}")
    })?;
    let trend = h.trend(10);
    ensure(trend.is_non_increasing(), || {
        format!("block trend not non-increasing: {trend:?}")
    })?;
    Ok(format!(
        "10-bucket mean {first:.1} -> {last:.1}, slope {:.3}/block",
        trend.slope
    ))
}

fn cli_run(out: &Path, args: &[&str]) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_prime-spectrum"))
        .env_remove("PRIME_SPECTRUM_MAX_N")
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(status.status.success(), || {
        format!(
            "{args:?} failed: {}",
            String::from_utf8_lossy(&status.stderr)
        )
    })
}

/// 10. Two runs of each subcommand give byte-identical CSV/JSON.
fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs: [&[&str]; 6] = [
        &["sieve", "--start", "2", "--end", "5000"],
        &["spectrum", "--start", "2", "--end", "10000"],
        &["spiral", "--start", "2", "--end", "10000"],
        &[
            "reconstruct",
            "--start",
            "2",
            "--end",
            "3000",
            "--top-k",
            "50",
        ],
        &[
            "reconstruct",
            "--start",
            "2",
            "--end",
            "10000",
            "--top-k",
            "all",
            "--plot-range",
            "2:30",
        ],
        &["stats", "--end", "100000"],
    ];
    let mut compared = 0;
    for (i, args) in runs.iter().enumerate() {
        let a = dir.path().join(format!("{i}a"));
        let b = dir.path().join(format!("{i}b"));
        cli_run(&a, args)?;
        cli_run(&b, args)?;
        let mut names: Vec<_> = std::fs::read_dir(&a)
            .map_err(|e| e.to_string())?
            .map(|e| e.unwrap().file_name())
            .collect();
        names.sort();
        for name in names {
            let s = name.to_string_lossy().to_string();
            if !(s.ends_with(".csv") || s.ends_with(".json") || s.ends_with(".svg")) {
                continue;
            }
            let x = std::fs::read(a.join(&name)).map_err(|e| e.to_string())?;
            let y = std::fs::read(b.join(&name)).map_err(|e| e.to_string())?;
            ensure(x == y, || format!("{args:?}: {s} differs between runs"))?;
            compared += 1;
        }
    }
    Ok(format!("{compared} files identical"))
}

/// Written to the process stderr directly so the lines survive output capture.
fn report(line: &str) {
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{line}");
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        (
            "1 sieve oracle equivalence",
            Some(Duration::from_secs(10)),
            sieve_oracle,
        ),
        (
            "2 DFT oracle equivalence",
            Some(Duration::from_secs(30)),
            dft_oracle,
        ),
        (
            "3 Fourier inversion on [2,10001]",
            Some(Duration::from_secs(5)),
            inversion,
        ),
        (
            "4 periodicity X(l+zN) = X(l)",
            Some(Duration::from_secs(5)),
            periodicity,
        ),
        (
            "5 conjugate symmetry, both windows",
            Some(Duration::from_secs(20)),
            conjugate_symmetry,
        ),
        (
            "6 spiral polar form r = a f",
            Some(Duration::from_secs(1)),
            spiral,
        ),
        (
            "7 Parseval under top-k",
            Some(Duration::from_secs(5)),
            parseval_topk,
        ),
        (
            "8 pi/Li bound and PNT ratio",
            Some(Duration::from_secs(60)),
            desk_statistics,
        ),
        (
            "9 new primes per 1000 histogram",
            Some(Duration::from_secs(30)),
            histogram,
        ),
        ("10 CLI determinism", None, cli_determinism),
    ];
    let mut failures = Vec::new();
    for (name, limit, check) in criteria {
        let started = Instant::now();
        let outcome = check();
        let elapsed = started.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(max)) if elapsed >= max => {
                Err(format!("took {elapsed:.2?}, limit {max:?}"))
            }
            (o, _) => o,
        };
        match &outcome {
            Ok(detail) => report(&format!("[PASS] {name} ({elapsed:.2?}): {detail}")),
            Err(why) => {
                report(&format!("[FAIL] {name} ({elapsed:.2?}): {why}"));
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
