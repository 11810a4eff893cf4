//! Command-line front end: argument/config resolution and the per-command
//! pipelines that write CSV, JSON and SVG outputs.
//!
//! Exit codes: 0 success, 2 usage, 3 capacity, 4 I/O.

pub mod output;
pub mod svg;

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Map};
use thiserror::Error;

use crate::reconstruct::{self, Reconstruction};
use crate::sieve::{SeriesMode, Sieve, SieveError, Window};
use crate::spectral::{self, SpiralTrace};
use crate::stats::{self, PsiComparison, StatsError};
use crate::transform::{self, Spectrum, TransformError};
use output::{json_document, write_file, Cell, Provenance, Table, VERSION};
use svg::{Chart, Layer};

/// Environment variable capping the window length.
pub const MAX_N_ENV: &str = "PRIME_SPECTRUM_MAX_N";
pub const DEFAULT_MAX_N: u64 = 10_000_000;
pub const DEFAULT_START: u64 = 2;
pub const DEFAULT_END: u64 = 10_000;
pub const DEFAULT_BUCKET_WIDTH: u64 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("capacity error: {0}")]
    Capacity(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Capacity(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<SieveError> for CliError {
    fn from(e: SieveError) -> Self {
        match e {
            SieveError::Capacity { .. } => CliError::Capacity(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<TransformError> for CliError {
    fn from(e: TransformError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<StatsError> for CliError {
    fn from(e: StatsError) -> Self {
        match e {
            StatsError::Sieve(s) => s.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<spectral::SpectralError> for CliError {
    fn from(e: spectral::SpectralError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<reconstruct::ReconstructError> for CliError {
    fn from(e: reconstruct::ReconstructError) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Indicator,
    Log,
}

impl From<ModeArg> for SeriesMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Indicator => SeriesMode::Indicator,
            ModeArg::Log => SeriesMode::LogWeighted,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Primes in the window and the L(n) / Λ(n) series.
    Sieve,
    /// DFT of the series: full spectrum, peaks, amplitude plot.
    Spectrum,
    /// Fermat-spiral trace of the peak (or all) bins.
    Spiral,
    /// Amplitude-phase resynthesis and prime detection.
    Reconstruct,
    /// π, ψ, Li, PNT ratio and the new-primes-per-interval histogram over [2, end].
    Stats,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sieve => "sieve",
            Command::Spectrum => "spectrum",
            Command::Spiral => "spiral",
            Command::Reconstruct => "reconstruct",
            Command::Stats => "stats",
        }
    }
}

/// Options shared by every subcommand; also the schema of the TOML config file.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// First integer of the window (>= 2).
    #[arg(long, global = true)]
    pub start: Option<u64>,
    /// Last integer of the window (inclusive).
    #[arg(long, global = true)]
    pub end: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Comma-separated subset of csv,json,svg.
    #[arg(long, global = true, value_enum, value_delimiter = ',')]
    pub format: Option<Vec<Format>>,
    /// Peak threshold (default: 0.25 x largest non-DC amplitude).
    #[arg(long, global = true)]
    pub threshold: Option<f64>,
    /// Number of spectral components, or "all".
    #[arg(long, global = true)]
    pub top_k: Option<String>,
    #[arg(long, global = true)]
    pub bucket_width: Option<u64>,
    /// Spiral through every half-spectrum bin instead of the peaks.
    #[arg(long, global = true)]
    #[serde(default)]
    pub all_bins: bool,
    /// Also emit the literal single-frequency superposition (inspection only).
    #[arg(long, global = true)]
    #[serde(default)]
    pub strict_eq13: bool,
    /// Spiral scale a in r = a·f.
    #[arg(long, global = true)]
    pub scale: Option<f64>,
    /// Plotted n-range for the reconstruction figure, "A:B".
    #[arg(long, global = true)]
    pub plot_range: Option<String>,
    /// Rebuild from a spectrum.csv instead of sieving.
    #[arg(long, global = true)]
    pub from_spectrum: Option<PathBuf>,
    /// Second window "A:B" overlaid on the amplitude plot.
    #[arg(long, global = true)]
    pub overlay: Option<String>,
    /// Exponent for the Dirichlet partial-sum diagnostic in `stats`.
    #[arg(long, global = true)]
    pub dirichlet_a: Option<f64>,
    /// TOML file with any of the options above; flags take precedence.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl Options {
    /// Fills unset fields from `other`.
    fn or(self, other: Options) -> Options {
        Options {
            start: self.start.or(other.start),
            end: self.end.or(other.end),
            mode: self.mode.or(other.mode),
            out: self.out.or(other.out),
            format: self.format.or(other.format),
            threshold: self.threshold.or(other.threshold),
            top_k: self.top_k.or(other.top_k),
            bucket_width: self.bucket_width.or(other.bucket_width),
            all_bins: self.all_bins || other.all_bins,
            strict_eq13: self.strict_eq13 || other.strict_eq13,
            scale: self.scale.or(other.scale),
            plot_range: self.plot_range.or(other.plot_range),
            from_spectrum: self.from_spectrum.or(other.from_spectrum),
            overlay: self.overlay.or(other.overlay),
            dirichlet_a: self.dirichlet_a.or(other.dirichlet_a),
            config: self.config,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "prime-spectrum",
    version,
    about = "Fourier analysis of the prime indicator series"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopK {
    All,
    Count(usize),
}

/// Fully resolved, validated configuration for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub window: Window,
    pub mode: SeriesMode,
    pub threshold: Option<f64>,
    pub top_k: TopK,
    pub output_dir: PathBuf,
    pub formats: BTreeSet<Format>,
    pub bucket_width: u64,
    pub all_bins: bool,
    pub strict_eq13: bool,
    pub scale: f64,
    pub plot_range: Option<(u64, u64)>,
    pub from_spectrum: Option<PathBuf>,
    pub overlay: Option<Window>,
    pub dirichlet_a: Option<f64>,
}

fn parse_range(text: &str, flag: &str) -> Result<(u64, u64), CliError> {
    let usage = || {
        CliError::Usage(format!(
            "--{flag} expects A:B with integers A <= B, got {text:?}"
        ))
    };
    let (a, b) = text.split_once(':').ok_or_else(usage)?;
    let a: u64 = a.trim().parse().map_err(|_| usage())?;
    let b: u64 = b.trim().parse().map_err(|_| usage())?;
    if a > b {
        return Err(usage());
    }
    Ok((a, b))
}

fn max_window_len() -> Result<u64, CliError> {
    match std::env::var(MAX_N_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::Usage(format!("{MAX_N_ENV} must be a positive integer, got {v:?}"))
        }),
        Err(_) => Ok(DEFAULT_MAX_N),
    }
}

fn check_length(window: Window, cap: u64) -> Result<(), CliError> {
    if window.len() > cap {
        return Err(CliError::Capacity(format!(
            "window {window} has {} points, above the cap of {cap} (set {MAX_N_ENV} to raise it)",
            window.len()
        )));
    }
    Ok(())
}

impl RunConfig {
    /// Resolves flags, then the optional config file, then defaults.
    pub fn resolve(command: Command, flags: Options) -> Result<Self, CliError> {
        let from_file = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                toml::from_str::<Options>(&text)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
            }
            None => Options::default(),
        };
        let o = flags.or(from_file);
        let start = o.start.unwrap_or(DEFAULT_START);
        let end = o.end.unwrap_or(DEFAULT_END);
        let window = Window::new(start, end).map_err(|e| CliError::Usage(e.to_string()))?;
        let cap = max_window_len()?;
        check_length(window, cap)?;
        if matches!(
            command,
            Command::Spectrum | Command::Spiral | Command::Reconstruct
        ) && o.from_spectrum.is_none()
            && window.len() < 2
        {
            return Err(CliError::Usage(
                "the transform needs a window of at least 2 integers".into(),
            ));
        }
        let top_k = match o.top_k.as_deref() {
            None | Some("all") => TopK::All,
            Some(k) => match k.parse::<usize>() {
                Ok(k) if k >= 1 => TopK::Count(k),
                _ => {
                    return Err(CliError::Usage(format!(
                        "--top-k expects a positive integer or \"all\", got {k:?}"
                    )))
                }
            },
        };
        if let Some(t) = o.threshold {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Usage(format!(
                    "--threshold must be positive, got {t}"
                )));
            }
        }
        let scale = o.scale.unwrap_or(1.0);
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(CliError::Usage(format!(
                "--scale must be positive, got {scale}"
            )));
        }
        let bucket_width = o.bucket_width.unwrap_or(DEFAULT_BUCKET_WIDTH);
        if bucket_width == 0 {
            return Err(CliError::Usage("--bucket-width must be at least 1".into()));
        }
        if command == Command::Stats && end < bucket_width {
            return Err(CliError::Usage(format!(
                "stats needs --end >= --bucket-width ({bucket_width})"
            )));
        }
        let formats: BTreeSet<Format> = o
            .format
            .unwrap_or_else(|| vec![Format::Csv, Format::Json, Format::Svg])
            .into_iter()
            .collect();
        if formats.is_empty() {
            return Err(CliError::Usage(
                "--format must name at least one of csv,json,svg".into(),
            ));
        }
        let plot_range = o
            .plot_range
            .as_deref()
            .map(|r| parse_range(r, "plot-range"))
            .transpose()?;
        let overlay = match o.overlay.as_deref() {
            Some(r) => {
                let (a, b) = parse_range(r, "overlay")?;
                let w = Window::new(a, b).map_err(|e| CliError::Usage(e.to_string()))?;
                check_length(w, cap)?;
                if w.len() < 2 {
                    return Err(CliError::Usage(
                        "--overlay window needs at least 2 integers".into(),
                    ));
                }
                Some(w)
            }
            None => None,
        };
        if let Some(a) = o.dirichlet_a {
            if a.is_nan() || a <= 1.0 {
                return Err(CliError::Usage(format!(
                    "--dirichlet-a must exceed 1, got {a}"
                )));
            }
        }
        Ok(RunConfig {
            command,
            window,
            mode: o
                .mode
                .map(SeriesMode::from)
                .unwrap_or(SeriesMode::Indicator),
            threshold: o.threshold,
            top_k,
            output_dir: o.out.unwrap_or_else(|| PathBuf::from(".")),
            formats,
            bucket_width,
            all_bins: o.all_bins,
            strict_eq13: o.strict_eq13,
            scale,
            plot_range,
            from_spectrum: o.from_spectrum,
            overlay,
            dirichlet_a: o.dirichlet_a,
        })
    }
}

/// Collects the outputs of one command and writes the requested formats.
struct Emitter<'a> {
    config: &'a RunConfig,
    provenance: Provenance,
    written: Vec<PathBuf>,
}

impl<'a> Emitter<'a> {
    fn new(config: &'a RunConfig, window: Window, mode: SeriesMode) -> Result<Self, CliError> {
        std::fs::create_dir_all(&config.output_dir)
            .map_err(|e| CliError::Io(format!("{}: {e}", config.output_dir.display())))?;
        Ok(Emitter {
            config,
            provenance: Provenance::new(config.command.name(), window, mode),
            written: Vec::new(),
        })
    }

    fn path(&self, file: &str) -> PathBuf {
        self.config.output_dir.join(file)
    }

    fn write(&mut self, file: &str, contents: &str) -> Result<(), CliError> {
        let p = self.path(file);
        write_file(&p, contents)?;
        self.written.push(p);
        Ok(())
    }

    fn tables(
        &mut self,
        tables: &[Table],
        extra: Map<String, serde_json::Value>,
    ) -> Result<(), CliError> {
        if self.config.formats.contains(&Format::Csv) {
            for t in tables {
                let csv = t.to_csv(&self.provenance);
                self.write(&format!("{}.csv", t.name), &csv)?;
            }
        }
        if self.config.formats.contains(&Format::Json) {
            let doc = json_document(&self.provenance, tables, extra);
            self.write(&format!("{}.json", self.config.command.name()), &doc)?;
        }
        Ok(())
    }

    fn chart(&mut self, file: &str, chart: &Chart) -> Result<(), CliError> {
        if self.config.formats.contains(&Format::Svg) {
            self.write(file, &chart.render(VERSION))?;
        }
        Ok(())
    }
}

/// Runs one command; returns the files written.
pub fn run(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    match config.command {
        Command::Sieve => run_sieve(config),
        Command::Spectrum => run_spectrum(config),
        Command::Spiral => run_spiral(config),
        Command::Reconstruct => run_reconstruct(config),
        Command::Stats => run_stats(config),
    }
}

fn series_label(mode: SeriesMode) -> &'static str {
    match mode {
        SeriesMode::Indicator => "L(n)",
        SeriesMode::LogWeighted => "Λ(n)",
    }
}

fn run_sieve(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let sieve = Sieve::default();
    let primes = sieve.sieve_range(config.window)?;
    let series = sieve.build_series(config.window, config.mode)?;
    let mut primes_t = Table::new("primes", &["prime"]);
    for &p in &primes {
        primes_t.push(vec![Cell::Int(p)]);
    }
    let mut series_t = Table::new("series", &["n", "value"]);
    for (n, v) in series.points() {
        series_t.push(vec![Cell::Int(n), Cell::Float(v)]);
    }
    let mut out = Emitter::new(config, config.window, config.mode)?;
    let mut extra = Map::new();
    extra.insert("prime_count".into(), json!(primes.len()));
    out.tables(&[primes_t, series_t], extra)?;
    let spikes: Vec<(f64, f64)> = series
        .points()
        .filter(|&(_, v)| v != 0.0)
        .map(|(n, v)| (n as f64, v))
        .collect();
    let mut chart = Chart::new(
        format!("{} over {}", series_label(config.mode), config.window),
        "n",
        series_label(config.mode),
    )
    .layer(Layer::Stems {
        points: spikes,
        color: "black",
    });
    chart.x_range = Some((config.window.start() as f64, config.window.end() as f64));
    out.chart("series.svg", &chart)?;
    Ok(out.written)
}

fn spectrum_of(window: Window, mode: SeriesMode) -> Result<Spectrum, CliError> {
    let series = Sieve::default().build_series(window, mode)?;
    Ok(transform::dft_fast(&series)?)
}

fn half_amplitude_curve(spectrum: &Spectrum) -> Vec<(f64, f64)> {
    (1..=spectrum.half_len())
        .map(|l| (spectrum.freq_grid()[l], spectrum.amplitudes()[l]))
        .collect()
}

fn peak_table(peaks: &spectral::PeakSet) -> Table {
    let mut t = Table::new("peaks", &["bin", "nu", "amplitude", "phase"]);
    for p in peaks.entries() {
        t.push(vec![
            Cell::Int(p.bin as u64),
            Cell::Float(p.frequency),
            Cell::Float(p.amplitude),
            Cell::Float(p.phase),
        ]);
    }
    t
}

fn threshold_for(config: &RunConfig, spectrum: &Spectrum) -> Result<f64, CliError> {
    let t = config
        .threshold
        .unwrap_or_else(|| spectral::default_threshold(spectrum));
    if t > 0.0 {
        Ok(t)
    } else {
        Err(CliError::Usage(
            "spectrum has no non-DC energy; pass --threshold explicitly".into(),
        ))
    }
}

fn run_spectrum(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let spectrum = spectrum_of(config.window, config.mode)?;
    let threshold = threshold_for(config, &spectrum)?;
    let peaks = spectral::extract_peaks(&spectrum, threshold)?;
    let mut spec_t = Table::new("spectrum", &["bin", "nu", "re", "im", "amplitude", "phase"]);
    for l in 0..spectrum.n_points() {
        let c = spectrum.coefficients()[l];
        spec_t.push(vec![
            Cell::Int(l as u64),
            Cell::Float(spectrum.freq_grid()[l]),
            Cell::Float(c.re),
            Cell::Float(c.im),
            Cell::Float(spectrum.amplitudes()[l]),
            Cell::Float(spectrum.phases()[l]),
        ]);
    }
    let mut out = Emitter::new(config, config.window, config.mode)?;
    let mut extra = Map::new();
    extra.insert("n_points".into(), json!(spectrum.n_points()));
    extra.insert("threshold".into(), json!(threshold));
    out.tables(&[spec_t, peak_table(&peaks)], extra)?;

    let mut chart = Chart::new(
        format!(
            "Amplitude spectrum of {} over {}",
            series_label(config.mode),
            config.window
        ),
        "frequency (cycles/sample)",
        "|X|",
    )
    .layer(Layer::Line {
        points: half_amplitude_curve(&spectrum),
        color: "black",
        dashed: false,
    });
    chart.legend.push(("black", config.window.to_string()));
    if let Some(w) = config.overlay {
        let other = spectrum_of(w, config.mode)?;
        chart.layers.push(Layer::Line {
            points: half_amplitude_curve(&other),
            color: "gray",
            dashed: true,
        });
        chart.legend.push(("gray", w.to_string()));
    }
    out.chart("spectrum.svg", &chart)?;
    Ok(out.written)
}

fn run_spiral(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let spectrum = spectrum_of(config.window, config.mode)?;
    let trace: SpiralTrace = if config.all_bins {
        spectral::spiral_all_bins(&spectrum, config.scale)?
    } else {
        let peaks = spectral::extract_peaks(&spectrum, threshold_for(config, &spectrum)?)?;
        spectral::spiral_trace(&peaks, config.scale)?
    };
    let mut t = Table::new("spiral", &["t", "f", "x", "y"]);
    for (i, p) in trace.points().iter().enumerate() {
        t.push(vec![
            Cell::Int(i as u64),
            Cell::Float(p.f),
            Cell::Float(p.x),
            Cell::Float(p.y),
        ]);
    }
    let mut out = Emitter::new(config, config.window, config.mode)?;
    let mut extra = Map::new();
    extra.insert("scale".into(), json!(config.scale));
    extra.insert("all_bins".into(), json!(config.all_bins));
    out.tables(&[t], extra)?;
    let pts: Vec<(f64, f64)> = trace.points().iter().map(|p| (p.x, p.y)).collect();
    let mut chart = Chart::new(
        format!("Spiral r = {}·f over {}", config.scale, config.window),
        "x",
        "y",
    )
    .layer(Layer::Line {
        points: pts.clone(),
        color: "black",
        dashed: false,
    })
    .layer(Layer::Circles {
        points: pts,
        color: "black",
        radius: 1.5,
    });
    chart.y_from_zero = false;
    chart.equal_aspect = true;
    out.chart("spiral.svg", &chart)?;
    Ok(out.written)
}

/// Spectrum from `--from-spectrum` or from sieving the configured window.
pub fn reconstruction_input(config: &RunConfig) -> Result<Spectrum, CliError> {
    match &config.from_spectrum {
        Some(path) => {
            let s = output::read_spectrum_csv(path)?;
            if s.n_points() < 2 {
                return Err(CliError::Usage(format!(
                    "{}: spectrum needs at least 2 bins",
                    path.display()
                )));
            }
            Ok(s)
        }
        None => spectrum_of(config.window, config.mode),
    }
}

/// The reconstruction the `reconstruct` command writes, without touching disk.
pub fn compute_reconstruction(
    config: &RunConfig,
    spectrum: &Spectrum,
) -> Result<Reconstruction, CliError> {
    Ok(match config.top_k {
        TopK::All => reconstruct::reconstruct_full(spectrum),
        TopK::Count(k) => reconstruct::reconstruct_topk(spectrum, k)?,
    })
}

fn run_reconstruct(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let spectrum = reconstruction_input(config)?;
    let window = spectrum.source_window();
    let rec = compute_reconstruction(config, &spectrum)?;
    let detected: BTreeSet<u64> = rec.detected_primes.iter().copied().collect();
    let mut t = Table::new("reconstruction", &["n", "value", "is_detected_prime"]);
    for (n, &v) in window.iter().zip(&rec.values) {
        t.push(vec![
            Cell::Int(n),
            Cell::Float(v),
            Cell::Flag(detected.contains(&n)),
        ]);
    }
    let mut tables = vec![t];
    let mut extra = Map::new();
    extra.insert("detected_primes".into(), json!(rec.detected_primes));
    extra.insert("residual".into(), json!(rec.residual));
    extra.insert("components_used".into(), json!(rec.components_used));
    extra.insert("residual_energy".into(), json!(rec.residual_energy));
    extra.insert("omitted_energy".into(), json!(rec.omitted_energy));
    extra.insert(
        "detection_threshold".into(),
        json!(reconstruct::detection_threshold(spectrum.mode())),
    );
    if config.strict_eq13 {
        let threshold = config
            .threshold
            .unwrap_or_else(|| spectral::default_threshold(&spectrum));
        let peaks = spectral::extract_peaks(&spectrum, threshold.max(f64::MIN_POSITIVE))?;
        let omega = 2.0 * PI / spectrum.n_points() as f64;
        let strict = reconstruct::reconstruct_single_frequency(&spectrum, &peaks, omega);
        let mut st = Table::new("strict_eq13", &["n", "value"]);
        for (n, &v) in window.iter().zip(&strict.values) {
            st.push(vec![Cell::Int(n), Cell::Float(v)]);
        }
        tables.push(st);
        extra.insert("strict_eq13_residual".into(), json!(strict.residual));
    }
    let mut out = Emitter::new(config, window, spectrum.mode())?;
    out.tables(&tables, extra)?;

    let (lo, hi) = config.plot_range.unwrap_or((window.start(), window.end()));
    let (lo, hi) = (lo.max(window.start()), hi.min(window.end()));
    let in_range = |n: u64| n >= lo && n <= hi;
    let curve: Vec<(f64, f64)> = window
        .iter()
        .zip(&rec.values)
        .filter(|(n, _)| in_range(*n))
        .map(|(n, &v)| (n as f64, v))
        .collect();
    let marks: Vec<(f64, f64)> = window
        .iter()
        .zip(&rec.values)
        .filter(|(n, _)| in_range(*n) && detected.contains(n))
        .map(|(n, &v)| (n as f64, v))
        .collect();
    let k_label = match config.top_k {
        TopK::All => "all".to_string(),
        TopK::Count(k) => k.to_string(),
    };
    let mut chart = Chart::new(
        format!("Reconstruction from {k_label} components, n in [{lo}, {hi}]"),
        "n",
        series_label(spectrum.mode()),
    )
    .layer(Layer::Line {
        points: curve,
        color: "black",
        dashed: false,
    })
    .layer(Layer::Circles {
        points: marks,
        color: "red",
        radius: 4.0,
    });
    chart.x_range = Some((lo as f64, hi as f64));
    chart.y_from_zero = false;
    out.chart("reconstruction.svg", &chart)?;
    Ok(out.written)
}

/// x values reported by `stats`: powers of ten from 10³ up to `end`, then `end`.
fn stats_points(end: u64) -> Vec<u64> {
    let mut xs: Vec<u64> = std::iter::successors(Some(1000u64), |x| x.checked_mul(10))
        .take_while(|&x| x <= end)
        .collect();
    if end >= 3 && xs.last() != Some(&end) {
        xs.push(end);
    }
    xs
}

fn run_stats(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let end = config.window.end();
    let hist = stats::interval_histogram(end, config.bucket_width)?;
    let mut hist_t = Table::new("histogram", &["bucket_start", "count"]);
    for b in &hist.buckets {
        hist_t.push(vec![Cell::Int(b.start), Cell::Int(b.count)]);
    }
    let mut stats_t = Table::new(
        "stats",
        &[
            "x",
            "pi",
            "psi",
            "theta",
            "li",
            "bound",
            "pnt_ratio",
            "within_bound",
        ],
    );
    for x in stats_points(end) {
        let c = PsiComparison::at(x)?;
        stats_t.push(vec![
            Cell::Int(c.x),
            Cell::Int(c.pi_x),
            Cell::Float(c.psi),
            Cell::Float(c.theta),
            Cell::Float(c.li),
            Cell::Float(c.bound),
            Cell::Float(c.pnt_ratio()),
            Cell::Flag(c.pi_within_bound()),
        ]);
    }
    let mut tables = vec![hist_t, stats_t];
    if let Some(a) = config.dirichlet_a {
        let mut d = Table::new("dirichlet", &["m", "a", "zeta_partial", "prime_partial"]);
        for m in stats_points(end) {
            let (z, p) = stats::dirichlet_partial_sums(m, a)?;
            d.push(vec![
                Cell::Int(m),
                Cell::Float(a),
                Cell::Float(z),
                Cell::Float(p),
            ]);
        }
        tables.push(d);
    }
    let window = Window::new(2, end.max(2))?;
    let mut out = Emitter::new(config, window, SeriesMode::Indicator)?;
    let mut extra = Map::new();
    extra.insert("bucket_width".into(), json!(config.bucket_width));
    extra.insert(
        "trend".into(),
        serde_json::to_value(hist.trend(10)).expect("trend serializes"),
    );
    out.tables(&tables, extra)?;
    let bars: Vec<(f64, f64)> = hist
        .buckets
        .iter()
        .map(|b| (b.start as f64, b.count as f64))
        .collect();
    let w = config.bucket_width as f64;
    let mut chart = Chart::new(
        format!("New primes per {} integers", config.bucket_width),
        "n",
        "primes in interval",
    )
    .layer(Layer::Bars {
        points: bars,
        width: w,
        color: "gray",
    });
    chart.x_range = Some((0.0, hist.buckets.len() as f64 * w));
    out.chart("histogram.svg", &chart)?;
    Ok(out.written)
}

/// Parses `args`, runs, prints errors to stderr and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = RunConfig::resolve(cli.command, cli.options).and_then(|cfg| run(&cfg));
    match result {
        Ok(files) => {
            for f in files {
                println!("{}", display_path(&f));
            }
            0
        }
        Err(e) => {
            eprintln!("prime-spectrum: {e}");
            e.exit_code()
        }
    }
}

fn display_path(p: &Path) -> String {
    p.display().to_string()
}
