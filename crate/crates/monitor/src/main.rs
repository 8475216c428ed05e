use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use nyquist_core::sampler::fixed_rate_cost;
use nyquist_core::{
    decimate, detect_aliasing, dft, estimate_nyquist, l2_distance, low_pass_reconstruct, quantize,
    reconstruct_with_quantization, regularize, run, total_cost, AnalysisOptions, DetectorConfig,
    DualRatePlan, EstimateOptions, NyquistEstimate, QuantizationSpec, RegularizeOptions,
    ReportSet, SamplerConfig, SignalSpec, UniformSeries,
};
use nyquist_monitor::export::{
    metric_summary_csv, ratio_cdf_csv, report_json, sampling_log_csv, samples_csv, spectrum_csv,
    traces_csv, windows_csv, write_atomic,
};
use nyquist_monitor::{analyze_all, load_trace, parse_spec, write_trace};

/// Treat monitoring metrics as sampled signals: estimate Nyquist rates,
/// detect aliasing, simulate adaptive sampling.
#[derive(Parser)]
#[command(name = "nyquist", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate Nyquist rates and oversampling ratios for trace files.
    Analyze(AnalyzeArgs),
    /// Decimate a trace to its Nyquist rate, reconstruct it and report the
    /// L2 distance to the original.
    Roundtrip(RoundtripArgs),
    /// Run the adaptive sampler against a synthetic signal.
    Simulate(SimulateArgs),
    /// Compare two sampling rates of one signal for aliasing.
    DetectAlias(DetectArgs),
    /// Write a synthetic trace.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    /// Unit sines at 400 and 440 Hz.
    Fig3,
    /// Slow 5-minute temperature-like signal with 1-degree quantization in mind.
    Temperature,
}

#[derive(Args)]
struct SourceArgs {
    /// Signal specification file.
    #[arg(long, conflicts_with = "preset")]
    spec: Option<PathBuf>,
    /// Built-in signal instead of a spec file.
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Override the noise seed.
    #[arg(long)]
    seed: Option<u64>,
}

impl SourceArgs {
    fn given(&self) -> bool {
        self.spec.is_some() || self.preset.is_some()
    }

    fn load(&self) -> Result<SignalSpec> {
        let mut spec = match (&self.spec, self.preset) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                parse_spec(&text, &path.display().to_string())?
            }
            (None, Some(Preset::Fig3)) => SignalSpec::fig3(),
            (None, Some(Preset::Temperature)) => SignalSpec::temperature_like(1),
            (None, None) => bail!("one of --spec or --preset is required"),
        };
        if let Some(seed) = self.seed {
            spec.seed = seed;
        }
        Ok(spec)
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Trace files (CSV with a `timestamp,value` header).
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// JSON report path; CSV tables are written next to it.
    #[arg(long, default_value = "report.json")]
    out: PathBuf,
    #[arg(long, default_value_t = 0.99)]
    energy_fraction: f64,
    /// Analyze moving windows of this many seconds instead of whole traces.
    #[arg(long, num_args = 0..=1, default_missing_value = "21600")]
    window: Option<f64>,
    /// Window advance in seconds.
    #[arg(long, default_value_t = 300.0, requires = "window")]
    step: f64,
    /// Largest tolerated gap, in median sampling intervals.
    #[arg(long, default_value_t = 10.0)]
    max_gap_multiple: f64,
}

#[derive(Args)]
struct RoundtripArgs {
    input: PathBuf,
    /// Where to write the reconstructed trace.
    #[arg(long)]
    out: PathBuf,
    /// Re-quantize the reconstruction to this step.
    #[arg(long)]
    quantum: Option<f64>,
    #[arg(long, default_value_t = 0.0, requires = "quantum")]
    quantum_origin: f64,
    /// Low-pass cutoff in Hz instead of half the estimated Nyquist rate.
    #[arg(long)]
    cutoff: Option<f64>,
    #[arg(long, default_value_t = 0.99)]
    energy_fraction: f64,
    #[arg(long, default_value_t = 10.0)]
    max_gap_multiple: f64,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Simulated time span in seconds.
    #[arg(long)]
    horizon: f64,
    #[arg(long)]
    initial_rate: f64,
    /// Defaults to initial_rate / 1000.
    #[arg(long)]
    min_rate: Option<f64>,
    /// Defaults to initial_rate * 1000.
    #[arg(long)]
    max_rate: Option<f64>,
    #[arg(long, default_value_t = 21_600.0)]
    window: f64,
    #[arg(long, default_value_t = 300.0)]
    step: f64,
    #[arg(long, default_value_t = 2.0)]
    probe_factor: f64,
    #[arg(long, default_value_t = 1.2)]
    headroom: f64,
    #[arg(long, default_value_t = 3)]
    decrease_patience: usize,
    #[arg(long, default_value_t = 8)]
    memory_depth: usize,
    #[arg(long, default_value_t = 1.5)]
    dual_ratio: f64,
    #[arg(long, default_value_t = 0.1)]
    alias_threshold: f64,
    #[arg(long, default_value_t = 0.0)]
    noise_floor: f64,
    #[arg(long, default_value_t = 0.99)]
    energy_fraction: f64,
    /// Per-window decisions.
    #[arg(long, default_value = "sampling_log.csv")]
    log: PathBuf,
    /// Every sample the sampler took.
    #[arg(long)]
    samples: Option<PathBuf>,
}

#[derive(Args)]
struct DetectArgs {
    /// Two traces of the same signal at different rates.
    #[arg(num_args = 2, conflicts_with_all = ["spec", "preset"])]
    inputs: Vec<PathBuf>,
    #[command(flatten)]
    source: SourceArgs,
    /// Slower rate in Hz when sampling a spec.
    #[arg(long)]
    rate: Option<f64>,
    /// Faster rate over slower rate when sampling a spec.
    #[arg(long, default_value_t = 1.5)]
    ratio: f64,
    /// Seconds to sample when using a spec.
    #[arg(long)]
    duration: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    threshold: f64,
    #[arg(long, default_value_t = 0.0)]
    noise_floor: f64,
    #[arg(long, default_value_t = 10.0)]
    max_gap_multiple: f64,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Sampling rate in Hz.
    #[arg(long)]
    rate: f64,
    /// Seconds to cover; round(duration * rate) samples are written.
    #[arg(long)]
    duration: f64,
    #[arg(long, default_value_t = 0.0)]
    start: f64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "")]
    metric: String,
    #[arg(long, default_value = "")]
    device: String,
    #[arg(long, default_value = "")]
    unit: String,
    /// Quantize values to this step.
    #[arg(long)]
    quantum: Option<f64>,
    /// Also write the one-sided PSD of the generated series.
    #[arg(long)]
    spectrum: Option<PathBuf>,
}

fn main() -> ExitCode {
    let outcome = match Cli::parse().command {
        Command::Analyze(a) => analyze(a),
        Command::Roundtrip(a) => roundtrip(a),
        Command::Simulate(a) => simulate(a),
        Command::DetectAlias(a) => detect(a),
        Command::Generate(a) => generate(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn check_fraction(f: f64) -> Result<()> {
    if !(f > 0.0 && f < 1.0) {
        bail!("--energy-fraction must lie in (0, 1), got {f}");
    }
    Ok(())
}

fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out
        .file_stem()
        .map_or_else(|| "report".into(), |s| s.to_string_lossy().into_owned());
    out.with_file_name(format!("{stem}.{suffix}"))
}

fn write(path: &Path, text: &str) -> Result<()> {
    write_atomic(path, text.as_bytes())?;
    Ok(())
}

fn describe(e: NyquistEstimate) -> String {
    match e {
        NyquistEstimate::Rate(r) => format!("{r} Hz"),
        NyquistEstimate::Aliased => "ALIASED".into(),
    }
}

fn analyze(a: AnalyzeArgs) -> Result<()> {
    check_fraction(a.energy_fraction)?;
    if a.max_gap_multiple.is_nan() || a.max_gap_multiple <= 0.0 {
        bail!("--max-gap-multiple must be positive");
    }
    if let Some(w) = a.window {
        if !(w > 0.0 && a.step > 0.0) {
            bail!("--window and --step must be positive");
        }
    }
    let opts = AnalysisOptions {
        energy_fraction: a.energy_fraction,
        window: a.window.map(|w| (w, a.step)),
        max_gap_multiple: a.max_gap_multiple,
    };
    let (reports, skipped) = analyze_all(&a.inputs, &opts);
    for s in &skipped {
        eprintln!("skipped {}: {}", s.source, s.reason);
    }
    if reports.is_empty() {
        bail!("every trace failed to load or analyze");
    }
    let set = ReportSet::from_reports(reports, skipped)?;
    for r in &set.reports {
        let ratio = r
            .oversampling_ratio
            .map_or_else(|| "-".into(), |x| format!("{x}"));
        println!(
            "{} {} rate {} Hz nyquist {} ratio {}",
            r.metric_name,
            r.device_id,
            r.actual_rate,
            describe(r.nyquist),
            ratio
        );
    }
    write(&a.out, &report_json(&set))?;
    write(&sibling(&a.out, "ratio_cdf.csv"), &ratio_cdf_csv(&set.ratio_cdf))?;
    write(&sibling(&a.out, "nyquist_by_metric.csv"), &metric_summary_csv(&set.metrics))?;
    write(&sibling(&a.out, "traces.csv"), &traces_csv(&set.reports))?;
    if opts.window.is_some() {
        write(&sibling(&a.out, "windows.csv"), &windows_csv(&set.reports))?;
    }
    Ok(())
}

/// The trace resampled at its median rate, and its device name.
fn regularized(path: &Path, max_gap_multiple: f64) -> Result<(UniformSeries, String)> {
    let trace = load_trace(path)?;
    let gap = trace
        .series
        .median_gap()
        .with_context(|| format!("{}: need at least two samples", path.display()))?;
    let us = regularize(
        &trace.series,
        1.0 / gap,
        &RegularizeOptions { max_gap_multiple },
    )?;
    Ok((us, trace.device_id))
}

fn roundtrip(a: RoundtripArgs) -> Result<()> {
    check_fraction(a.energy_fraction)?;
    let (us, device) = regularized(&a.input, a.max_gap_multiple)?;
    let rate = us.rate();
    let cutoff = match a.cutoff {
        Some(c) if c > 0.0 && c.is_finite() => c,
        Some(c) => bail!("--cutoff must be positive, got {c}"),
        None => match estimate_nyquist(&us, &EstimateOptions::with_fraction(a.energy_fraction))? {
            NyquistEstimate::Rate(nu) => {
                println!("nyquist {nu} Hz");
                nu / 2.0
            }
            NyquistEstimate::Aliased => bail!(
                "{}: ALIASED; the trace has no band limit to cut at (use --cutoff to force one)",
                a.input.display()
            ),
        },
    };
    // Keep every k-th sample with k as large as possible while staying at or
    // above twice the cutoff. The record is cut to a whole number of slow
    // periods so the reconstruction spans exactly the same samples.
    let factor = ((rate / (2.0 * cutoff)) * (1.0 + 1e-9)).floor().max(1.0);
    let k = factor as usize;
    let n = us.len() / k * k;
    if n < 2 * k {
        bail!("{}: too few samples to decimate by {k}", a.input.display());
    }
    let original = us.with_values(rate, us.values()[..n].to_vec())?;
    let slow = decimate(&original, rate / factor)?;
    let band = cutoff.min(slow.rate() / 2.0);
    let restored = match a.quantum {
        Some(q) => {
            let q = QuantizationSpec::with_origin(q, a.quantum_origin)?;
            reconstruct_with_quantization(&slow, band, rate, &q)?
        }
        None => low_pass_reconstruct(&slow, band, rate)?,
    };
    let distance = l2_distance(&original, &restored)?;
    let norm = original.values().iter().map(|v| v * v).sum::<f64>().sqrt();
    println!(
        "decimated {} samples at {} Hz to {} at {} Hz, cutoff {} Hz",
        n,
        rate,
        slow.len(),
        slow.rate(),
        band
    );
    println!("l2_distance {distance}");
    println!(
        "relative_l2 {}",
        if norm > 0.0 { distance / norm } else { distance }
    );
    write_trace(&a.out, &restored.to_time_series(), &device)?;
    Ok(())
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let spec = a.source.load()?;
    let config = SamplerConfig {
        window: a.window,
        step: a.step,
        probe_factor: a.probe_factor,
        headroom: a.headroom,
        decrease_patience: a.decrease_patience,
        memory_depth: a.memory_depth,
        dual_ratio: a.dual_ratio,
        alias_threshold: a.alias_threshold,
        noise_floor: a.noise_floor,
        energy_fraction: a.energy_fraction,
        ..SamplerConfig::new(
            a.initial_rate,
            a.min_rate.unwrap_or(a.initial_rate / 1000.0),
            a.max_rate.unwrap_or(a.initial_rate * 1000.0),
        )
    };
    config.validate()?;
    let log = run(&spec, &config, a.horizon)?;
    write(&a.log, &sampling_log_csv(&log))?;
    if let Some(p) = &a.samples {
        write(p, &samples_csv(&log.samples))?;
    }
    let span = log.covered_span();
    let cost = total_cost(&log);
    let baseline = fixed_rate_cost(config.initial_rate, span);
    let last = log.records.last().expect("horizon covers a window");
    let nu = spec.true_nyquist_at(last.window_start);
    println!("windows {}", log.records.len());
    println!(
        "final mode {} rate {} Hz",
        last.decision.mode, last.decision.next_rate
    );
    println!(
        "true nyquist {nu} Hz, headroom target {} Hz",
        config.headroom * nu
    );
    println!("total_cost {cost} samples");
    println!(
        "fixed_baseline_cost {baseline} samples at {} Hz",
        config.initial_rate
    );
    if baseline > 0 {
        println!("cost_ratio {}", cost as f64 / baseline as f64);
    }
    Ok(())
}

fn detect(a: DetectArgs) -> Result<()> {
    let config = DetectorConfig {
        threshold: a.threshold,
        noise_floor: a.noise_floor,
        ..DetectorConfig::default()
    };
    config.validate()?;
    let (fast, slow) = if a.source.given() {
        let spec = a.source.load()?;
        let rate = a.rate.context("--rate is required with --spec or --preset")?;
        let duration = a
            .duration
            .context("--duration is required with --spec or --preset")?;
        let plan = nyquist_core::plan_dual_rates(rate, a.ratio)?;
        (
            spec.generate(plan.f1(), duration)?,
            spec.generate(plan.f2(), duration)?,
        )
    } else {
        if a.inputs.len() != 2 {
            bail!("give two trace files, or --spec/--preset with --rate and --duration");
        }
        let (x, _) = regularized(&a.inputs[0], a.max_gap_multiple)?;
        let (y, _) = regularized(&a.inputs[1], a.max_gap_multiple)?;
        if x.rate() >= y.rate() {
            (x, y)
        } else {
            (y, x)
        }
    };
    let plan = DualRatePlan::new(fast.rate(), slow.rate())?;
    let v = detect_aliasing(&fast, &slow, &plan, &config)?;
    println!("{}", if v.aliased { "ALIASED" } else { "NOT ALIASED" });
    println!("discrepancy {} (threshold {})", v.discrepancy, config.threshold);
    println!(
        "compared band {} to {} Hz",
        v.compared_band.0, v.compared_band.1
    );
    println!("rates {} Hz and {} Hz", plan.f1(), plan.f2());
    Ok(())
}

fn generate(a: GenerateArgs) -> Result<()> {
    let spec = a.source.load()?;
    if !(a.duration.is_finite() && a.duration > 0.0) {
        bail!("--duration must be positive");
    }
    if !(a.rate.is_finite() && a.rate > 0.0) {
        bail!("--rate must be positive");
    }
    let n = ((a.duration * a.rate).round() as usize).max(1);
    let raw = spec.generate_at(a.start, a.rate, n)?;
    let mut us = UniformSeries::new(a.metric, a.unit, a.start, a.rate, raw.into_values())?;
    if let Some(q) = a.quantum {
        us = quantize(&us, &QuantizationSpec::new(q)?);
    }
    write_trace(&a.out, &us.to_time_series(), &a.device)?;
    if let Some(p) = &a.spectrum {
        write(p, &spectrum_csv(&dft(&us)?))?;
    }
    println!("wrote {n} samples at {} Hz to {}", a.rate, a.out.display());
    Ok(())
}
