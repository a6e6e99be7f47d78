//! Command-line front end: `gen`, `simulate`, `recover` and `compare`.
//!
//! Flags override an optional `--config FILE` of `key = value` lines (keys
//! are flag names without the leading dashes). Every run validates its whole
//! configuration first, writes its outputs into a staging directory inside
//! `--out`, and only renames them into place once everything succeeded.
//!
//! Exit codes: 0 success, 2 usage or validation failure, 1 runtime failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::chirp::{make_reference, PhaseCurve, Reference, SweepFamily, SweepSpec};
use crate::error::Error;
use crate::impulse::BandLimits;
use crate::io::{self, SignalFile};
use crate::recovery::{
    band_limit, in_band_error, max_out_of_band, naive_deconvolve, recover_impulse_model,
};
use crate::signal::{self, RealSignal, Spectrum};
use crate::system::{force_system, random_fir_system, stack_captures, CaptureSet, SystemModel};

#[derive(Debug, Parser)]
#[command(
    name = "allpass-ir",
    version,
    about = "Allpass-chirp excitation and impulse-model recovery",
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a reference excitation, its spectrum and its phase curve.
    Gen(SharedArgs),
    /// Force a seeded random system with the reference, with optional noise and stacking.
    Simulate(SharedArgs),
    /// Recover an impulse model from a capture by removing the allpass phase.
    Recover(SharedArgs),
    /// Compare allpass recovery against naive spectral division.
    Compare(SharedArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SharedArgs {
    /// key = value file supplying defaults for any flag below
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Analysis length in samples (even)
    #[arg(long, default_value = "4096")]
    pub n: String,
    /// Sample rate in Hz
    #[arg(long, default_value = "48000")]
    pub rate: String,
    /// Passband edges in Hz, f_i:f_a
    #[arg(long, default_value = "100:20000")]
    pub band: String,
    /// Excitation family: linear | exp1 | exp2 | none
    #[arg(long, default_value = "linear")]
    pub sweep: String,
    /// Sweep duration in seconds
    #[arg(long, default_value = "0.06")]
    pub t: String,
    /// Apply the amplitude-compensation envelope to exponential sweeps
    #[arg(long)]
    pub compensate: bool,
    /// Seed for the random system and noise
    #[arg(long, default_value = "1")]
    pub seed: String,
    /// Capture SNR in dB, or inf for noiseless
    #[arg(long, default_value = "inf")]
    pub snr: String,
    /// Number of captures averaged
    #[arg(long, default_value = "1")]
    pub stacks: String,
    /// Nonzero taps in the simulated system
    #[arg(long, default_value = "1024")]
    pub taps: String,
    /// Bins trimmed from each band edge when scoring
    #[arg(long = "guard-bins", default_value = "2")]
    pub guard_bins: String,
    /// Denominator floor for the regularized naive division, or none
    #[arg(long, default_value = "1e-9")]
    pub floor: String,
    /// Output directory
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Captured response (WAV or CSV) for recover/compare
    #[arg(long, value_name = "FILE")]
    pub capture: Option<PathBuf>,
    /// Phase curve CSV written by gen/simulate
    #[arg(long, value_name = "FILE")]
    pub phase: Option<PathBuf>,
    /// Rebuild the phase curve (and reference) from --n/--rate/--band/--sweep/--t
    #[arg(long)]
    pub regenerate: bool,
    /// Reference signal file, needed by compare together with --phase
    #[arg(long, value_name = "FILE")]
    pub reference: Option<PathBuf>,
    /// True system taps (WAV or CSV); enables error reporting
    #[arg(long, value_name = "FILE")]
    pub system: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubcommandKind {
    Gen,
    Simulate,
    Recover,
    Compare,
}

/// Where recovery takes its phase curve from.
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseSource {
    File(PathBuf),
    Regenerate,
}

/// Fully validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub subcommand: SubcommandKind,
    pub n: usize,
    pub sample_rate_hz: f64,
    pub band: BandLimits,
    pub sweep: SweepSpec,
    pub seed: u64,
    pub snr_db: f64,
    pub stacks: usize,
    pub taps: usize,
    pub guard_bins: usize,
    pub floor: Option<f64>,
    pub out: PathBuf,
    pub capture: Option<PathBuf>,
    pub phase_source: Option<PhaseSource>,
    pub reference: Option<PathBuf>,
    pub system: Option<PathBuf>,
}

/// Failure of a CLI run, carrying its exit code class.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Invalid(Vec<String>),
    #[error(transparent)]
    Pipeline(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Pipeline(e) => match e {
                Error::ShapeMismatch(_)
                | Error::InvalidBand(_)
                | Error::InvalidDuration(_)
                | Error::InvalidRange(_)
                | Error::InvalidCount(_)
                | Error::InvalidLength(_)
                | Error::InvalidSampleRate(_)
                | Error::InvalidPhase(_)
                | Error::UnsupportedFormat { .. } => 2,
                _ => 1,
            },
        }
    }
}

fn parse_band(s: &str) -> Option<(f64, f64)> {
    let (a, b) = s.split_once(':')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

impl RunConfig {
    /// Validates every field, reporting all problems together.
    pub fn from_args(subcommand: SubcommandKind, a: &SharedArgs) -> Result<Self, CliError> {
        let mut problems = Vec::new();
        let mut num = |name: &str, raw: &str| -> Option<f64> {
            match raw.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => Some(v),
                _ => {
                    problems.push(format!("--{name}: `{raw}` is not a finite number"));
                    None
                }
            }
        };
        let n = num("n", &a.n);
        let rate = num("rate", &a.rate);
        let t = num("t", &a.t);
        let stacks = num("stacks", &a.stacks);
        let taps = num("taps", &a.taps);
        let guard = num("guard-bins", &a.guard_bins);

        let count = |problems: &mut Vec<String>, name: &str, v: Option<f64>, min: f64| {
            v.and_then(|v| {
                if v.fract() != 0.0 || v < min {
                    problems.push(format!("--{name}: {v} must be an integer >= {min}"));
                    None
                } else {
                    Some(v as usize)
                }
            })
        };
        let n = count(&mut problems, "n", n, 2.0);
        if let Some(v) = n {
            if v % 2 != 0 {
                problems.push(format!("--n: {v} must be even"));
            }
        }
        let stacks = count(&mut problems, "stacks", stacks, 1.0);
        let taps = count(&mut problems, "taps", taps, 1.0);
        let guard_bins = count(&mut problems, "guard-bins", guard, 0.0);
        let seed = match a.seed.trim().parse::<u64>() {
            Ok(s) => Some(s),
            Err(_) => {
                problems.push(format!(
                    "--seed: `{}` is not a non-negative integer",
                    a.seed
                ));
                None
            }
        };
        if let (SubcommandKind::Simulate, Some(taps), Some(n)) = (subcommand, taps, n) {
            if taps > n {
                problems.push(format!("--taps: {taps} exceeds --n {n}"));
            }
        }
        let rate = rate.filter(|r| {
            let ok = *r > 0.0;
            if !ok {
                problems.push(format!("--rate: {r} Hz must be positive"));
            }
            ok
        });

        let family = match a.sweep.trim() {
            "linear" => Some(SweepFamily::Linear),
            "exp1" => Some(SweepFamily::ExpTake1),
            "exp2" => Some(SweepFamily::ExpTake2),
            "none" => Some(SweepFamily::Impulse),
            other => {
                problems.push(format!(
                    "--sweep: `{other}` is not one of linear, exp1, exp2, none"
                ));
                None
            }
        };

        let band = match parse_band(&a.band) {
            Some((f_i, f_a)) => {
                let band = BandLimits::new(f_i, f_a);
                if let Some(fs) = rate {
                    if let Err(e) = band.validate(fs) {
                        problems.push(format!("--band: {e}"));
                    }
                }
                if family == Some(SweepFamily::ExpTake1) && f_i <= 0.0 {
                    problems.push("--band: exp1 needs f_i > 0".into());
                }
                Some(band)
            }
            None => {
                problems.push(format!("--band: `{}` is not of the form f_i:f_a", a.band));
                None
            }
        };

        if let Some(t) = t {
            if family != Some(SweepFamily::Impulse) {
                if t <= 0.0 {
                    problems.push(format!("--t: {t} s must be positive"));
                } else if let (Some(n), Some(fs)) = (n, rate) {
                    if t > n as f64 / fs {
                        problems.push(format!(
                            "--t: {t} s exceeds the buffer length N/fs = {} s",
                            n as f64 / fs
                        ));
                    }
                }
            }
        }

        let snr_db = match a.snr.trim() {
            "inf" | "+inf" => Some(f64::INFINITY),
            raw => match raw.parse::<f64>() {
                Ok(v) if v.is_finite() => Some(v),
                _ => {
                    problems.push(format!("--snr: `{raw}` is not a number or inf"));
                    None
                }
            },
        };
        let floor = match a.floor.trim() {
            "none" => Some(None),
            raw => match raw.parse::<f64>() {
                Ok(v) if v.is_finite() && v > 0.0 => Some(Some(v)),
                _ => {
                    problems.push(format!("--floor: `{raw}` is not a positive number or none"));
                    None
                }
            },
        };

        let phase_source = match (&a.phase, a.regenerate) {
            (Some(_), true) => {
                problems.push("--phase and --regenerate are mutually exclusive".into());
                None
            }
            (Some(p), false) => Some(PhaseSource::File(p.clone())),
            (None, true) => Some(PhaseSource::Regenerate),
            (None, false) => None,
        };
        if matches!(
            subcommand,
            SubcommandKind::Recover | SubcommandKind::Compare
        ) {
            if a.capture.is_none() {
                problems.push("--capture is required".into());
            }
            if phase_source.is_none() && !(a.phase.is_some() && a.regenerate) {
                problems.push("one of --phase or --regenerate is required".into());
            }
            if subcommand == SubcommandKind::Compare
                && matches!(phase_source, Some(PhaseSource::File(_)))
                && a.reference.is_none()
            {
                problems.push("compare with --phase also needs --reference".into());
            }
        }

        if !problems.is_empty() {
            return Err(CliError::Invalid(problems));
        }
        let family = family.unwrap();
        Ok(Self {
            subcommand,
            n: n.unwrap(),
            sample_rate_hz: rate.unwrap(),
            band: band.unwrap(),
            sweep: SweepSpec {
                family,
                duration_s: t.unwrap(),
                amplitude_compensation: a.compensate,
            },
            seed: seed.unwrap(),
            snr_db: snr_db.unwrap(),
            stacks: stacks.unwrap(),
            taps: taps.unwrap(),
            guard_bins: guard_bins.unwrap(),
            floor: floor.unwrap(),
            out: a.out.clone(),
            capture: a.capture.clone(),
            phase_source,
            reference: a.reference.clone(),
            system: a.system.clone(),
        })
    }
}

/// Output files collected in a staging directory and moved into the output
/// directory together on [`Staging::commit`]. Dropping without committing
/// removes them.
struct Staging {
    dir: tempfile::TempDir,
    out: PathBuf,
    names: Vec<String>,
}

impl Staging {
    fn new(out: &Path) -> Result<Self, Error> {
        fs::create_dir_all(out)?;
        let dir = tempfile::Builder::new()
            .prefix(".staging-")
            .tempdir_in(out)?;
        Ok(Self {
            dir,
            out: out.to_path_buf(),
            names: Vec::new(),
        })
    }

    fn path(&mut self, name: &str) -> PathBuf {
        self.names.push(name.to_owned());
        self.dir.path().join(name)
    }

    fn signal(&mut self, name: &str, x: &RealSignal) -> Result<(), Error> {
        let path = self.path(name);
        io::write_signal(x, &SignalFile::new(path)?)
    }

    fn text(&mut self, name: &str, body: &str) -> Result<(), Error> {
        let path = self.path(name);
        fs::write(path, body)?;
        Ok(())
    }

    fn commit(self) -> Result<Vec<PathBuf>, Error> {
        let mut done = Vec::new();
        for name in &self.names {
            let dest = self.out.join(name);
            fs::rename(self.dir.path().join(name), &dest)?;
            done.push(dest);
        }
        Ok(done)
    }
}

fn family_name(f: SweepFamily) -> &'static str {
    match f {
        SweepFamily::Impulse => "none",
        SweepFamily::Linear => "linear",
        SweepFamily::ExpTake1 => "exp1",
        SweepFamily::ExpTake2 => "exp2",
    }
}

fn build_reference(cfg: &RunConfig) -> Result<Reference, Error> {
    make_reference(cfg.n, cfg.sample_rate_hz, &cfg.band, &cfg.sweep)
}

fn read_any(path: &Path, rate: f64) -> Result<RealSignal, Error> {
    io::read_signal(&SignalFile::new(path)?, Some(rate))
}

fn write_reference(stage: &mut Staging, reference: &Reference) -> Result<(), Error> {
    stage.signal("reference.wav", &reference.signal)?;
    stage.signal("reference.csv", &reference.signal)?;
    let path = stage.path("phase.csv");
    io::write_phase_csv(&reference.phase, path)
}

/// `gen`: reference signal, its spectrum and its phase curve.
pub fn cmd_gen(cfg: &RunConfig) -> Result<String, CliError> {
    let reference = build_reference(cfg)?;
    let mut stage = Staging::new(&cfg.out)?;
    write_reference(&mut stage, &reference)?;
    let path = stage.path("reference_spectrum.csv");
    io::write_spectrum_csv(&signal::dft(&reference.signal), path)?;
    stage.commit()?;
    Ok(format!(
        "gen: N={} fs={} Hz band={}:{} Hz sweep={} T={} s peak={:.6e} scale={}",
        cfg.n,
        cfg.sample_rate_hz,
        cfg.band.f_i,
        cfg.band.f_a,
        family_name(cfg.sweep.family),
        cfg.sweep.duration_s,
        reference.signal.peak(),
        reference.scale
    ))
}

/// `simulate`: system, reference, clean response, noisy captures and their stack.
pub fn cmd_simulate(cfg: &RunConfig) -> Result<String, CliError> {
    let reference = build_reference(cfg)?;
    let system = random_fir_system(cfg.n, cfg.sample_rate_hz, cfg.taps, cfg.seed)?;
    let clean = force_system(&system, &reference.signal)?;
    let set = CaptureSet::simulate(&clean, cfg.snr_db, cfg.stacks, cfg.seed)?;
    let stacked = stack_captures(&set)?;

    let mut stage = Staging::new(&cfg.out)?;
    stage.signal("system.csv", &system.taps)?;
    stage.signal("system.wav", &system.taps)?;
    write_reference(&mut stage, &reference)?;
    stage.signal("response_clean.csv", &clean)?;
    for (m, c) in set.captures().iter().enumerate() {
        stage.signal(&format!("capture_{m:03}.csv"), c)?;
    }
    stage.signal("response.csv", &stacked)?;
    stage.signal("response.wav", &stacked)?;
    stage.commit()?;

    let residual = stacked.sub(&clean)?.energy();
    Ok(format!(
        "simulate: N={} taps={} seed={} snr={} dB stacks={} system=[{}] residual_energy={:.6e}",
        cfg.n, cfg.taps, cfg.seed, cfg.snr_db, cfg.stacks, system.descriptor, residual
    ))
}

struct Inputs {
    capture: RealSignal,
    phase: PhaseCurve,
    reference: Option<Spectrum>,
    scale: f64,
    system: Option<SystemModel>,
}

fn load_inputs(cfg: &RunConfig) -> Result<Inputs, Error> {
    let capture = read_any(cfg.capture.as_ref().expect("validated"), cfg.sample_rate_hz)?;
    let fs = capture.sample_rate_hz();
    let (phase, reference, scale) = match cfg.phase_source.as_ref().expect("validated") {
        PhaseSource::File(path) => {
            let phase = io::read_phase_csv(path, fs)?;
            let reference = match &cfg.reference {
                Some(p) => {
                    let r = read_any(p, fs)?;
                    signal::check_signals(&r, &capture)?;
                    Some(signal::dft(&r))
                }
                None => None,
            };
            (phase, reference, 1.0)
        }
        PhaseSource::Regenerate => {
            let r = build_reference(cfg)?;
            (r.phase, Some(r.spectrum), r.scale)
        }
    };
    if phase.len() != capture.len() {
        return Err(Error::ShapeMismatch(format!(
            "capture has {} samples, phase curve has {} bins",
            capture.len(),
            phase.len()
        )));
    }
    if phase.sample_rate_hz() != fs {
        return Err(Error::ShapeMismatch(format!(
            "capture at {fs} Hz, phase curve at {} Hz",
            phase.sample_rate_hz()
        )));
    }
    let system = match &cfg.system {
        Some(p) => {
            let taps = read_any(p, fs)?;
            signal::check_signals(&taps, &capture)?;
            Some(SystemModel::new(taps, p.display().to_string())?)
        }
        None => None,
    };
    Ok(Inputs {
        capture,
        phase,
        reference,
        scale,
        system,
    })
}

fn unscale(spectrum: Spectrum, scale: f64) -> Result<Spectrum, Error> {
    if scale == 1.0 {
        return Ok(spectrum);
    }
    let fs = spectrum.sample_rate_hz();
    Spectrum::new(
        spectrum
            .into_bins()
            .into_iter()
            .map(|b| b / scale)
            .collect(),
        fs,
    )
}

/// Per-bin system, model and error magnitudes with the model rescaled by
/// `N/2` into system units.
fn error_trace(system: &Spectrum, model: &Spectrum, band: &BandLimits) -> String {
    let n = system.len();
    let gain = n as f64 / 2.0;
    let mut out = String::from("bin,freq_hz,in_band,system_mag,model_mag,error_mag\n");
    for k in 0..=n / 2 {
        let f = system.bin_frequency(k);
        let h = system.bins()[k];
        let m = model.bins()[k] * gain;
        let _ = writeln!(
            out,
            "{k},{f},{},{},{},{}",
            u8::from(band.contains(f)),
            h.norm(),
            m.norm(),
            (m - h).norm()
        );
    }
    out
}

/// `recover`: impulse model files, plus an error trace when the true system
/// is supplied.
pub fn cmd_recover(cfg: &RunConfig) -> Result<String, CliError> {
    let inputs = load_inputs(cfg)?;
    let mut result = recover_impulse_model(&inputs.capture, &inputs.phase, &cfg.band)?;
    if inputs.scale != 1.0 {
        result.model_spectrum = unscale(result.model_spectrum, inputs.scale)?;
        result.model = signal::idft(&result.model_spectrum)?;
    }
    let mut trace = None;
    if let Some(system) = &inputs.system {
        let h = signal::dft(&system.taps);
        result.score(&h, cfg.guard_bins)?;
        trace = Some(error_trace(&h, &result.model_spectrum, &cfg.band));
    }

    let mut stage = Staging::new(&cfg.out)?;
    stage.signal("model.wav", &result.model)?;
    stage.signal("model.csv", &result.model)?;
    let path = stage.path("model_spectrum.csv");
    io::write_spectrum_csv(&result.model_spectrum, path)?;
    if let Some(trace) = &trace {
        stage.text("error_trace.csv", trace)?;
    }
    stage.commit()?;

    Ok(match result.in_band_error {
        Some(e) => format!("in_band_error={e:e}"),
        None => format!("recover: model written to {}", cfg.out.display()),
    })
}

/// One line of the comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub method: &'static str,
    pub in_band_error: Option<f64>,
    pub max_out_of_band: f64,
    pub finite: bool,
}

pub const COMPARE_CSV_HEADER: &str = "method,in_band_error,max_out_of_band_magnitude,finite";

fn compare_rows(cfg: &RunConfig, inputs: &Inputs) -> Result<Vec<CompareRow>, Error> {
    let reference = inputs
        .reference
        .as_ref()
        .ok_or_else(|| Error::ShapeMismatch("compare needs a reference signal".into()))?;
    let truth = inputs.system.as_ref().map(|s| signal::dft(&s.taps));
    let score = |model: &Spectrum| -> Result<Option<f64>, Error> {
        truth
            .as_ref()
            .map(|h| in_band_error(h, model, &cfg.band, cfg.guard_bins))
            .transpose()
    };

    let mut rows = Vec::new();
    let allpass = recover_impulse_model(&inputs.capture, &inputs.phase, &cfg.band)?;
    let allpass = unscale(allpass.model_spectrum, inputs.scale)?;
    rows.push(CompareRow {
        method: "allpass",
        in_band_error: score(&allpass)?,
        max_out_of_band: max_out_of_band(&allpass, &cfg.band),
        finite: true,
    });

    let y = signal::dft(&inputs.capture);
    let r = reference;
    let mut floors = vec![("naive", None)];
    if let Some(eps) = cfg.floor {
        floors.push(("naive_floor", Some(eps)));
    }
    for (method, floor) in floors {
        rows.push(match naive_deconvolve(&y, r, floor) {
            Ok(h) => CompareRow {
                method,
                in_band_error: score(&band_limit(&h, &cfg.band)?)?,
                max_out_of_band: max_out_of_band(&h, &cfg.band),
                finite: true,
            },
            Err(Error::DivisionBlowup { .. }) => CompareRow {
                method,
                in_band_error: None,
                max_out_of_band: f64::INFINITY,
                finite: false,
            },
            Err(e) => return Err(e),
        });
    }
    Ok(rows)
}

fn rows_csv(rows: &[CompareRow]) -> String {
    let mut out = format!("{COMPARE_CSV_HEADER}\n");
    for row in rows {
        let err = row.in_band_error.map(|e| e.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{err},{},{}",
            row.method, row.max_out_of_band, row.finite
        );
    }
    out
}

/// `compare`: allpass recovery against naive division with and without a floor.
pub fn cmd_compare(cfg: &RunConfig) -> Result<String, CliError> {
    let inputs = load_inputs(cfg)?;
    let rows = compare_rows(cfg, &inputs)?;
    let table = rows_csv(&rows);
    let mut stage = Staging::new(&cfg.out)?;
    stage.text("compare.csv", &table)?;
    stage.commit()?;
    Ok(table.trim_end().to_owned())
}

/// Splices `--key=value` pairs from a `--config` file in front of the
/// user's own flags, so the command line wins.
fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let strings: Vec<String> = args
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let mut path = None;
    for (i, a) in strings.iter().enumerate() {
        if a == "--config" {
            path = strings.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_owned());
        }
    }
    let Some(path) = path else { return Ok(args) };
    let text = fs::read_to_string(&path)
        .map_err(|e| CliError::Invalid(vec![format!("--config {path}: {e}")]))?;
    let mut injected = Vec::new();
    let mut problems = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.split_once('=') {
            Some((k, v)) => {
                let (k, v) = (k.trim(), v.trim());
                match k {
                    "compensate" | "regenerate" => {
                        if v == "true" {
                            injected.push(OsString::from(format!("--{k}")));
                        }
                    }
                    _ => injected.push(OsString::from(format!("--{k}={v}"))),
                }
            }
            None => problems.push(format!(
                "--config {path}: line {}: expected key = value",
                i + 1
            )),
        }
    }
    if !problems.is_empty() {
        return Err(CliError::Invalid(problems));
    }
    // argv[0] and the subcommand come first.
    let split = args.len().min(2);
    let mut merged: Vec<OsString> = args[..split].to_vec();
    merged.extend(injected);
    merged.extend_from_slice(&args[split..]);
    Ok(merged)
}

/// Parses, validates and runs one command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let (sub, shared) = match &cli.command {
        Command::Gen(a) => (SubcommandKind::Gen, a),
        Command::Simulate(a) => (SubcommandKind::Simulate, a),
        Command::Recover(a) => (SubcommandKind::Recover, a),
        Command::Compare(a) => (SubcommandKind::Compare, a),
    };
    let outcome = RunConfig::from_args(sub, shared).and_then(|cfg| match sub {
        SubcommandKind::Gen => cmd_gen(&cfg),
        SubcommandKind::Simulate => cmd_simulate(&cfg),
        SubcommandKind::Recover => cmd_recover(&cfg),
        SubcommandKind::Compare => cmd_compare(&cfg),
    });
    match outcome {
        Ok(summary) => {
            println!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
