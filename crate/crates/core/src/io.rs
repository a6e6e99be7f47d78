//! WAV and CSV persistence for signals, spectra and phase curves.
//!
//! WAV files are canonical RIFF/WAVE: a 16-byte `fmt ` chunk (PCM tag 1 or
//! IEEE-float tag 3) followed by `data`, little-endian, no other chunks and
//! nothing time-dependent, so identical inputs give identical bytes. PCM is
//! scaled by `2^(bits-1) - 1` in both directions, without dither.
//!
//! CSV numbers use Rust's shortest round-trip decimal form, which reparses to
//! the identical `f64`.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::chirp::PhaseCurve;
use crate::error::{Error, Result};
use crate::signal::{bin_frequency, RealSignal, Spectrum};

pub const SIGNAL_CSV_HEADER: &str = "index,time_s,value";
pub const SPECTRUM_CSV_HEADER: &str = "bin,freq_hz,real,imag,magnitude,phase_rad";
pub const PHASE_CSV_HEADER: &str = "bin,freq_hz,phase_rad";

const FORMAT_PCM: u16 = 1;
const FORMAT_FLOAT: u16 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalFormat {
    WavPcm16,
    WavPcm24,
    WavFloat32,
    Csv,
}

/// A signal file location, its container format and the channel to read.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalFile {
    pub path: PathBuf,
    pub format: SignalFormat,
    pub channel: usize,
}

impl SignalFile {
    /// Infers the format from the extension: `.csv` is CSV, `.wav` is 32-bit
    /// float WAV (reads honour whatever the header says).
    pub fn new(path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase);
        let format = match ext.as_deref() {
            Some("csv") => SignalFormat::Csv,
            Some("wav") => SignalFormat::WavFloat32,
            _ => {
                return Err(Error::UnsupportedFormat {
                    path,
                    message: "expected a .wav or .csv extension".into(),
                })
            }
        };
        Ok(Self {
            path,
            format,
            channel: 0,
        })
    }

    pub fn with_format(mut self, format: SignalFormat) -> Self {
        self.format = format;
        self
    }

    pub fn with_channel(mut self, channel: usize) -> Self {
        self.channel = channel;
        self
    }
}

fn parse_err(path: &Path, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

/// Writes a mono signal.
pub fn write_signal(x: &RealSignal, file: &SignalFile) -> Result<()> {
    let bytes = match file.format {
        SignalFormat::Csv => signal_csv(x).into_bytes(),
        SignalFormat::WavPcm16 => encode_wav(x, WavEncoding::Pcm16)?,
        SignalFormat::WavPcm24 => encode_wav(x, WavEncoding::Pcm24)?,
        SignalFormat::WavFloat32 => encode_wav(x, WavEncoding::Float32)?,
    };
    fs::write(&file.path, bytes)?;
    Ok(())
}

/// Reads one channel of a signal. CSV carries no sample rate, so
/// `csv_rate_hz` must be supplied for CSV input; it is ignored for WAV.
pub fn read_signal(file: &SignalFile, csv_rate_hz: Option<f64>) -> Result<RealSignal> {
    let bytes = fs::read(&file.path)?;
    match file.format {
        SignalFormat::Csv => {
            let rate = csv_rate_hz.ok_or_else(|| Error::UnsupportedFormat {
                path: file.path.clone(),
                message: "CSV signals need an explicit sample rate".into(),
            })?;
            let text =
                String::from_utf8(bytes).map_err(|_| parse_err(&file.path, "file is not UTF-8"))?;
            parse_signal_csv(&text, rate, &file.path)
        }
        _ => decode_wav(&bytes, file.channel, &file.path),
    }
}

fn signal_csv(x: &RealSignal) -> String {
    let mut out = String::with_capacity(32 * x.len());
    out.push_str(SIGNAL_CSV_HEADER);
    out.push('\n');
    let fs = x.sample_rate_hz();
    for (i, v) in x.samples().iter().enumerate() {
        out.push_str(&format!("{i},{},{v}\n", i as f64 / fs));
    }
    out
}

fn parse_signal_csv(text: &str, rate: f64, path: &Path) -> Result<RealSignal> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == SIGNAL_CSV_HEADER => {}
        _ => {
            return Err(parse_err(
                path,
                format!("row 1: expected header `{SIGNAL_CSV_HEADER}`"),
            ))
        }
    }
    let mut samples = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let row = i + 1;
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 3 {
            return Err(parse_err(
                path,
                format!("row {row}: expected 3 columns, found {}", cells.len()),
            ));
        }
        let value: f64 = cells[2]
            .trim()
            .parse()
            .map_err(|_| parse_err(path, format!("row {row}: `{}` is not a number", cells[2])))?;
        samples.push(value);
    }
    RealSignal::new(samples, rate)
}

/// Writes bins `0..=N/2` of a spectrum.
pub fn write_spectrum_csv(x: &Spectrum, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "{SPECTRUM_CSV_HEADER}")?;
    for k in 0..=x.len() / 2 {
        let b = x.bins()[k];
        writeln!(
            w,
            "{k},{},{},{},{},{}",
            x.bin_frequency(k),
            b.re,
            b.im,
            b.norm(),
            b.arg()
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Writes all `N` bins of a phase curve.
pub fn write_phase_csv(curve: &PhaseCurve, path: impl AsRef<Path>) -> Result<()> {
    let n = curve.len();
    let fs = curve.sample_rate_hz();
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "{PHASE_CSV_HEADER}")?;
    for (k, p) in curve.phase().iter().enumerate() {
        writeln!(w, "{k},{},{p}", signed_bin_frequency(k, n, fs))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a phase curve written by [`write_phase_csv`].
pub fn read_phase_csv(path: impl AsRef<Path>, sample_rate_hz: f64) -> Result<PhaseCurve> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == PHASE_CSV_HEADER => {}
        _ => {
            return Err(parse_err(
                path,
                format!("row 1: expected header `{PHASE_CSV_HEADER}`"),
            ))
        }
    }
    let mut phase = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let row = i + 1;
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 3 {
            return Err(parse_err(
                path,
                format!("row {row}: expected 3 columns, found {}", cells.len()),
            ));
        }
        let bin: usize = cells[0]
            .trim()
            .parse()
            .map_err(|_| parse_err(path, format!("row {row}: bad bin index `{}`", cells[0])))?;
        if bin != phase.len() {
            return Err(parse_err(
                path,
                format!("row {row}: expected bin {}, found {bin}", phase.len()),
            ));
        }
        let p: f64 = cells[2]
            .trim()
            .parse()
            .map_err(|_| parse_err(path, format!("row {row}: `{}` is not a number", cells[2])))?;
        phase.push(p);
    }
    PhaseCurve::new(phase, sample_rate_hz)
}

/// Frequency column value for bin `k` on an `n`-point grid, mirrored bins
/// reported as negative frequencies.
pub fn signed_bin_frequency(k: usize, n: usize, sample_rate_hz: f64) -> f64 {
    if k <= n / 2 {
        bin_frequency(k, n, sample_rate_hz)
    } else {
        -bin_frequency(n - k, n, sample_rate_hz)
    }
}

#[derive(Debug, Clone, Copy)]
enum WavEncoding {
    Pcm16,
    Pcm24,
    Float32,
}

impl WavEncoding {
    fn bits(self) -> u16 {
        match self {
            Self::Pcm16 => 16,
            Self::Pcm24 => 24,
            Self::Float32 => 32,
        }
    }

    fn tag(self) -> u16 {
        match self {
            Self::Float32 => FORMAT_FLOAT,
            _ => FORMAT_PCM,
        }
    }
}

fn pcm_full_scale(bits: u16) -> f64 {
    ((1i64 << (bits - 1)) - 1) as f64
}

fn encode_wav(x: &RealSignal, enc: WavEncoding) -> Result<Vec<u8>> {
    let bits = enc.bits();
    if !matches!(enc, WavEncoding::Float32) {
        if let Some((index, &value)) = x.samples().iter().enumerate().find(|(_, v)| v.abs() > 1.0) {
            return Err(Error::Clipping { index, value });
        }
    }
    let rate = x.sample_rate_hz();
    if rate.fract() != 0.0 || rate > u32::MAX as f64 {
        return Err(Error::InvalidSampleRate(rate));
    }
    let rate = rate as u32;
    let block_align = bits / 8;
    let data_len = x.len() as u32 * block_align as u32;

    let mut out = Vec::with_capacity(44 + data_len as usize);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&enc.tag().to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&rate.to_le_bytes());
    out.extend_from_slice(&(rate * block_align as u32).to_le_bytes());
    out.extend_from_slice(&block_align.to_le_bytes());
    out.extend_from_slice(&bits.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());

    let scale = pcm_full_scale(bits);
    for &v in x.samples() {
        match enc {
            WavEncoding::Float32 => out.extend_from_slice(&(v as f32).to_le_bytes()),
            WavEncoding::Pcm16 => {
                out.extend_from_slice(&((v * scale).round() as i16).to_le_bytes())
            }
            WavEncoding::Pcm24 => {
                let q = (v * scale).round() as i32;
                out.extend_from_slice(&q.to_le_bytes()[..3]);
            }
        }
    }
    Ok(out)
}

struct WavFormat {
    tag: u16,
    channels: u16,
    rate: u32,
    bits: u16,
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

fn decode_wav(bytes: &[u8], channel: usize, path: &Path) -> Result<RealSignal> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(parse_err(path, "missing RIFF/WAVE header"));
    }
    let mut pos = 12;
    let mut format: Option<WavFormat> = None;
    let mut data: Option<&[u8]> = None;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32_at(bytes, pos + 4) as usize;
        let body_start = pos + 8;
        let available = bytes.len() - body_start;
        let name = String::from_utf8_lossy(id).into_owned();
        if size > available {
            return Err(parse_err(
                path,
                format!(
                    "`{}` chunk truncated: declares {size} bytes, {available} present",
                    name.trim_end()
                ),
            ));
        }
        let body = &bytes[body_start..body_start + size];
        match id {
            b"fmt " => {
                if size < 16 {
                    return Err(parse_err(path, "`fmt` chunk shorter than 16 bytes"));
                }
                format = Some(WavFormat {
                    tag: u16_at(body, 0),
                    channels: u16_at(body, 2),
                    rate: u32_at(body, 4),
                    bits: u16_at(body, 14),
                });
            }
            b"data" => data = Some(body),
            _ => {}
        }
        pos = body_start + size + (size & 1);
    }
    let format = format.ok_or_else(|| parse_err(path, "no `fmt` chunk"))?;
    let data = data.ok_or_else(|| parse_err(path, "no `data` chunk"))?;

    let unsupported = |message: String| Error::UnsupportedFormat {
        path: path.to_path_buf(),
        message,
    };
    let width = match (format.tag, format.bits) {
        (FORMAT_PCM, 16) => 2,
        (FORMAT_PCM, 24) => 3,
        (FORMAT_PCM, 32) | (FORMAT_FLOAT, 32) => 4,
        (FORMAT_FLOAT, 64) => 8,
        (tag, bits) => {
            return Err(unsupported(format!(
                "format tag {tag} with {bits} bits per sample"
            )))
        }
    };
    let channels = format.channels as usize;
    if channels == 0 {
        return Err(parse_err(path, "`fmt` chunk declares zero channels"));
    }
    if channel >= channels {
        return Err(unsupported(format!(
            "channel {channel} requested, file has {channels}"
        )));
    }
    let frame = width * channels;
    if data.len() % frame != 0 {
        return Err(parse_err(
            path,
            format!(
                "`data` chunk length {} is not a whole number of {frame}-byte frames",
                data.len()
            ),
        ));
    }
    let scale = pcm_full_scale(format.bits);
    let samples = data
        .chunks_exact(frame)
        .map(|f| {
            let s = &f[channel * width..(channel + 1) * width];
            match (format.tag, width) {
                (FORMAT_FLOAT, 4) => f32::from_le_bytes([s[0], s[1], s[2], s[3]]) as f64,
                (FORMAT_FLOAT, 8) => f64::from_le_bytes(s.try_into().unwrap()),
                (_, 2) => i16::from_le_bytes([s[0], s[1]]) as f64 / scale,
                (_, 3) => (i32::from_le_bytes([0, s[0], s[1], s[2]]) >> 8) as f64 / scale,
                _ => i32::from_le_bytes([s[0], s[1], s[2], s[3]]) as f64 / scale,
            }
        })
        .collect();
    RealSignal::new(samples, format.rate as f64)
}
