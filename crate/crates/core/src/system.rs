//! Simulated systems and captures: seeded random FIR systems, circular
//! forcing `Y = HR`, white measurement noise at a set SNR, and stacking.
//!
//! # Random streams
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)` (rand_chacha
//! 0.9). Systems draw from stream [`SYSTEM_STREAM`], noise from stream
//! [`NOISE_STREAM`], so one seed can drive both without overlap. Each normal
//! variate consumes two uniforms `u1, u2` from `rng.random::<f64>()` and is
//! `sqrt(-2 ln(1 - u1)) * cos(2π u2)` (the cosine half of Box-Muller).
//! Capture `m` of a stacked set uses seed [`capture_seed`]`(base, m)`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::signal::{self, check_signals, RealSignal};

pub const SYSTEM_STREAM: u64 = 0;
pub const NOISE_STREAM: u64 = 1;

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random();
    let u2: f64 = rng.random();
    (-2.0 * (1.0 - u1).ln()).sqrt() * (2.0 * PI * u2).cos()
}

/// Seed for capture `index` of a stack driven by `base`.
pub fn capture_seed(base: u64, index: usize) -> u64 {
    base.wrapping_add(1 + index as u64)
}

/// FIR taps zero-padded to the analysis length, plus where they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemModel {
    pub taps: RealSignal,
    pub descriptor: String,
}

impl SystemModel {
    pub fn new(taps: RealSignal, descriptor: impl Into<String>) -> Result<Self> {
        if taps.samples().iter().all(|x| *x == 0.0) {
            return Err(Error::ZeroSignal);
        }
        Ok(Self {
            taps,
            descriptor: descriptor.into(),
        })
    }
}

/// Random wideband system: the first `active_taps` coefficients are standard
/// normal draws, the rest zero, scaled to unit energy.
pub fn random_fir_system(
    n: usize,
    sample_rate_hz: f64,
    active_taps: usize,
    seed: u64,
) -> Result<SystemModel> {
    if active_taps == 0 || active_taps > n {
        return Err(Error::InvalidCount(format!(
            "active taps {active_taps} must lie in 1..={n}"
        )));
    }
    let mut rng = rng_for(seed, SYSTEM_STREAM);
    let mut taps = vec![0.0; n];
    for t in taps.iter_mut().take(active_taps) {
        *t = standard_normal(&mut rng);
    }
    let norm = taps.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroSignal);
    }
    taps.iter_mut().for_each(|x| *x /= norm);
    SystemModel::new(
        RealSignal::new(taps, sample_rate_hz)?,
        format!("chacha8 normal, seed={seed}, active_taps={active_taps}"),
    )
}

/// Forced response `y = idft(dft(h) · dft(r))`, a circular convolution.
pub fn force_system(system: &SystemModel, reference: &RealSignal) -> Result<RealSignal> {
    check_signals(&system.taps, reference)?;
    let product = signal::multiply(&signal::dft(&system.taps), &signal::dft(reference))?;
    signal::idft(&product)
}

/// Adds white noise scaled so that `10 log10(E_y / E_w)` equals `snr_db`
/// exactly. `snr_db = +inf` returns `y` unchanged.
pub fn add_noise(y: &RealSignal, snr_db: f64, seed: u64) -> Result<RealSignal> {
    if snr_db == f64::INFINITY {
        return Ok(y.clone());
    }
    if !snr_db.is_finite() {
        return Err(Error::InvalidRange(format!("SNR {snr_db} dB")));
    }
    let signal_energy = y.energy();
    if signal_energy == 0.0 {
        return Err(Error::ZeroSignal);
    }
    let mut rng = rng_for(seed, NOISE_STREAM);
    let noise: Vec<f64> = (0..y.len()).map(|_| standard_normal(&mut rng)).collect();
    let noise_energy: f64 = noise.iter().map(|w| w * w).sum();
    let gain = (signal_energy / 10f64.powf(snr_db / 10.0) / noise_energy).sqrt();
    RealSignal::new(
        y.samples()
            .iter()
            .zip(&noise)
            .map(|(s, w)| s + gain * w)
            .collect(),
        y.sample_rate_hz(),
    )
}

/// Repeated captures of one measurement, all with the same length and rate.
#[derive(Debug, Clone, PartialEq)]
pub struct CaptureSet {
    captures: Vec<RealSignal>,
    snr_db: Option<f64>,
}

impl CaptureSet {
    pub fn new(captures: Vec<RealSignal>, snr_db: Option<f64>) -> Result<Self> {
        let first = captures.first().ok_or(Error::EmptySet)?;
        for c in &captures[1..] {
            check_signals(first, c)?;
        }
        Ok(Self { captures, snr_db })
    }

    /// `count` noisy copies of `y`, capture `m` seeded by
    /// [`capture_seed`]`(base_seed, m)`.
    pub fn simulate(y: &RealSignal, snr_db: f64, count: usize, base_seed: u64) -> Result<Self> {
        let captures = (0..count)
            .map(|m| add_noise(y, snr_db, capture_seed(base_seed, m)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(captures, Some(snr_db).filter(|s| s.is_finite()))
    }

    pub fn captures(&self) -> &[RealSignal] {
        &self.captures
    }

    pub fn snr_db(&self) -> Option<f64> {
        self.snr_db
    }

    pub fn len(&self) -> usize {
        self.captures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.captures.is_empty()
    }
}

/// Sample-wise mean of the captures.
pub fn stack_captures(set: &CaptureSet) -> Result<RealSignal> {
    let first = set.captures.first().ok_or(Error::EmptySet)?;
    if set.captures.len() == 1 {
        return Ok(first.clone());
    }
    let mut acc = vec![0.0; first.len()];
    for c in &set.captures {
        for (a, s) in acc.iter_mut().zip(c.samples()) {
            *a += s;
        }
    }
    let m = set.captures.len() as f64;
    acc.iter_mut().for_each(|a| *a /= m);
    RealSignal::new(acc, first.sample_rate_hz())
}
