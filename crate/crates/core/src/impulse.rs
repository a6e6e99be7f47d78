//! Zero-phase band-limited impulse.
//!
//! Every bin whose frequency lies in `[f_i, f_a]` (edges inclusive) holds the
//! real value `2/N`; every other bin is zero. There is no transition band, so
//! the edges snap to the bin grid by plain comparison.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::signal::{self, bin_frequency, RealSignal, Spectrum};

/// Passband edges in Hz: `f_i` (lowest) and `f_a` (highest).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandLimits {
    pub f_i: f64,
    pub f_a: f64,
}

impl BandLimits {
    pub fn new(f_i: f64, f_a: f64) -> Self {
        Self { f_i, f_a }
    }

    /// Full band `[0, fs/2]`.
    pub fn full(sample_rate_hz: f64) -> Self {
        Self::new(0.0, sample_rate_hz / 2.0)
    }

    /// Checks `0 <= f_i < f_a <= fs/2`.
    pub fn validate(&self, sample_rate_hz: f64) -> Result<()> {
        let nyquist = sample_rate_hz / 2.0;
        if !(self.f_i.is_finite() && self.f_a.is_finite()) {
            return Err(Error::InvalidBand("band edges must be finite".into()));
        }
        if self.f_i < 0.0 {
            return Err(Error::InvalidBand(format!(
                "f_i = {} Hz is negative",
                self.f_i
            )));
        }
        if self.f_i >= self.f_a {
            return Err(Error::InvalidBand(format!(
                "f_i = {} Hz must be below f_a = {} Hz",
                self.f_i, self.f_a
            )));
        }
        if self.f_a > nyquist {
            return Err(Error::InvalidBand(format!(
                "f_a = {} Hz exceeds fs/2 = {} Hz",
                self.f_a, nyquist
            )));
        }
        Ok(())
    }

    pub fn contains(&self, f: f64) -> bool {
        self.f_i <= f && f <= self.f_a
    }

    /// Inclusive range of positive-frequency bins inside the band, or `None`
    /// when the band falls between two grid points.
    pub fn bin_range(&self, n: usize, sample_rate_hz: f64) -> Option<(usize, usize)> {
        let half = n / 2;
        let lo = (0..=half).find(|&k| self.contains(bin_frequency(k, n, sample_rate_hz)))?;
        let hi = (lo..=half)
            .rev()
            .find(|&k| self.contains(bin_frequency(k, n, sample_rate_hz)))?;
        Some((lo, hi))
    }
}

/// Per-bin in-band mask over the full `N`-bin grid, negative frequencies mirrored.
pub fn band_mask(n: usize, sample_rate_hz: f64, band: &BandLimits) -> Vec<bool> {
    let half = n / 2;
    (0..n)
        .map(|k| {
            let m = if k <= half { k } else { n - k };
            band.contains(bin_frequency(m, n, sample_rate_hz))
        })
        .collect()
}

/// The zero-phase band-limited impulse spectrum.
pub fn band_limited_impulse(n: usize, sample_rate_hz: f64, band: &BandLimits) -> Result<Spectrum> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidLength(n));
    }
    if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
        return Err(Error::InvalidSampleRate(sample_rate_hz));
    }
    band.validate(sample_rate_hz)?;
    let amplitude = 2.0 / n as f64;
    let bins = band_mask(n, sample_rate_hz, band)
        .into_iter()
        .map(|inside| Complex64::new(if inside { amplitude } else { 0.0 }, 0.0))
        .collect();
    Spectrum::new(bins, sample_rate_hz)
}

/// Time-domain band-limited impulse, circularly centred on sample 0.
pub fn time_domain_impulse(n: usize, sample_rate_hz: f64, band: &BandLimits) -> Result<RealSignal> {
    signal::idft(&band_limited_impulse(n, sample_rate_hz, band)?)
}
