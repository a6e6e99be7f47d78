//! Impulse-model recovery by inverse allpass filtering, the naive
//! spectral-division baseline, and the in-band error metric.
//!
//! With `r` built as `R = Δ e^{jφ}` and `Y = H R`, removing the phase gives
//! `Ĥ = Y e^{-jφ} = H Δ`: the system seen through the band-limited impulse.
//! Nothing is divided, so bins where the reference has no power simply stay
//! at whatever the capture holds there.

use num_complex::Complex64;

use crate::chirp::{apply_allpass, invert_phase, PhaseCurve};
use crate::error::{Error, Result};
use crate::impulse::{band_limited_impulse, BandLimits};
use crate::signal::{self, check_spectra, RealSignal, Spectrum};

/// Guard bins trimmed from each band edge by default when scoring.
pub const DEFAULT_GUARD_BINS: usize = 2;

/// Recovered impulse model in both domains.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryResult {
    pub model: RealSignal,
    pub model_spectrum: Spectrum,
    pub band: BandLimits,
    /// Set by [`RecoveryResult::score`] when the true system is known.
    pub in_band_error: Option<f64>,
}

impl RecoveryResult {
    /// Scores the model against the true system spectrum.
    pub fn score(&mut self, system: &Spectrum, guard_bins: usize) -> Result<f64> {
        let e = in_band_error(system, &self.model_spectrum, &self.band, guard_bins)?;
        self.in_band_error = Some(e);
        Ok(e)
    }
}

/// `Ĥ = dft(y) · e^{-jφ}`.
pub fn recover_impulse_model(
    capture: &RealSignal,
    phase: &PhaseCurve,
    band: &BandLimits,
) -> Result<RecoveryResult> {
    band.validate(capture.sample_rate_hz())?;
    let model_spectrum = apply_allpass(&signal::dft(capture), &invert_phase(phase))?;
    let model = signal::idft(&model_spectrum)?;
    Ok(RecoveryResult {
        model,
        model_spectrum,
        band: *band,
        in_band_error: None,
    })
}

/// Bin-wise `Y / R`.
///
/// With `floor = None` any zero-magnitude reference bin is an error listing
/// every such bin. With `floor = Some(ε)` denominators smaller than `ε` in
/// magnitude are raised to `ε`, keeping their phase (zero bins become `ε`).
pub fn naive_deconvolve(
    captured: &Spectrum,
    reference: &Spectrum,
    floor: Option<f64>,
) -> Result<Spectrum> {
    check_spectra(captured, reference)?;
    let bins = match floor {
        None => {
            let dead: Vec<usize> = reference
                .bins()
                .iter()
                .enumerate()
                .filter(|(_, r)| r.norm() == 0.0)
                .map(|(k, _)| k)
                .collect();
            if !dead.is_empty() {
                return Err(Error::DivisionBlowup { bins: dead });
            }
            captured
                .bins()
                .iter()
                .zip(reference.bins())
                .map(|(y, r)| y / r)
                .collect::<Vec<_>>()
        }
        Some(eps) => {
            if !(eps.is_finite() && eps > 0.0) {
                return Err(Error::InvalidRange(format!("division floor {eps}")));
            }
            captured
                .bins()
                .iter()
                .zip(reference.bins())
                .map(|(y, r)| {
                    let mag = r.norm();
                    let denom = if mag >= eps {
                        *r
                    } else if mag == 0.0 {
                        Complex64::new(eps, 0.0)
                    } else {
                        r * (eps / mag)
                    };
                    y / denom
                })
                .collect()
        }
    };
    // Overflow to inf is still possible with a tiny floor.
    Spectrum::new(bins, captured.sample_rate_hz()).map_err(|e| match e {
        Error::NonFinite(k) => Error::DivisionBlowup { bins: vec![k] },
        other => other,
    })
}

/// Multiplies a spectrum by the band-limited impulse `Δ`, putting a naive
/// `H` estimate in the same units as an allpass-recovered `HΔ`.
pub fn band_limit(spectrum: &Spectrum, band: &BandLimits) -> Result<Spectrum> {
    let delta = band_limited_impulse(spectrum.len(), spectrum.sample_rate_hz(), band)?;
    signal::multiply(spectrum, &delta)
}

/// Positive-frequency bins scored by [`in_band_error`]: the in-band range
/// shrunk by `guard_bins` at each end.
pub fn scored_bins(
    n: usize,
    sample_rate_hz: f64,
    band: &BandLimits,
    guard_bins: usize,
) -> Result<std::ops::RangeInclusive<usize>> {
    band.validate(sample_rate_hz)?;
    let (lo, hi) = band.bin_range(n, sample_rate_hz).ok_or(Error::EmptyBand)?;
    let lo = lo + guard_bins;
    let hi = hi.checked_sub(guard_bins).ok_or(Error::EmptyBand)?;
    if lo > hi {
        return Err(Error::EmptyBand);
    }
    Ok(lo..=hi)
}

/// Max over scored bins of `|Ĥ[k] - H[k]Δ[k]|`, divided by the max of
/// `|H[k]Δ[k]|` over the same bins. Out-of-band bins are ignored.
pub fn in_band_error(
    system: &Spectrum,
    model: &Spectrum,
    band: &BandLimits,
    guard_bins: usize,
) -> Result<f64> {
    check_spectra(system, model)?;
    let n = system.len();
    let bins = scored_bins(n, system.sample_rate_hz(), band, guard_bins)?;
    let amplitude = 2.0 / n as f64;
    let mut worst: f64 = 0.0;
    let mut peak: f64 = 0.0;
    for k in bins {
        let target = system.bins()[k] * amplitude;
        worst = worst.max((model.bins()[k] - target).norm());
        peak = peak.max(target.norm());
    }
    if peak == 0.0 {
        return Ok(if worst == 0.0 { 0.0 } else { f64::INFINITY });
    }
    Ok(worst / peak)
}

/// Largest magnitude over positive-frequency bins outside the band.
pub fn max_out_of_band(spectrum: &Spectrum, band: &BandLimits) -> f64 {
    let n = spectrum.len();
    (0..=n / 2)
        .filter(|&k| !band.contains(spectrum.bin_frequency(k)))
        .map(|k| spectrum.bins()[k].norm())
        .fold(0.0, f64::max)
}
