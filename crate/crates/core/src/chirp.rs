//! Allpass phase design: the linear chirp, the two exponential sweep laws,
//! applying and inverting a phase curve, and the reference signal built by
//! chirping the band-limited impulse.
//!
//! A [`PhaseCurve`] holds one phase value per DFT bin. Its group delay
//! `tau(f) = -(1/2π) dφ/df` says when each frequency arrives in time, so a
//! curve whose group delay rises linearly across the band turns the
//! zero-phase impulse into a linear chirp. Multiplying by `e^{jφ}` never
//! changes a bin's magnitude, and multiplying by `e^{-jφ}` undoes it exactly.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::impulse::{self, BandLimits};
use crate::signal::{self, bin_frequency, RealSignal, Spectrum};

const PHASE_TOL: f64 = 1e-9;

/// Per-bin allpass phase in radians.
///
/// Invariants: `phase[0] ≡ 0` and `phase[N/2] ∈ {0, π}` (mod 2π), and
/// `phase[N-k] = -phase[k]`, so `e^{jφ}` is the spectrum of a real filter.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseCurve {
    phase: Vec<f64>,
    sample_rate_hz: f64,
}

impl PhaseCurve {
    pub fn new(phase: Vec<f64>, sample_rate_hz: f64) -> Result<Self> {
        let n = phase.len();
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::InvalidLength(n));
        }
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::InvalidSampleRate(sample_rate_hz));
        }
        if let Some(i) = phase.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let off_multiple = |p: f64, period: f64| {
            let r = p / period;
            (r - r.round()).abs() * period > PHASE_TOL * p.abs().max(1.0)
        };
        if off_multiple(phase[0], 2.0 * PI) {
            return Err(Error::InvalidPhase(format!(
                "DC phase {} is not a multiple of 2π",
                phase[0]
            )));
        }
        if off_multiple(phase[n / 2], PI) {
            return Err(Error::InvalidPhase(format!(
                "Nyquist phase {} is not a multiple of π",
                phase[n / 2]
            )));
        }
        for k in 1..n / 2 {
            let dev = (phase[n - k] + phase[k]).abs();
            if dev > PHASE_TOL * phase[k].abs().max(1.0) {
                return Err(Error::InvalidPhase(format!(
                    "bins {k} and {} are not odd-symmetric",
                    n - k
                )));
            }
        }
        Ok(Self {
            phase,
            sample_rate_hz,
        })
    }

    pub fn zeros(n: usize, sample_rate_hz: f64) -> Result<Self> {
        Self::new(vec![0.0; n], sample_rate_hz)
    }

    /// Builds a curve from a phase law `phase_at(k)` evaluated on bins
    /// `0..=N/2`. The Nyquist value snaps to the nearest multiple of π and
    /// the negative-frequency bins are filled by odd extension.
    pub fn from_positive_bins(
        n: usize,
        sample_rate_hz: f64,
        mut phase_at: impl FnMut(usize) -> f64,
    ) -> Result<Self> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::InvalidLength(n));
        }
        let half = n / 2;
        let mut phase = vec![0.0; n];
        for k in 1..half {
            let p = phase_at(k);
            phase[k] = p;
            phase[n - k] = -p;
        }
        phase[0] = 0.0;
        phase[half] = (phase_at(half) / PI).round() * PI;
        Self::new(phase, sample_rate_hz)
    }

    pub fn phase(&self) -> &[f64] {
        &self.phase
    }

    pub fn len(&self) -> usize {
        self.phase.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phase.is_empty()
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    /// Unit-magnitude multiplier `e^{jφ[k]}`. DC and Nyquist come out
    /// exactly real.
    fn phasor(&self, k: usize) -> Complex64 {
        let p = self.phase[k];
        if k == 0 || k == self.len() / 2 {
            let sign = if ((p / PI).round() as i64).rem_euclid(2) == 0 {
                1.0
            } else {
                -1.0
            };
            Complex64::new(sign, 0.0)
        } else {
            let (s, c) = p.sin_cos();
            Complex64::new(c, s)
        }
    }
}

/// Quadratic-in-frequency allpass phase whose group delay rises linearly
/// from 0 at `f_i` to `duration_s` at `f_a`. Below the band the phase is 0;
/// above it the group delay stays at `duration_s`.
pub fn linear_chirp_phase(
    n: usize,
    sample_rate_hz: f64,
    band: &BandLimits,
    duration_s: f64,
) -> Result<PhaseCurve> {
    band.validate(sample_rate_hz)?;
    check_duration(n, sample_rate_hz, duration_s)?;
    let width = band.f_a - band.f_i;
    let top = -PI * duration_s * width;
    PhaseCurve::from_positive_bins(n, sample_rate_hz, |k| {
        let f = bin_frequency(k, n, sample_rate_hz);
        if f < band.f_i {
            0.0
        } else if f <= band.f_a {
            let d = f - band.f_i;
            -PI * duration_s * d * d / width
        } else {
            top - 2.0 * PI * duration_s * (f - band.f_a)
        }
    })
}

fn check_duration(n: usize, sample_rate_hz: f64, duration_s: f64) -> Result<()> {
    let span = n as f64 / sample_rate_hz;
    if !(duration_s.is_finite() && duration_s > 0.0) {
        return Err(Error::InvalidDuration(format!(
            "T = {duration_s} s must be positive"
        )));
    }
    if duration_s > span {
        return Err(Error::InvalidDuration(format!(
            "T = {duration_s} s exceeds the buffer length N/fs = {span} s"
        )));
    }
    Ok(())
}

/// Exponential frequency laws, defined in continuous time `t ∈ [0, T]` with
/// angular frequencies in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExponentialSweep {
    /// `ω(t) = ω_i (ω_a/ω_i)^{t/T}`.
    Take1 {
        omega_i: f64,
        omega_a: f64,
        duration_s: f64,
    },
    /// `ω(t) = (ω_a + 1)^{t/T} - 1`, starting at DC.
    Take2 { omega_a: f64, duration_s: f64 },
}

impl ExponentialSweep {
    pub fn duration_s(&self) -> f64 {
        match *self {
            Self::Take1 { duration_s, .. } | Self::Take2 { duration_s, .. } => duration_s,
        }
    }

    pub fn omega_a(&self) -> f64 {
        match *self {
            Self::Take1 { omega_a, .. } | Self::Take2 { omega_a, .. } => omega_a,
        }
    }

    /// Checks the law against a sample rate and buffer length.
    pub fn validate(&self, n: usize, sample_rate_hz: f64) -> Result<()> {
        let nyquist = PI * sample_rate_hz;
        match *self {
            Self::Take1 {
                omega_i, omega_a, ..
            } => {
                if !(omega_i > 0.0 && omega_i < omega_a && omega_a <= nyquist) {
                    return Err(Error::InvalidRange(format!(
                        "need 0 < ω_i < ω_a <= π·fs, got ω_i = {omega_i}, ω_a = {omega_a}, π·fs = {nyquist}"
                    )));
                }
            }
            Self::Take2 { omega_a, .. } => {
                if !(omega_a > 0.0 && omega_a <= nyquist) {
                    return Err(Error::InvalidRange(format!(
                        "need 0 < ω_a <= π·fs, got ω_a = {omega_a}, π·fs = {nyquist}"
                    )));
                }
            }
        }
        check_duration(n, sample_rate_hz, self.duration_s())
    }

    /// Growth base and its logarithm: `(ω_a/ω_i, ln)` or `(ω_a+1, ln)`.
    fn base(&self) -> (f64, f64) {
        let b = match *self {
            Self::Take1 {
                omega_i, omega_a, ..
            } => omega_a / omega_i,
            Self::Take2 { omega_a, .. } => omega_a + 1.0,
        };
        (b, b.ln())
    }

    /// Instantaneous angular frequency at time `t`.
    pub fn frequency(&self, t: f64) -> f64 {
        let (b, _) = self.base();
        let g = b.powf(t / self.duration_s());
        match *self {
            Self::Take1 { omega_i, .. } => omega_i * g,
            Self::Take2 { .. } => g - 1.0,
        }
    }

    /// Integrated phase with the constant chosen so that phase(0) = 0.
    pub fn phase(&self, t: f64) -> f64 {
        let (_, ln_b) = self.base();
        let tt = self.duration_s();
        // growth - 1, computed without cancellation near t = 0
        let rise = (ln_b * t / tt).exp_m1();
        match *self {
            Self::Take1 { omega_i, .. } => omega_i * tt / ln_b * rise,
            Self::Take2 { .. } => tt / ln_b * rise - t,
        }
    }

    /// Raw amplitude term `(dω/dt)^{-1}`.
    pub fn raw_amplitude(&self, t: f64) -> f64 {
        let (b, ln_b) = self.base();
        let tt = self.duration_s();
        let decay = b.powf(-t / tt);
        match *self {
            Self::Take1 { omega_i, .. } => tt / (omega_i * ln_b) * decay,
            Self::Take2 { .. } => tt / ln_b * decay,
        }
    }

    /// `raw_amplitude` scaled to a unit maximum (reached at t = 0).
    pub fn amplitude(&self, t: f64) -> f64 {
        self.raw_amplitude(t) / self.raw_amplitude(0.0)
    }

    /// Time at which the sweep passes angular frequency `omega`, clamped to
    /// `[0, T]`.
    pub fn group_delay(&self, omega: f64) -> f64 {
        let (_, ln_b) = self.base();
        let tt = self.duration_s();
        let t = match *self {
            Self::Take1 { omega_i, .. } => {
                if omega <= omega_i {
                    0.0
                } else {
                    tt * (omega / omega_i).ln() / ln_b
                }
            }
            Self::Take2 { .. } => tt * omega.max(0.0).ln_1p() / ln_b,
        };
        t.clamp(0.0, tt)
    }

    /// Allpass phase whose group delay is [`Self::group_delay`]:
    /// `-∫ t(ω) dω`, zero at the start frequency, with constant delay `T`
    /// above `ω_a`. Inside the sweep range it equals `φ(t) - ωt` evaluated
    /// at `t = t(ω)`.
    pub fn spectral_phase(&self, omega: f64) -> f64 {
        let (_, ln_b) = self.base();
        let tt = self.duration_s();
        let omega_a = self.omega_a();
        let inside = |w: f64| match *self {
            Self::Take1 { omega_i, .. } => {
                if w <= omega_i {
                    0.0
                } else {
                    -tt / ln_b * (w * (w / omega_i).ln() - w + omega_i)
                }
            }
            Self::Take2 { .. } => {
                let w = w.max(0.0);
                -tt / ln_b * ((w + 1.0) * w.ln_1p() - w)
            }
        };
        if omega <= omega_a {
            inside(omega)
        } else {
            inside(omega_a) - tt * (omega - omega_a)
        }
    }

    /// Time-domain sweep `a(t) sin(φ(t))` sampled at `t = n/fs` for `t < T`,
    /// zero afterwards. Without compensation `a(t) = 1`.
    pub fn render(
        &self,
        n: usize,
        sample_rate_hz: f64,
        amplitude_compensation: bool,
    ) -> Result<RealSignal> {
        self.validate(n, sample_rate_hz)?;
        let tt = self.duration_s();
        let samples = (0..n)
            .map(|i| {
                let t = i as f64 / sample_rate_hz;
                if t >= tt {
                    0.0
                } else {
                    let a = if amplitude_compensation {
                        self.amplitude(t)
                    } else {
                        1.0
                    };
                    a * self.phase(t).sin()
                }
            })
            .collect();
        RealSignal::new(samples, sample_rate_hz)
    }

    /// [`Self::spectral_phase`] sampled on the DFT bin grid.
    pub fn phase_curve(&self, n: usize, sample_rate_hz: f64) -> Result<PhaseCurve> {
        self.validate(n, sample_rate_hz)?;
        PhaseCurve::from_positive_bins(n, sample_rate_hz, |k| {
            self.spectral_phase(2.0 * PI * bin_frequency(k, n, sample_rate_hz))
        })
    }
}

/// Exponential sweep from `ω_i` to `ω_a` over `duration_s`, with its
/// inversion phase.
pub fn exp_sweep_take1(
    n: usize,
    sample_rate_hz: f64,
    omega_i: f64,
    omega_a: f64,
    duration_s: f64,
    amplitude_compensation: bool,
) -> Result<(RealSignal, PhaseCurve)> {
    let law = ExponentialSweep::Take1 {
        omega_i,
        omega_a,
        duration_s,
    };
    Ok((
        law.render(n, sample_rate_hz, amplitude_compensation)?,
        law.phase_curve(n, sample_rate_hz)?,
    ))
}

/// Exponential sweep from DC to `ω_a` over `duration_s`, with its inversion
/// phase.
pub fn exp_sweep_take2(
    n: usize,
    sample_rate_hz: f64,
    omega_a: f64,
    duration_s: f64,
    amplitude_compensation: bool,
) -> Result<(RealSignal, PhaseCurve)> {
    let law = ExponentialSweep::Take2 {
        omega_a,
        duration_s,
    };
    Ok((
        law.render(n, sample_rate_hz, amplitude_compensation)?,
        law.phase_curve(n, sample_rate_hz)?,
    ))
}

/// Multiplies every bin by `e^{jφ[k]}`. Magnitudes are untouched.
pub fn apply_allpass(spectrum: &Spectrum, curve: &PhaseCurve) -> Result<Spectrum> {
    if spectrum.len() != curve.len() {
        return Err(Error::ShapeMismatch(format!(
            "spectrum has {} bins, phase curve has {}",
            spectrum.len(),
            curve.len()
        )));
    }
    if spectrum.sample_rate_hz() != curve.sample_rate_hz() {
        return Err(Error::ShapeMismatch(format!(
            "spectrum at {} Hz, phase curve at {} Hz",
            spectrum.sample_rate_hz(),
            curve.sample_rate_hz()
        )));
    }
    let bins = spectrum
        .bins()
        .iter()
        .enumerate()
        .map(|(k, x)| x * curve.phasor(k))
        .collect();
    Spectrum::new(bins, spectrum.sample_rate_hz())
}

/// Bin-wise negation: the inverse allpass.
pub fn invert_phase(curve: &PhaseCurve) -> PhaseCurve {
    PhaseCurve {
        phase: curve.phase.iter().map(|p| -p).collect(),
        sample_rate_hz: curve.sample_rate_hz,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepFamily {
    /// Bare band-limited impulse, zero phase.
    Impulse,
    /// Allpass linear chirp of the band-limited impulse.
    Linear,
    ExpTake1,
    ExpTake2,
}

/// Chirp family plus its duration and whether the exponential sweeps carry
/// the amplitude-compensation envelope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub family: SweepFamily,
    pub duration_s: f64,
    pub amplitude_compensation: bool,
}

impl SweepSpec {
    pub fn linear(duration_s: f64) -> Self {
        Self {
            family: SweepFamily::Linear,
            duration_s,
            amplitude_compensation: false,
        }
    }
}

/// Excitation signal and the phase curve needed to invert it.
///
/// `signal` is the raw construction multiplied by `scale`, which is below 1
/// only when the raw peak exceeded 1. `spectrum` is `R` as constructed: for
/// the impulse and linear families it is `scale·Δ·e^{jφ}` with out-of-band
/// bins exactly zero, for the exponential families the DFT of `signal`.
#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub signal: RealSignal,
    pub spectrum: Spectrum,
    pub phase: PhaseCurve,
    pub scale: f64,
}

/// Builds the excitation for a sweep family.
///
/// The linear family chirps the band-limited impulse with
/// [`linear_chirp_phase`]; the exponential families are rendered directly in
/// time, mapping `band` to `ω = 2πf` (take 2 ignores `f_i`).
pub fn make_reference(
    n: usize,
    sample_rate_hz: f64,
    band: &BandLimits,
    sweep: &SweepSpec,
) -> Result<Reference> {
    band.validate(sample_rate_hz)?;
    let (raw, spectrum, phase) = match sweep.family {
        SweepFamily::Impulse => {
            let delta = impulse::band_limited_impulse(n, sample_rate_hz, band)?;
            let phase = PhaseCurve::zeros(n, sample_rate_hz)?;
            (signal::idft(&delta)?, Some(delta), phase)
        }
        SweepFamily::Linear => {
            let phase = linear_chirp_phase(n, sample_rate_hz, band, sweep.duration_s)?;
            let delta = impulse::band_limited_impulse(n, sample_rate_hz, band)?;
            let r = apply_allpass(&delta, &phase)?;
            (signal::idft(&r)?, Some(r), phase)
        }
        SweepFamily::ExpTake1 => exp_sweep_take1(
            n,
            sample_rate_hz,
            2.0 * PI * band.f_i,
            2.0 * PI * band.f_a,
            sweep.duration_s,
            sweep.amplitude_compensation,
        )
        .map(|(x, phase)| (x, None, phase))?,
        SweepFamily::ExpTake2 => exp_sweep_take2(
            n,
            sample_rate_hz,
            2.0 * PI * band.f_a,
            sweep.duration_s,
            sweep.amplitude_compensation,
        )
        .map(|(x, phase)| (x, None, phase))?,
    };
    let peak = raw.peak();
    let scale = if peak > 1.0 { 1.0 / peak } else { 1.0 };
    let signal = if scale == 1.0 {
        raw
    } else {
        raw.scaled(scale)?
    };
    let spectrum = match spectrum {
        Some(r) if scale == 1.0 => r,
        Some(r) => Spectrum::new(
            r.into_bins().into_iter().map(|b| b * scale).collect(),
            sample_rate_hz,
        )?,
        None => signal::dft(&signal),
    };
    Ok(Reference {
        signal,
        spectrum,
        phase,
        scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const FS: f64 = 48000.0;

    fn audio_band() -> BandLimits {
        BandLimits::new(100.0, 20000.0)
    }

    #[test]
    fn linear_phase_is_zero_at_sweep_start() {
        // 4800-point grid at 48 kHz puts bins exactly on 10 Hz multiples.
        let curve = linear_chirp_phase(4800, FS, &audio_band(), 0.06).unwrap();
        assert_eq!(curve.phase()[10], 0.0);
        for k in 0..10 {
            assert_eq!(curve.phase()[k], 0.0);
        }
    }

    #[test]
    fn linear_phase_at_top_edge() {
        let t = 0.06;
        let curve = linear_chirp_phase(4800, FS, &audio_band(), t).unwrap();
        let expected = -PI * t * (20000.0 - 100.0);
        assert_abs_diff_eq!(curve.phase()[2000], expected, epsilon = 1e-9);

        // Centred finite difference of the in-band closed form at f_a.
        let df = 10.0;
        let tau = -(curve.phase()[2000] - curve.phase()[1999]) / (2.0 * PI * df);
        let tau_above = -(curve.phase()[2001] - curve.phase()[2000]) / (2.0 * PI * df);
        let centred = 0.5 * (tau + tau_above);
        assert!((centred - t).abs() < 0.01 * t, "group delay {centred}");
    }

    #[test]
    fn linear_group_delay_monotone_and_spans_duration() {
        let n = 4096;
        let t = 0.06;
        let band = audio_band();
        let curve = linear_chirp_phase(n, FS, &band, t).unwrap();
        let df = FS / n as f64;
        let (lo, hi) = band.bin_range(n, FS).unwrap();
        // differences straddling both edges are included
        let delays: Vec<f64> = (lo - 1..=hi)
            .map(|k| -(curve.phase()[k + 1] - curve.phase()[k]) / (2.0 * PI * df))
            .collect();
        for w in delays.windows(2) {
            assert!(w[1] >= w[0] - 1e-12);
        }
        let slope = t / (band.f_a - band.f_i) * df;
        assert!(delays[0] >= 0.0 && delays[0] <= slope + 1e-12);
        assert!((delays.last().unwrap() - t).abs() <= slope + 1e-12);
    }

    #[test]
    fn linear_phase_rejects_bad_duration() {
        assert!(matches!(
            linear_chirp_phase(4096, FS, &audio_band(), 0.0),
            Err(Error::InvalidDuration(_))
        ));
        assert!(matches!(
            linear_chirp_phase(4096, FS, &audio_band(), 1.0),
            Err(Error::InvalidDuration(_))
        ));
        assert!(matches!(
            linear_chirp_phase(4096, FS, &BandLimits::new(100.0, 30000.0), 0.01),
            Err(Error::InvalidBand(_))
        ));
    }

    #[test]
    fn tiny_duration_leaves_impulse_centred() {
        let n = 1024;
        let band = audio_band();
        let delta = impulse::time_domain_impulse(n, FS, &band).unwrap();
        let r = make_reference(n, FS, &band, &SweepSpec::linear(1.0 / FS)).unwrap();
        let xcorr = |lag: usize| -> f64 {
            (0..n)
                .map(|i| delta.samples()[i] * r.signal.samples()[(i + lag) % n])
                .sum()
        };
        let best = (0..n)
            .max_by(|&a, &b| xcorr(a).partial_cmp(&xcorr(b)).unwrap())
            .unwrap();
        assert_eq!(best, 0);
    }

    #[test]
    fn zero_curve_is_identity() {
        let delta = impulse::band_limited_impulse(64, 64.0, &BandLimits::new(8.0, 16.0)).unwrap();
        let zero = PhaseCurve::zeros(64, 64.0).unwrap();
        assert_eq!(apply_allpass(&delta, &zero).unwrap(), delta);
        assert_eq!(invert_phase(&zero), zero);
    }

    #[test]
    fn chirped_impulse_stays_two_valued() {
        let n = 4096;
        let band = audio_band();
        let delta = impulse::band_limited_impulse(n, FS, &band).unwrap();
        let curve = linear_chirp_phase(n, FS, &band, 0.06).unwrap();
        let r = apply_allpass(&delta, &curve).unwrap();
        assert!(r.is_hermitian());
        let amp = 2.0 / n as f64;
        for b in r.bins() {
            let m = b.norm();
            assert!(m == 0.0 || (m - amp).abs() < 1e-18, "magnitude {m}");
        }
    }

    #[test]
    fn apply_then_invert_cancels() {
        let n = 256;
        let band = BandLimits::new(1000.0, 15000.0);
        let x = impulse::band_limited_impulse(n, FS, &band).unwrap();
        let curve = linear_chirp_phase(n, FS, &band, 0.004).unwrap();
        let back =
            apply_allpass(&apply_allpass(&x, &curve).unwrap(), &invert_phase(&curve)).unwrap();
        for (a, b) in x.bins().iter().zip(back.bins()) {
            assert!((a - b).norm() < 1e-12);
        }
        assert_eq!(invert_phase(&invert_phase(&curve)), curve);
    }

    #[test]
    fn apply_rejects_mismatch() {
        let x = Spectrum::zeros(8, FS).unwrap();
        assert!(matches!(
            apply_allpass(&x, &PhaseCurve::zeros(16, FS).unwrap()),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(matches!(
            apply_allpass(&x, &PhaseCurve::zeros(8, 44100.0).unwrap()),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn phase_curve_invariants_enforced() {
        assert!(PhaseCurve::new(vec![0.0, 1.0, 0.0, -1.0], 4.0).is_ok());
        assert!(PhaseCurve::new(vec![0.0, 1.0, PI, -1.0], 4.0).is_ok());
        assert!(PhaseCurve::new(vec![2.0 * PI, 1.0, -PI, -1.0], 4.0).is_ok());
        assert!(matches!(
            PhaseCurve::new(vec![0.5, 1.0, 0.0, -1.0], 4.0),
            Err(Error::InvalidPhase(_))
        ));
        assert!(matches!(
            PhaseCurve::new(vec![0.0, 1.0, 0.5, -1.0], 4.0),
            Err(Error::InvalidPhase(_))
        ));
        assert!(matches!(
            PhaseCurve::new(vec![0.0, 1.0, 0.0, 1.0], 4.0),
            Err(Error::InvalidPhase(_))
        ));
    }

    #[test]
    fn nyquist_phase_snaps_to_real() {
        let band = BandLimits::new(0.0, FS / 2.0);
        let curve = linear_chirp_phase(64, FS, &band, 0.001).unwrap();
        let ny = curve.phase()[32];
        assert_abs_diff_eq!((ny / PI).round() * PI, ny, epsilon = 0.0);
        let delta = impulse::band_limited_impulse(64, FS, &band).unwrap();
        let out = apply_allpass(&delta, &curve).unwrap();
        assert_eq!(out.bins()[32].im, 0.0);
        assert!(out.is_hermitian());
    }

    #[test]
    fn take1_starts_at_zero_phase() {
        let law = ExponentialSweep::Take1 {
            omega_i: 2.0 * PI * 20.0,
            omega_a: 2.0 * PI * 20000.0,
            duration_s: 1.0,
        };
        assert_abs_diff_eq!(law.phase(0.0), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(law.frequency(0.0), 2.0 * PI * 20.0, epsilon = 1e-9);
        assert_abs_diff_eq!(law.frequency(1.0), 2.0 * PI * 20000.0, epsilon = 1e-6);
        assert_abs_diff_eq!(law.amplitude(0.0), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn take2_starts_at_dc_and_reaches_top() {
        let omega_a = 2.0 * PI * 20000.0;
        let law = ExponentialSweep::Take2 {
            omega_a,
            duration_s: 0.5,
        };
        assert_eq!(law.frequency(0.0), 0.0);
        assert_abs_diff_eq!(law.frequency(0.5), omega_a, epsilon = 1e-6);
        assert_abs_diff_eq!(law.phase(0.0), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn amplitude_term_is_reciprocal_sweep_rate() {
        let laws = [
            ExponentialSweep::Take1 {
                omega_i: 100.0,
                omega_a: 50000.0,
                duration_s: 0.8,
            },
            ExponentialSweep::Take2 {
                omega_a: 50000.0,
                duration_s: 0.8,
            },
        ];
        for law in laws {
            for t in [0.1, 0.4, 0.7] {
                let h = 1e-6;
                let rate = (law.frequency(t + h) - law.frequency(t - h)) / (2.0 * h);
                let rel = (law.raw_amplitude(t) * rate - 1.0).abs();
                assert!(rel < 1e-6, "{law:?} t={t} rel={rel}");
            }
        }
    }

    #[test]
    fn phase_is_integral_of_frequency() {
        let law = ExponentialSweep::Take2 {
            omega_a: 30000.0,
            duration_s: 0.5,
        };
        let h = 1e-6;
        for t in [0.05, 0.25, 0.45] {
            let d = (law.phase(t + h) - law.phase(t - h)) / (2.0 * h);
            assert!((d - law.frequency(t)).abs() < 1e-4 * law.frequency(t).max(1.0));
        }
    }

    #[test]
    fn spectral_phase_group_delay_matches_sweep_timing() {
        let law = ExponentialSweep::Take1 {
            omega_i: 2.0 * PI * 50.0,
            omega_a: 2.0 * PI * 10000.0,
            duration_s: 0.5,
        };
        for t in [0.1, 0.25, 0.4] {
            let w = law.frequency(t);
            let h = 1e-3;
            let tau = -(law.spectral_phase(w + h) - law.spectral_phase(w - h)) / (2.0 * h);
            assert!((tau - t).abs() < 1e-6, "tau {tau} vs {t}");
            assert!((law.group_delay(w) - t).abs() < 1e-9);
            // Stationary-phase identity.
            let legendre = law.phase(t) - w * t;
            assert!((law.spectral_phase(w) - legendre).abs() < 1e-6 * legendre.abs().max(1.0));
        }
    }

    #[test]
    fn exp_sweeps_validate_ranges() {
        assert!(matches!(
            exp_sweep_take1(1024, FS, 0.0, 1000.0, 0.01, false),
            Err(Error::InvalidRange(_))
        ));
        assert!(matches!(
            exp_sweep_take1(1024, FS, 2000.0, 1000.0, 0.01, false),
            Err(Error::InvalidRange(_))
        ));
        assert!(matches!(
            exp_sweep_take2(1024, FS, PI * FS * 1.01, 0.01, false),
            Err(Error::InvalidRange(_))
        ));
        assert!(matches!(
            exp_sweep_take2(1024, FS, 1000.0, 1.0, false),
            Err(Error::InvalidDuration(_))
        ));
    }

    #[test]
    fn exp_sweep_is_zero_after_duration() {
        let (x, curve) = exp_sweep_take1(4096, FS, 600.0, 60000.0, 0.05, true).unwrap();
        let cut = (0.05 * FS) as usize;
        assert!(x.samples()[cut..].iter().all(|s| *s == 0.0));
        assert!(x.peak() <= 1.0);
        assert_eq!(curve.len(), 4096);
    }

    #[test]
    fn reference_chirp_has_lower_peak_same_energy() {
        let n = 4096;
        let band = audio_band();
        let delta = impulse::time_domain_impulse(n, FS, &band).unwrap();
        let r = make_reference(n, FS, &band, &SweepSpec::linear(0.06)).unwrap();
        assert_eq!(r.scale, 1.0);
        assert!(r.signal.peak() < delta.peak());
        assert!(r.signal.peak() <= 1.0);
        assert!((r.signal.energy() - delta.energy()).abs() < 1e-12 * delta.energy());
    }

    #[test]
    fn impulse_family_reference_is_bare_impulse() {
        let band = audio_band();
        let r = make_reference(
            512,
            FS,
            &band,
            &SweepSpec {
                family: SweepFamily::Impulse,
                duration_s: 0.0,
                amplitude_compensation: false,
            },
        )
        .unwrap();
        assert_eq!(
            r.signal,
            impulse::time_domain_impulse(512, FS, &band).unwrap()
        );
        assert!(r.phase.phase().iter().all(|p| *p == 0.0));
    }
}
