//! Time- and frequency-domain signal containers and the transform contract.
//!
//! Time-domain data lives in [`RealSignal`], frequency-domain data in
//! [`Spectrum`]. Both carry their sample rate. Spectra are always full
//! length (all `N` DFT bins, negative frequencies included) so the
//! conjugate mirror of a real signal stays visible.
//!
//! The forward transform is unnormalized, `X[k] = sum_n x[n] e^{-j2πkn/N}`,
//! and the inverse carries the `1/N` factor.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Relative tolerance used to flag a spectrum as hermitian on construction.
pub const HERMITIAN_FLAG_TOL: f64 = 1e-12;
/// Relative tolerance accepted by [`idft`].
pub const HERMITIAN_INVERSE_TOL: f64 = 1e-9;

fn check_len(n: usize) -> Result<()> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidLength(n));
    }
    Ok(())
}

fn check_rate(fs: f64) -> Result<()> {
    if !(fs.is_finite() && fs > 0.0) {
        return Err(Error::InvalidSampleRate(fs));
    }
    Ok(())
}

/// Real time-domain samples with a sample rate. Length is even and at least 2.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSignal {
    samples: Vec<f64>,
    sample_rate_hz: f64,
}

impl RealSignal {
    pub fn new(samples: Vec<f64>, sample_rate_hz: f64) -> Result<Self> {
        check_len(samples.len())?;
        check_rate(sample_rate_hz)?;
        if let Some(i) = samples.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self {
            samples,
            sample_rate_hz,
        })
    }

    pub fn zeros(n: usize, sample_rate_hz: f64) -> Result<Self> {
        Self::new(vec![0.0; n], sample_rate_hz)
    }

    /// Unit impulse at index 0.
    pub fn unit_impulse(n: usize, sample_rate_hz: f64) -> Result<Self> {
        let mut s = Self::zeros(n, sample_rate_hz)?;
        s.samples[0] = 1.0;
        Ok(s)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn peak(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Sum of squared samples.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|x| x * x).sum()
    }

    pub fn scaled(&self, gain: f64) -> Result<Self> {
        Self::new(
            self.samples.iter().map(|x| x * gain).collect(),
            self.sample_rate_hz,
        )
    }

    /// Sample-wise difference `self - other`.
    pub fn sub(&self, other: &RealSignal) -> Result<Self> {
        check_same_shape(
            self.len(),
            self.sample_rate_hz,
            other.len(),
            other.sample_rate_hz,
        )?;
        Self::new(
            self.samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| a - b)
                .collect(),
            self.sample_rate_hz,
        )
    }
}

/// Full-length complex DFT bins. Bin `k` sits at `k * fs / N` for `k <= N/2`;
/// bins above `N/2` hold the negative frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    bins: Vec<Complex64>,
    sample_rate_hz: f64,
    hermitian: bool,
}

impl Spectrum {
    /// Validates the bins and flags the result hermitian when the conjugate
    /// mirror holds within [`HERMITIAN_FLAG_TOL`] relative.
    pub fn new(bins: Vec<Complex64>, sample_rate_hz: f64) -> Result<Self> {
        check_len(bins.len())?;
        check_rate(sample_rate_hz)?;
        if let Some(i) = bins
            .iter()
            .position(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::NonFinite(i));
        }
        let hermitian = hermitian_violation(&bins, HERMITIAN_FLAG_TOL).is_none();
        Ok(Self {
            bins,
            sample_rate_hz,
            hermitian,
        })
    }

    pub fn zeros(n: usize, sample_rate_hz: f64) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); n], sample_rate_hz)
    }

    pub fn bins(&self) -> &[Complex64] {
        &self.bins
    }

    pub fn into_bins(self) -> Vec<Complex64> {
        self.bins
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Frequency of bin `k` in Hz, for `k <= N/2`.
    pub fn bin_frequency(&self, k: usize) -> f64 {
        bin_frequency(k, self.len(), self.sample_rate_hz)
    }

    /// `(1/N) * sum |X[k]|^2`, equal to the time-domain energy of the inverse.
    pub fn energy(&self) -> f64 {
        self.bins.iter().map(|c| c.norm_sqr()).sum::<f64>() / self.len() as f64
    }

    pub fn max_magnitude(&self) -> f64 {
        self.bins.iter().fold(0.0, |m, c| m.max(c.norm()))
    }
}

/// Frequency in Hz of DFT bin `k` on an `n`-point grid.
pub fn bin_frequency(k: usize, n: usize, sample_rate_hz: f64) -> f64 {
    k as f64 * sample_rate_hz / n as f64
}

/// Returns the first bin violating conjugate symmetry by more than
/// `rel_tol * max|X|`, with the size of the violation.
fn hermitian_violation(bins: &[Complex64], rel_tol: f64) -> Option<(usize, f64)> {
    let n = bins.len();
    let scale = bins.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    let tol = rel_tol * scale;
    let half = n / 2;
    for k in [0, half] {
        if bins[k].im.abs() > tol {
            return Some((k, bins[k].im.abs()));
        }
    }
    for k in 1..half {
        let dev = (bins[n - k] - bins[k].conj()).norm();
        if dev > tol {
            return Some((n - k, dev));
        }
    }
    None
}

fn check_same_shape(n_a: usize, fs_a: f64, n_b: usize, fs_b: f64) -> Result<()> {
    if n_a != n_b {
        return Err(Error::ShapeMismatch(format!(
            "lengths {n_a} and {n_b} differ"
        )));
    }
    if fs_a != fs_b {
        return Err(Error::ShapeMismatch(format!(
            "sample rates {fs_a} Hz and {fs_b} Hz differ"
        )));
    }
    Ok(())
}

pub(crate) fn check_spectra(a: &Spectrum, b: &Spectrum) -> Result<()> {
    check_same_shape(a.len(), a.sample_rate_hz, b.len(), b.sample_rate_hz)
}

pub(crate) fn check_signals(a: &RealSignal, b: &RealSignal) -> Result<()> {
    check_same_shape(a.len(), a.sample_rate_hz, b.len(), b.sample_rate_hz)
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn forward_plan(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n))
}

fn inverse_plan(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n))
}

/// N-point forward DFT of a real signal.
pub fn dft(x: &RealSignal) -> Spectrum {
    let n = x.len();
    let mut buf: Vec<Complex64> = x.samples.iter().map(|&s| Complex64::new(s, 0.0)).collect();
    forward_plan(n).process(&mut buf);
    // Enforce the exact conjugate mirror a real input implies.
    buf[0].im = 0.0;
    buf[n / 2].im = 0.0;
    for k in 1..n / 2 {
        buf[n - k] = buf[k].conj();
    }
    Spectrum {
        bins: buf,
        sample_rate_hz: x.sample_rate_hz,
        hermitian: true,
    }
}

/// Inverse DFT with `1/N` normalization. Fails when the spectrum's conjugate
/// mirror is off by more than [`HERMITIAN_INVERSE_TOL`] relative.
pub fn idft(spectrum: &Spectrum) -> Result<RealSignal> {
    let n = spectrum.len();
    if !spectrum.hermitian {
        if let Some((bin, deviation)) = hermitian_violation(&spectrum.bins, HERMITIAN_INVERSE_TOL) {
            return Err(Error::NonHermitian { bin, deviation });
        }
    }
    let mut buf = spectrum.bins.clone();
    inverse_plan(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    RealSignal::new(
        buf.iter().map(|c| c.re * scale).collect(),
        spectrum.sample_rate_hz,
    )
}

/// Bin-wise product; realizes circular convolution of the time signals.
pub fn multiply(a: &Spectrum, b: &Spectrum) -> Result<Spectrum> {
    check_spectra(a, b)?;
    let bins = a.bins.iter().zip(&b.bins).map(|(x, y)| x * y).collect();
    Spectrum::new(bins, a.sample_rate_hz)
}
