//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Run with `cargo test -p allpass-ir --test acceptance`.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use allpass_ir::chirp::ExponentialSweep;
use allpass_ir::prelude::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, pass: String, fail: String) -> Outcome {
    if cond {
        Ok(pass)
    } else {
        Err(fail)
    }
}

fn random_samples(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn direct_dft(x: &[f64]) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(i, &v)| {
                    Complex64::from_polar(v, -2.0 * PI * ((k * i) % n) as f64 / n as f64)
                })
                .sum()
        })
        .collect()
}

fn direct_idft(bins: &[Complex64]) -> Vec<Complex64> {
    let n = bins.len();
    (0..n)
        .map(|i| {
            bins.iter()
                .enumerate()
                .map(|(k, b)| {
                    b * Complex64::from_polar(1.0, 2.0 * PI * ((k * i) % n) as f64 / n as f64)
                })
                .sum::<Complex64>()
                / n as f64
        })
        .collect()
}

/// Bins whose folded frequency lies in the band, by direct index arithmetic.
fn in_band(n: usize, fs: f64, band: &BandLimits) -> Vec<bool> {
    (0..n)
        .map(|k| band.contains(k.min(n - k) as f64 * fs / n as f64))
        .collect()
}

fn criterion_1() -> Outcome {
    let (n, fs) = (4096, 48000.0);
    let band = BandLimits::new(100.0, 20000.0);
    let mask = in_band(n, fs, &band);
    let (mut worst, mut slowest) = (0.0f64, 0.0f64);
    for seed in 0..50 {
        let h = random_fir_system(n, fs, 1024, seed).unwrap();
        let start = Instant::now();
        let reference = make_reference(n, fs, &band, &SweepSpec::linear(0.06)).unwrap();
        let y = force_system(&h, &reference.signal).unwrap();
        let rec = recover_impulse_model(&y, &reference.phase, &band).unwrap();
        slowest = slowest.max(start.elapsed().as_secs_f64());

        let hh = dft(&h.taps);
        let target: Vec<Complex64> = (0..n)
            .map(|k| {
                if mask[k] {
                    hh.bins()[k] * (2.0 / n as f64)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        let peak = target.iter().fold(0.0f64, |m, b| m.max(b.norm()));
        let err = (0..n)
            .filter(|&k| mask[k])
            .map(|k| (rec.model_spectrum.bins()[k] - target[k]).norm())
            .fold(0.0f64, f64::max)
            / peak;
        worst = worst.max(err);
    }
    let msg = format!("max in-band error {worst:.3e} over 50 seeds, slowest run {slowest:.3} s");
    check(worst < 1e-9 && slowest < 1.0, msg.clone(), msg)
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = 2 * rng.random_range(1..=256usize);
        let spec = dft(&RealSignal::new(random_samples(n, &mut rng), 1000.0).unwrap());
        let nyquist = if rng.random::<bool>() { PI } else { 0.0 };
        let scale = 10f64.powf(rng.random_range(-2.0..4.0));
        let curve = PhaseCurve::from_positive_bins(n, 1000.0, |k| {
            if k == n / 2 {
                nyquist
            } else {
                rng.random_range(-scale..scale)
            }
        })
        .unwrap();
        let out = apply_allpass(&spec, &curve).unwrap();
        for (a, b) in spec.bins().iter().zip(out.bins()) {
            if a.norm() > 0.0 {
                worst = worst.max((b.norm() - a.norm()).abs() / a.norm());
            }
        }
    }
    let msg = format!("max relative magnitude deviation {worst:.3e} over 1000 pairs");
    check(worst < 1e-15, msg.clone(), msg)
}

fn criterion_3() -> Outcome {
    let cases = [
        (64usize, 64.0, 8.0, 16.0),
        (256, 48000.0, 100.0, 20000.0),
        (1000, 1000.0, 0.0, 500.0),
        (512, 44100.0, 3000.0, 3100.0),
    ];
    let (mut bad_bins, mut asym, mut imag) = (0usize, 0.0f64, 0.0f64);
    for (n, fs, f_i, f_a) in cases {
        let band = BandLimits::new(f_i, f_a);
        let spec = band_limited_impulse(n, fs, &band).unwrap();
        let two_over_n = 2.0 / n as f64;
        bad_bins += spec
            .bins()
            .iter()
            .filter(|b| b.im != 0.0 || !(b.re == 0.0 || b.re == two_over_n))
            .count();
        let x = time_domain_impulse(n, fs, &band).unwrap();
        let s = x.samples();
        for i in 1..n {
            asym = asym.max((s[i] - s[n - i]).abs());
        }
        for (c, v) in direct_idft(spec.bins()).iter().zip(s) {
            imag = imag.max(c.im.abs());
            asym = asym.max((c.re - v).abs());
        }
    }
    let msg = format!(
        "{bad_bins} bins outside {{0, 2/N}}, symmetry residue {asym:.3e}, imaginary residue {imag:.3e}"
    );
    check(
        bad_bins == 0 && asym < 1e-12 && imag < 1e-12,
        msg.clone(),
        msg,
    )
}

fn criterion_4() -> Outcome {
    let (n, fs) = (4096, 48000.0);
    let band = BandLimits::new(100.0, 20000.0);
    let reference = make_reference(n, fs, &band, &SweepSpec::linear(0.06)).unwrap();
    let out_of_band: Vec<usize> = in_band(n, fs, &band)
        .iter()
        .enumerate()
        .filter(|(_, &inside)| !inside)
        .map(|(k, _)| k)
        .collect();
    let mut failures = Vec::new();
    for seed in 0..10 {
        let h = random_fir_system(n, fs, 1024, seed).unwrap();
        let y = force_system(&h, &reference.signal).unwrap();
        match naive_deconvolve(&dft(&y), &reference.spectrum, None) {
            Err(Error::DivisionBlowup { bins }) if bins == out_of_band => {}
            Err(Error::DivisionBlowup { bins }) => failures.push(format!(
                "seed {seed}: naive flagged {} bins, expected {}",
                bins.len(),
                out_of_band.len()
            )),
            other => failures.push(format!(
                "seed {seed}: naive returned {:?}",
                other.map(|_| ())
            )),
        }
        let rec = recover_impulse_model(&y, &reference.phase, &band).unwrap();
        let finite = rec
            .model_spectrum
            .bins()
            .iter()
            .all(|b| b.re.is_finite() && b.im.is_finite())
            && rec.model.samples().iter().all(|v| v.is_finite());
        if !finite {
            failures.push(format!("seed {seed}: allpass output not finite"));
        }
    }
    check(
        failures.is_empty(),
        format!(
            "naive blew up on all {} out-of-band bins, allpass finite, 10 seeds",
            out_of_band.len()
        ),
        failures.join("; "),
    )
}

fn criterion_5() -> Outcome {
    let (n, fs) = (4096, 48000.0);
    let band = BandLimits::new(100.0, 20000.0);
    let reference = make_reference(n, fs, &band, &SweepSpec::linear(0.06)).unwrap();
    let h = random_fir_system(n, fs, 1024, 5).unwrap();
    let clean = force_system(&h, &reference.signal).unwrap();
    // Noise is scaled to the exact SNR, so one capture's noise energy is known.
    let single = clean.energy() / 10f64.powf(20.0 / 10.0);
    let trials = 20;
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut ok = true;
    for m in [4usize, 16, 64] {
        let mut total = 0.0;
        for trial in 0..trials {
            let set = CaptureSet::simulate(&clean, 20.0, m, 1000 * trial + m as u64).unwrap();
            total += stack_captures(&set).unwrap().sub(&clean).unwrap().energy();
        }
        let ratio = total / trials as f64 / single * m as f64;
        ok &= (ratio - 1.0).abs() <= 0.2;
        parts.push(format!("M={m}: {ratio:.3}"));
    }
    let elapsed = start.elapsed().as_secs_f64();
    let msg = format!(
        "M·E_M/E_1 {} over {trials} trials, {elapsed:.2} s",
        parts.join(", ")
    );
    check(ok && elapsed < 30.0, msg.clone(), msg)
}

fn zero_crossings(x: &[f64], fs: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 0..x.len() - 1 {
        let (a, b) = (x[i], x[i + 1]);
        if a == 0.0 && (i == 0 || x[i - 1] != 0.0) {
            out.push(i as f64 / fs);
        } else if a * b < 0.0 {
            out.push((i as f64 + a / (a - b)) / fs);
        }
    }
    out
}

/// Crossings sit π apart in phase; differentiate the parabola through the
/// three crossings nearest `t`.
fn crossing_frequency(c: &[f64], t: f64) -> f64 {
    let j = c.partition_point(|&x| x < t).clamp(1, c.len() - 2);
    let (a, b, d) = (c[j - 1], c[j], c[j + 1]);
    let d1 = (2.0 * t - a - d) / ((b - a) * (b - d));
    let d2 = (2.0 * t - a - b) / ((d - a) * (d - b));
    PI * d1 + 2.0 * PI * d2
}

fn criterion_6() -> Outcome {
    let fs = 48000.0;
    let laws = [
        (
            ExponentialSweep::Take1 {
                omega_i: 2.0 * PI * 20.0,
                omega_a: 2.0 * PI * 20000.0,
                duration_s: 2.0,
            },
            1usize << 17,
        ),
        (
            ExponentialSweep::Take2 {
                omega_a: 2.0 * PI * 20000.0,
                duration_s: 10.0,
            },
            1 << 19,
        ),
    ];
    let mut worst = 0.0f64;
    let mut phase0 = 0.0f64;
    for (law, n) in &laws {
        let x = law.render(*n, fs, true).unwrap();
        let c = zero_crossings(x.samples(), fs);
        for frac in [0.25, 0.5, 0.75] {
            let t = frac * law.duration_s();
            let truth = law.frequency(t);
            worst = worst.max((crossing_frequency(&c, t) - truth).abs() / truth);
        }
        phase0 = phase0.max(law.phase(0.0).abs());
    }
    let (take2, n) = &laws[1];
    let c = zero_crossings(take2.render(*n, fs, false).unwrap().samples(), fs);
    let first = c[1] - c[0];
    let j = c.partition_point(|&t| t < take2.duration_s() / 2.0);
    let dc_ratio = first / (c[j] - c[j - 1]);
    let msg = format!(
        "max frequency error {:.3}%, take-2 first/mid interval {dc_ratio:.1}, |φ(0)| {phase0:.1e}",
        100.0 * worst
    );
    check(
        worst < 0.02 && dc_ratio > 10.0 && phase0 < 1e-9,
        msg.clone(),
        msg,
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut dft_err, mut conv_err) = (0.0f64, 0.0f64);
    for n in (2..=256).step_by(2) {
        let x = random_samples(n, &mut rng);
        let fast = dft(&RealSignal::new(x.clone(), 1.0).unwrap());
        for (a, b) in fast.bins().iter().zip(direct_dft(&x)) {
            dft_err = dft_err.max((a - b).norm());
        }
    }
    for n in (2..=128).step_by(2) {
        let a = random_samples(n, &mut rng);
        let b = random_samples(n, &mut rng);
        let system = SystemModel::new(RealSignal::new(a.clone(), 1.0).unwrap(), "oracle").unwrap();
        let y = force_system(&system, &RealSignal::new(b.clone(), 1.0).unwrap()).unwrap();
        for (i, v) in y.samples().iter().enumerate() {
            let direct: f64 = (0..n).map(|j| a[j] * b[(i + n - j) % n]).sum();
            conv_err = conv_err.max((v - direct).abs());
        }
    }
    let msg = format!(
        "DFT deviation {dft_err:.3e} (N<=256), convolution deviation {conv_err:.3e} (N<=128)"
    );
    check(dft_err < 1e-10 && conv_err < 1e-10, msg.clone(), msg)
}

fn run_cli(args: &[&str], out: &Path) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_allpass-ir"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .map_err(|e| e.to_string())?;
    if status.status.success() {
        Ok(())
    } else {
        Err(String::from_utf8_lossy(&status.stderr).into_owned())
    }
}

fn criterion_8() -> Outcome {
    let runs: [&[&str]; 2] = [
        &["gen", "--sweep", "exp1", "--t", "0.05", "--compensate"],
        &["simulate", "--snr", "20", "--stacks", "4", "--seed", "11"],
    ];
    let mut files = 0;
    for args in runs {
        let a = tempfile::tempdir().map_err(|e| e.to_string())?;
        let b = tempfile::tempdir().map_err(|e| e.to_string())?;
        run_cli(args, a.path())?;
        run_cli(args, b.path())?;
        let mut names: Vec<_> = std::fs::read_dir(a.path())
            .map_err(|e| e.to_string())?
            .map(|e| e.unwrap().file_name())
            .collect();
        names.sort();
        for name in names {
            let x = std::fs::read(a.path().join(&name)).map_err(|e| e.to_string())?;
            let y = std::fs::read(b.path().join(&name)).map_err(|e| e.to_string())?;
            if x != y {
                return Err(format!(
                    "{} differs between runs of {}",
                    name.to_string_lossy(),
                    args[0]
                ));
            }
            files += 1;
        }
    }
    Ok(format!(
        "{files} output files byte-identical across repeated gen and simulate runs"
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("noiseless exactness", criterion_1),
        ("allpass magnitude invariance", criterion_2),
        ("zero-phase impulse", criterion_3),
        ("instability contrast", criterion_4),
        ("stacking law", criterion_5),
        ("exponential sweeps", criterion_6),
        ("transform oracle", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
