//! Writes a reference in every supported file format and reads it back.
//!
//! cargo run --example signal_files

use allpass_ir::io::{self, SignalFile, SignalFormat};
use allpass_ir::prelude::*;

fn main() -> allpass_ir::Result<()> {
    let (n, fs) = (2048, 44100.0);
    let band = BandLimits::new(50.0, 18000.0);
    let reference = make_reference(n, fs, &band, &SweepSpec::linear(0.03))?;
    let dir = tempfile::tempdir()?;

    for (name, format) in [
        ("ref16.wav", SignalFormat::WavPcm16),
        ("ref24.wav", SignalFormat::WavPcm24),
        ("ref32f.wav", SignalFormat::WavFloat32),
        ("ref.csv", SignalFormat::Csv),
    ] {
        let file = SignalFile::new(dir.path().join(name))?.with_format(format);
        io::write_signal(&reference.signal, &file)?;
        let back = io::read_signal(&file, Some(fs))?;
        let worst = back
            .samples()
            .iter()
            .zip(reference.signal.samples())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        println!("{name:<11} {format:?}: max round-trip error {worst:.3e}");
    }

    let phase_path = dir.path().join("phase.csv");
    io::write_phase_csv(&reference.phase, &phase_path)?;
    let phase = io::read_phase_csv(&phase_path, fs)?;
    println!("phase curve round trip exact: {}", phase == reference.phase);
    Ok(())
}
