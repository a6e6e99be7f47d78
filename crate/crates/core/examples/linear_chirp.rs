//! Spreads the band-limited impulse into a linear chirp with an allpass
//! phase, then compresses it back.
//!
//! cargo run --example linear_chirp

use allpass_ir::prelude::*;

fn main() -> allpass_ir::Result<()> {
    let (n, fs) = (8192, 48000.0);
    let band = BandLimits::new(200.0, 16000.0);
    let duration = 0.1;

    let reference = make_reference(n, fs, &band, &SweepSpec::linear(duration))?;
    let impulse = time_domain_impulse(n, fs, &band)?;
    println!(
        "impulse peak {:.3e}, chirp peak {:.3e}, energies {:.6e} / {:.6e}",
        impulse.peak(),
        reference.signal.peak(),
        impulse.energy(),
        reference.signal.energy()
    );

    // Energy should sit in [0, T) and the frequency should rise over it.
    let s = reference.signal.samples();
    let inside: f64 = s[..(duration * fs) as usize].iter().map(|v| v * v).sum();
    println!(
        "{:.1}% of the energy lies within T",
        100.0 * inside / reference.signal.energy()
    );

    let back = idft(&apply_allpass(
        &reference.spectrum,
        &invert_phase(&reference.phase),
    )?)?;
    let worst = back
        .samples()
        .iter()
        .zip(impulse.samples())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    println!("inverse allpass restores the impulse to within {worst:.2e}");
    Ok(())
}
