//! Identifies a random FIR system from its response to a linear chirp.
//!
//! cargo run --example identify_system

use allpass_ir::prelude::*;

fn main() -> allpass_ir::Result<()> {
    let (n, fs) = (4096, 48000.0);
    let band = BandLimits::new(100.0, 20000.0);

    let reference = make_reference(n, fs, &band, &SweepSpec::linear(0.06))?;
    let system = random_fir_system(n, fs, 1024, 42)?;
    println!("system: {}", system.descriptor);

    let response = force_system(&system, &reference.signal)?;
    let mut result = recover_impulse_model(&response, &reference.phase, &band)?;
    let error = result.score(&dft(&system.taps), DEFAULT_GUARD_BINS)?;
    println!("in-band error {error:.3e}");

    // The model is the system seen through the band-limited impulse.
    let expected = force_system(&system, &time_domain_impulse(n, fs, &band)?)?;
    let worst = result
        .model
        .samples()
        .iter()
        .zip(expected.samples())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    println!("model vs h * impulse: max sample difference {worst:.3e}");
    Ok(())
}
