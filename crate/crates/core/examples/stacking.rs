//! Averages repeated noisy captures and shows the residual noise falling as 1/M.
//!
//! cargo run --example stacking

use allpass_ir::prelude::*;

fn main() -> allpass_ir::Result<()> {
    let (n, fs) = (4096, 48000.0);
    let band = BandLimits::new(100.0, 20000.0);
    let reference = make_reference(n, fs, &band, &SweepSpec::linear(0.06))?;
    let system = random_fir_system(n, fs, 1024, 7)?;
    let h = dft(&system.taps);
    let clean = force_system(&system, &reference.signal)?;
    let single = clean.energy() / 10f64.powf(20.0 / 10.0);

    println!("   M   residual/E1   1/M     in-band error");
    for m in [1, 4, 16, 64] {
        let set = CaptureSet::simulate(&clean, 20.0, m, 99)?;
        let stacked = stack_captures(&set)?;
        let residual = stacked.sub(&clean)?.energy() / single;
        let rec = recover_impulse_model(&stacked, &reference.phase, &band)?;
        let err = in_band_error(&h, &rec.model_spectrum, &band, DEFAULT_GUARD_BINS)?;
        println!(
            "{m:>4}   {residual:>11.4}   {:<6.4}  {err:.3e}",
            1.0 / m as f64
        );
    }
    Ok(())
}
