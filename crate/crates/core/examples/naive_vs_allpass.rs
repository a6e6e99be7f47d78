//! Contrasts naive spectral division with allpass recovery on a band-limited
//! reference.
//!
//! cargo run --example naive_vs_allpass

use allpass_ir::prelude::*;
use allpass_ir::recovery::max_out_of_band;

fn main() -> allpass_ir::Result<()> {
    let (n, fs) = (4096, 48000.0);
    let band = BandLimits::new(100.0, 20000.0);
    let reference = make_reference(n, fs, &band, &SweepSpec::linear(0.06))?;
    let system = random_fir_system(n, fs, 1024, 3)?;
    let h = dft(&system.taps);
    let y = add_noise(&force_system(&system, &reference.signal)?, 20.0, 3)?;
    let yy = dft(&y);

    match naive_deconvolve(&yy, &reference.spectrum, None) {
        Err(Error::DivisionBlowup { bins }) => {
            println!(
                "naive, no floor: {} reference bins have no power",
                bins.len()
            )
        }
        Err(e) => return Err(e),
        Ok(_) => println!("naive, no floor: finite"),
    }

    let floored = naive_deconvolve(&yy, &reference.spectrum, Some(1e-9))?;
    println!(
        "naive, floor 1e-9: in-band error {:.3e}, out-of-band peak {:.3e}",
        in_band_error(&h, &band_limit(&floored, &band)?, &band, DEFAULT_GUARD_BINS)?,
        max_out_of_band(&floored, &band)
    );

    let rec = recover_impulse_model(&y, &reference.phase, &band)?;
    println!(
        "allpass:          in-band error {:.3e}, out-of-band peak {:.3e}",
        in_band_error(&h, &rec.model_spectrum, &band, DEFAULT_GUARD_BINS)?,
        max_out_of_band(&rec.model_spectrum, &band)
    );
    Ok(())
}
