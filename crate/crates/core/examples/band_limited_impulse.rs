//! Builds the zero-phase band-limited impulse and prints its main lobe.
//!
//! cargo run --example band_limited_impulse

use allpass_ir::prelude::*;

fn main() -> allpass_ir::Result<()> {
    let (n, fs) = (1024, 48000.0);
    let band = BandLimits::new(1000.0, 8000.0);

    let spectrum = band_limited_impulse(n, fs, &band)?;
    let lit = spectrum.bins()[..=n / 2]
        .iter()
        .filter(|b| b.re != 0.0)
        .count();
    println!(
        "{lit} positive-frequency bins set to 2/N = {}",
        2.0 / n as f64
    );

    let x = time_domain_impulse(n, fs, &band)?;
    let s = x.samples();
    println!("peak {:.6} at n = 0", s[0]);
    for i in 1..=6 {
        println!("x[{i:>2}] = {:+.6}   x[-{i}] = {:+.6}", s[i], s[n - i]);
    }
    Ok(())
}
