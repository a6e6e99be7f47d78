//! Renders both exponential sweep laws and prints how their frequency and
//! amplitude evolve.
//!
//! cargo run --example exponential_sweeps

use std::f64::consts::PI;

use allpass_ir::chirp::ExponentialSweep;

fn main() -> allpass_ir::Result<()> {
    let fs = 48000.0;
    let laws = [
        ExponentialSweep::Take1 {
            omega_i: 2.0 * PI * 20.0,
            omega_a: 2.0 * PI * 20000.0,
            duration_s: 1.0,
        },
        ExponentialSweep::Take2 {
            omega_a: 2.0 * PI * 20000.0,
            duration_s: 1.0,
        },
    ];
    for law in laws {
        println!("{law:?}");
        let x = law.render(1 << 16, fs, true)?;
        println!("  rendered peak {:.4}", x.peak());
        for frac in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let t = frac * law.duration_s();
            println!(
                "  t = {t:.2} s: f = {:>8.1} Hz, a_c = {:.4}",
                law.frequency(t) / (2.0 * PI),
                law.amplitude(t)
            );
        }
    }
    Ok(())
}
