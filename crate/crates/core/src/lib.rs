//! FIR impulse-response identification by allpass phase introduction and
//! removal.
//!
//! A zero-phase band-limited impulse ([`impulse`]) is dispersed into a chirp
//! by an allpass phase curve ([`chirp`]). A system driven by that chirp
//! ([`system`]) is identified by removing the same phase from its response
//! ([`recovery`]). Only phase is touched, never magnitude, so recovery never
//! divides and stays finite where the excitation has no power.
//!
//! ```
//! use allpass_ir::prelude::*;
//!
//! let (n, fs) = (4096, 48_000.0);
//! let band = BandLimits::new(100.0, 20_000.0);
//! let reference = make_reference(n, fs, &band, &SweepSpec::linear(0.06))?;
//! let system = random_fir_system(n, fs, 1024, 7)?;
//! let captured = force_system(&system, &reference.signal)?;
//!
//! let mut model = recover_impulse_model(&captured, &reference.phase, &band)?;
//! let err = model.score(&dft(&system.taps), DEFAULT_GUARD_BINS)?;
//! assert!(err < 1e-9);
//! # Ok::<(), allpass_ir::Error>(())
//! ```

pub mod chirp;
pub mod cli;
pub mod error;
pub mod impulse;
pub mod io;
pub mod recovery;
pub mod signal;
pub mod system;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::chirp::{
        apply_allpass, exp_sweep_take1, exp_sweep_take2, invert_phase, linear_chirp_phase,
        make_reference, ExponentialSweep, PhaseCurve, Reference, SweepFamily, SweepSpec,
    };
    pub use crate::impulse::{band_limited_impulse, time_domain_impulse, BandLimits};
    pub use crate::recovery::{
        band_limit, in_band_error, naive_deconvolve, recover_impulse_model, RecoveryResult,
        DEFAULT_GUARD_BINS,
    };
    pub use crate::signal::{dft, idft, multiply, RealSignal, Spectrum};
    pub use crate::system::{
        add_noise, force_system, random_fir_system, stack_captures, CaptureSet, SystemModel,
    };
    pub use crate::Error;
}
