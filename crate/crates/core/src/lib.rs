//! Numerical laboratory for weighted Dirac combs on `Z`, `Z^2` and sparse
//! planar point sets: seeded generators for a family of ordered and
//! disordered systems, finite-window autocorrelation and diffraction
//! estimators, block-entropy and patch-census tools, and orchestrated
//! experiments that compare the estimates against exact reference spectra.
//!
//! All generators are driven by a counter-based RNG ([`rng::SeededRng`]),
//! so every result is reproducible bit for bit from `(seed, stream)` and
//! growing a window preserves the values already generated.

pub mod combs;
pub mod correlation;
pub mod entropy;
pub mod error;
pub mod experiments;
mod fft;
pub mod generators;
pub mod io;
pub mod rng;
pub mod spectra;

pub use error::{Error, Result};
