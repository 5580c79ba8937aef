//! Aharonov–Bohm propagators, spectra and interference on the hyperbolic plane.
//!
//! The crate works in pseudosphere coordinates `(τ, φ)` with metric
//! `dτ² + sinh²τ dφ²`. Curved-space kernels are evaluated in Euclidean time
//! from their spectral representations; a finite-volume radial oracle
//! ([`grid`]) cross-checks them independently. Real-time interference is
//! available in the flat-space limit ([`flat_limit`]).
//!
//! ```
//! use hyperbolic_ab::landau::landau_levels;
//! use hyperbolic_ab::PhysicalParams;
//!
//! let levels = landau_levels(3.0, &PhysicalParams::default()).unwrap();
//! assert_eq!(levels, vec![1.5, 3.5, 4.5]);
//! ```

#![allow(clippy::excessive_precision)]

pub mod error;
pub mod flat_limit;
pub mod grid;
pub mod kernel;
pub mod landau;
pub mod model;
pub mod par;
pub mod potentials;
pub mod quad;
pub mod specfun;
pub mod validation;

pub use error::{Error, Result};
pub use model::{
    effective_channel, geodesic_invariants, EffectiveAngularMomentum, FluxParams,
    GeodesicInvariants, PhysicalParams, PseudospherePoint, QuantumNumbers,
};
pub use num_complex::Complex64;
pub use par::Execution;
pub use specfun::SeriesControls;

/// Complex numbers used throughout the crate.
pub type ComplexValue = Complex64;
