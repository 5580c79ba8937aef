//! Euclidean Aharonov–Bohm propagators on the pseudosphere.
//!
//! The radial channel kernel `G_λ` is a spectral integral over conical
//! functions. Summing channels `λ = |l − ξ|` with `e^{ilΔφ}/2π` gives the
//! partial-wave form; Fourier transforming in `λ` gives the winding form.
//! The two agree by Poisson resummation.
//!
//! Time enters as `exp(−βE/ħ)` with `E = (ħ²/2mR²)(k² + 1/4)`; kernels carry
//! `1/R²` so they integrate against `R² sinh τ dτ dφ`.

mod flat;
mod partial_wave;
mod radial;
mod winding;

pub use flat::{flat_ab_kernel, free_flat_kernel, FlatControls};
pub use partial_wave::partial_wave_kernel;
pub use radial::{euclidean_radial_kernel, radial_spectral_weight, RadialKernel};
pub use winding::{
    poisson_duality, winding_kernel, winding_kernel_sum, Duality, LambdaTable, WindingSum,
};

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::model::{PhysicalParams, PseudospherePoint};
use crate::par::Execution;
use crate::quad::QuadControls;
use crate::specfun::SeriesControls;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelControls {
    pub quad: QuadControls,
    pub series: SeriesControls,
    /// Spectral cutoff; `None` means `40/√β'` with `β' = ħβ/mR²`.
    pub k_max: Option<f64>,
    /// Largest accepted relative truncation estimate.
    pub truncation_tol: f64,
    pub exec: Execution,
}

impl Default for KernelControls {
    fn default() -> Self {
        Self {
            quad: QuadControls::default(),
            series: SeriesControls::default(),
            k_max: None,
            truncation_tol: 1e-8,
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelRequest {
    pub p1: PseudospherePoint,
    pub p2: PseudospherePoint,
    pub beta: f64,
    pub xi: f64,
    pub l_max: u32,
    pub n_max: u32,
    pub params: PhysicalParams,
    pub controls: KernelControls,
}

impl KernelRequest {
    pub fn new(p1: PseudospherePoint, p2: PseudospherePoint, beta: f64, xi: f64) -> Result<Self> {
        let r = Self {
            p1,
            p2,
            beta,
            xi,
            l_max: 40,
            n_max: 5,
            params: PhysicalParams::default(),
            controls: KernelControls::default(),
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(invalid(
                "beta",
                format!("must be finite and > 0, got {}", self.beta),
            ));
        }
        if !self.xi.is_finite() {
            return Err(invalid("xi", "must be finite"));
        }
        if self.l_max < 1 {
            return Err(invalid("l_max", "must be >= 1"));
        }
        if self.n_max < 1 {
            return Err(invalid("n_max", "must be >= 1"));
        }
        self.params.validate()?;
        if let Some(k) = self.controls.k_max {
            if !(k.is_finite() && k > 0.0) {
                return Err(invalid("k_max", format!("must be finite and > 0, got {k}")));
            }
        }
        Ok(())
    }

    /// `φ₂ − φ₁` in `(−π, π]`.
    pub fn delta_phi(&self) -> f64 {
        crate::model::principal_angle(self.p2.phi() - self.p1.phi())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: Complex64,
    /// Accumulated quadrature error estimate.
    pub abs_err: f64,
    /// Estimated relative size of the neglected terms.
    pub truncation: f64,
    /// Sum of term magnitudes, a natural scale for the result.
    pub scale: f64,
}
