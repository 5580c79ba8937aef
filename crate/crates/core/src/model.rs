//! Physical parameters, pseudosphere coordinates and quantum numbers.
//!
//! Every formula in the crate takes a [`PhysicalParams`] record so that
//! dimensional runs are possible; the default is natural units
//! `ħ = m = c = R = 1`.

use std::f64::consts::{PI, TAU};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub hbar: f64,
    pub mass: f64,
    pub light_speed: f64,
    /// Curvature radius `R` of the hyperbolic plane.
    pub curvature_radius: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            light_speed: 1.0,
            curvature_radius: 1.0,
        }
    }
}

impl PhysicalParams {
    pub fn new(hbar: f64, mass: f64, light_speed: f64, curvature_radius: f64) -> Result<Self> {
        let p = Self {
            hbar,
            mass,
            light_speed,
            curvature_radius,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_curvature_radius(self, curvature_radius: f64) -> Result<Self> {
        Self::new(self.hbar, self.mass, self.light_speed, curvature_radius)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("hbar", self.hbar),
            ("mass", self.mass),
            ("light_speed", self.light_speed),
            ("curvature_radius", self.curvature_radius),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(name, format!("must be finite and > 0, got {v}")));
            }
        }
        Ok(())
    }

    /// Energy unit `ħ²/(2mR²)` multiplying the dimensionless spectra.
    pub fn energy_unit(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass * self.curvature_radius.powi(2))
    }

    /// Dimensionless Euclidean time `ħβ/(mR²)` entering `exp(-β E / ħ)`
    /// once energies are written as `energy_unit * (k² + 1/4)`.
    pub fn reduced_beta(&self, beta: f64) -> f64 {
        self.hbar * beta / (self.mass * self.curvature_radius.powi(2))
    }
}

/// Aharonov–Bohm flux `ξ = eΦ/2πħc` and constant-field strength `b = eB/ħc`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxParams {
    pub xi: f64,
    pub b: f64,
    /// Informational only.
    pub flux_phi: Option<f64>,
}

impl FluxParams {
    pub fn new(xi: f64, b: f64) -> Result<Self> {
        if !xi.is_finite() {
            return Err(invalid("xi", "must be finite"));
        }
        if !(b.is_finite() && b >= 0.0) {
            return Err(invalid("b", format!("must be finite and >= 0, got {b}")));
        }
        Ok(Self {
            xi,
            b,
            flux_phi: None,
        })
    }

    /// Flux parameter from a physical flux `Φ` and charge `e`.
    pub fn from_flux(flux_phi: f64, charge: f64, params: &PhysicalParams, b: f64) -> Result<Self> {
        let xi = charge * flux_phi / (TAU * params.hbar * params.light_speed);
        let mut f = Self::new(xi, b)?;
        f.flux_phi = Some(flux_phi);
        Ok(f)
    }
}

/// A point `(τ, φ)` of the pseudosphere with metric `dτ² + sinh²τ dφ²`.
///
/// The angle is stored reduced to `[0, 2π)`; windings are carried separately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudospherePoint {
    tau: f64,
    phi: f64,
}

impl PseudospherePoint {
    pub fn new(tau: f64, phi: f64) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(invalid("tau", format!("must be finite and > 0, got {tau}")));
        }
        if !phi.is_finite() {
            return Err(invalid("phi", "must be finite"));
        }
        Ok(Self {
            tau,
            phi: normalize_angle(phi),
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// Reduces an angle into `[0, 2π)`.
pub fn normalize_angle(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Principal value of an angle difference in `(-π, π]`.
pub fn principal_angle(d: f64) -> f64 {
    let r = normalize_angle(d);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumNumbers {
    pub n_radial: u32,
    pub l: i64,
    pub k: f64,
    pub winding: i64,
}

/// Effective angular momentum `λ ≥ 0` labelling a radial channel.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EffectiveAngularMomentum(f64);

impl EffectiveAngularMomentum {
    pub fn new(lam: f64) -> Result<Self> {
        if !(lam.is_finite() && lam >= 0.0) {
            return Err(invalid(
                "lambda",
                format!("must be finite and >= 0, got {lam}"),
            ));
        }
        Ok(Self(lam))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// The AB-shifted channel `|l − ξ|`.
pub fn effective_channel(l: i64, xi: f64) -> EffectiveAngularMomentum {
    EffectiveAngularMomentum((l as f64 - xi).abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicInvariants {
    /// `φ₂ − φ₁` reduced to `(−π, π]`.
    pub delta_phi: f64,
    /// `cosh d(p₁, p₂)`, always `≥ 1`.
    pub cosh_distance: f64,
}

pub fn geodesic_invariants(p1: &PseudospherePoint, p2: &PseudospherePoint) -> GeodesicInvariants {
    let delta_phi = principal_angle(p2.phi - p1.phi);
    // cosh(τ₁−τ₂) + sinh τ₁ sinh τ₂ (1 − cos Δφ) avoids cancellation near coincidence
    let half = (0.5 * delta_phi).sin();
    let c = (p1.tau - p2.tau).cosh() + 2.0 * p1.tau.sinh() * p2.tau.sinh() * half * half;
    GeodesicInvariants {
        delta_phi,
        cosh_distance: c.max(1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn channel_examples() {
        assert_eq!(effective_channel(0, 0.0).value(), 0.0);
        assert_relative_eq!(effective_channel(2, 0.3).value(), 1.7, epsilon = 1e-15);
        assert_relative_eq!(effective_channel(-1, 0.3).value(), 1.3, epsilon = 1e-15);
    }

    #[test]
    fn geodesic_examples() {
        let a = PseudospherePoint::new(1.0, 0.0).unwrap();
        let g = geodesic_invariants(&a, &a);
        assert_eq!(g.delta_phi, 0.0);
        assert_eq!(g.cosh_distance, 1.0);

        let b = PseudospherePoint::new(1.0, PI).unwrap();
        let g = geodesic_invariants(&a, &b);
        let expected = 1f64.cosh().powi(2) + 1f64.sinh().powi(2);
        assert_relative_eq!(g.cosh_distance, expected, max_relative = 1e-14);
        assert_relative_eq!(g.cosh_distance, 3.76220, max_relative = 1e-5);
        assert_relative_eq!(g.delta_phi, PI);

        let c = PseudospherePoint::new(2.0, 0.0).unwrap();
        assert_relative_eq!(
            geodesic_invariants(&a, &c).cosh_distance,
            1.54308,
            max_relative = 1e-5
        );
    }

    #[test]
    fn rejects_bad_points() {
        assert!(PseudospherePoint::new(0.0, 0.0).is_err());
        assert!(PseudospherePoint::new(-1.0, 0.0).is_err());
        assert!(PseudospherePoint::new(1.0, f64::NAN).is_err());
        assert!(PhysicalParams::new(1.0, 0.0, 1.0, 1.0).is_err());
        assert!(FluxParams::new(0.2, -1.0).is_err());
    }

    #[test]
    fn angles_normalized() {
        let p = PseudospherePoint::new(1.0, -0.5).unwrap();
        assert_relative_eq!(p.phi(), TAU - 0.5);
        let p = PseudospherePoint::new(1.0, 7.0 * TAU + 0.25).unwrap();
        assert_relative_eq!(p.phi(), 0.25, epsilon = 1e-12);
        assert!(normalize_angle(-1e-18) < TAU);
    }

    proptest! {
        #[test]
        fn flux_shift_covariance(l in -50i64..50, xi in -5.0f64..5.0) {
            let a = effective_channel(l + 1, xi + 1.0).value();
            let b = effective_channel(l, xi).value();
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a));
            let c = effective_channel(l, xi + 1.0).value();
            let d = effective_channel(l - 1, xi).value();
            prop_assert!((c - d).abs() <= 1e-12 * (1.0 + c));
        }

        #[test]
        fn reflection_symmetry(l in -50i64..50, xi in -5.0f64..5.0) {
            prop_assert_eq!(effective_channel(l, xi).value(), effective_channel(-l, -xi).value());
        }

        #[test]
        fn cosh_distance_at_least_one(
            t1 in 1e-3f64..5.0, t2 in 1e-3f64..5.0, p1 in 0.0f64..TAU, p2 in 0.0f64..TAU
        ) {
            let a = PseudospherePoint::new(t1, p1).unwrap();
            let b = PseudospherePoint::new(t2, p2).unwrap();
            let g = geodesic_invariants(&a, &b);
            prop_assert!(g.cosh_distance >= 1.0);
            prop_assert!(g.delta_phi > -PI && g.delta_phi <= PI);
            if (t1 - t2).abs() > 1e-6 {
                prop_assert!(g.cosh_distance > 1.0);
            }
        }
    }
}
