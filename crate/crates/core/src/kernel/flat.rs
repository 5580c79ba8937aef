use std::f64::consts::PI;

use num_complex::Complex64;

use super::KernelValue;
use crate::error::{invalid, Error, Result};
use crate::model::PhysicalParams;
use crate::specfun::{bessel_i_scaled, SeriesControls};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatControls {
    /// Channels `|n| ≤ n_max`.
    pub n_max: u32,
    pub series: SeriesControls,
    pub truncation_tol: f64,
}

impl Default for FlatControls {
    fn default() -> Self {
        Self {
            n_max: 40,
            series: SeriesControls::default(),
            truncation_tol: 1e-10,
        }
    }
}

/// Flat-plane AB kernel
/// `(m/2πiħT) e^{im(r₁²+r₂²)/2ħT} Σ_n e^{inΔφ} I_{|n−ξ|}(m r₁ r₂/iħT)`.
///
/// Euclidean time is `T = −iβ`. Real `T` is accepted but the channel sum
/// then converges only once `|n| ≳ m r₁ r₂/ħ|T|`.
pub fn flat_ab_kernel(
    r1: f64,
    r2: f64,
    delta_phi: f64,
    xi: f64,
    time: Complex64,
    params: &PhysicalParams,
    ctl: &FlatControls,
) -> Result<KernelValue> {
    params.validate()?;
    for (name, r) in [("r1", r1), ("r2", r2)] {
        if !(r.is_finite() && r > 0.0) {
            return Err(invalid(name, format!("must be finite and > 0, got {r}")));
        }
    }
    if !(time.norm() > 0.0 && time.re.is_finite() && time.im.is_finite()) {
        return Err(invalid("time", "must be finite and nonzero"));
    }
    if time.im > 0.0 {
        return Err(invalid("time", "Im T must be <= 0"));
    }
    if !(delta_phi.is_finite() && xi.is_finite()) {
        return Err(invalid("delta_phi", "angle and flux must be finite"));
    }
    let (m, hbar) = (params.mass, params.hbar);
    let i = Complex64::i();
    let iht = i * hbar * time;
    let z = m * r1 * r2 / iht;
    let pre = m / (2.0 * PI * iht);
    let exponent = i * m * (r1 * r1 + r2 * r2) / (2.0 * hbar * time) + z.re.abs();
    let n_max = ctl.n_max as i64;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    let mut outer = 0.0;
    for n in -n_max..=n_max {
        let nu = (n as f64 - xi).abs();
        let term =
            Complex64::from_polar(1.0, n as f64 * delta_phi) * bessel_i_scaled(nu, z, &ctl.series)?;
        sum += term;
        scale += term.norm();
        if n.abs() > n_max - 3 {
            outer += term.norm();
        }
    }
    let truncation = if scale > 0.0 { outer / scale } else { 0.0 };
    if truncation > ctl.truncation_tol {
        return Err(Error::Truncation {
            what: "flat channel sum",
            tail: truncation,
        });
    }
    let factor = pre * exponent.exp();
    Ok(KernelValue {
        value: factor * sum,
        abs_err: 0.0,
        truncation,
        scale: factor.norm() * scale,
    })
}

/// Free Euclidean kernel on the plane,
/// `(m/2πħβ) exp(−m(r₁² + r₂² − 2r₁r₂ cos Δφ)/2ħβ)`.
pub fn free_flat_kernel(
    r1: f64,
    r2: f64,
    delta_phi: f64,
    beta: f64,
    params: &PhysicalParams,
) -> f64 {
    let (m, hbar) = (params.mass, params.hbar);
    let d2 = (r1 - r2).powi(2) + 4.0 * r1 * r2 * (0.5 * delta_phi).sin().powi(2);
    m / (2.0 * PI * hbar * beta) * (-m * d2 / (2.0 * hbar * beta)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn euclid(beta: f64) -> Complex64 {
        Complex64::new(0.0, -beta)
    }

    #[test]
    fn zero_flux_is_free_kernel() {
        let p = PhysicalParams::default();
        let k = flat_ab_kernel(
            1.0,
            1.0,
            0.3,
            0.0,
            euclid(0.5),
            &p,
            &FlatControls::default(),
        )
        .unwrap();
        let e = free_flat_kernel(1.0, 1.0, 0.3, 0.5, &p);
        assert_relative_eq!(k.value.re, e, max_relative = 1e-12);
        assert!(k.value.im.abs() < 1e-14 * e);
        let p = PhysicalParams::new(0.7, 1.9, 1.0, 1.0).unwrap();
        let k = flat_ab_kernel(
            2.0,
            1.3,
            2.1,
            0.0,
            euclid(0.8),
            &p,
            &FlatControls::default(),
        )
        .unwrap();
        assert_relative_eq!(
            k.value.re,
            free_flat_kernel(2.0, 1.3, 2.1, 0.8, &p),
            max_relative = 1e-12
        );
    }

    #[test]
    fn integer_flux_is_a_phase() {
        let p = PhysicalParams::default();
        let c = FlatControls::default();
        let a = flat_ab_kernel(1.0, 1.5, 0.4, 0.0, euclid(0.5), &p, &c)
            .unwrap()
            .value;
        let b = flat_ab_kernel(1.0, 1.5, 0.4, 2.0, euclid(0.5), &p, &c)
            .unwrap()
            .value;
        let shifted = a * Complex64::from_polar(1.0, 2.0 * 0.4);
        assert!((b - shifted).norm() < 1e-12 * a.norm());
    }

    #[test]
    fn half_flux_real_at_zero_angle() {
        let p = PhysicalParams::default();
        let k = flat_ab_kernel(
            1.0,
            1.5,
            0.0,
            0.5,
            euclid(0.5),
            &p,
            &FlatControls::default(),
        )
        .unwrap();
        assert!(k.value.im.abs() < 1e-14 * k.value.re.abs());
    }

    #[test]
    fn rejects_bad_input() {
        let p = PhysicalParams::default();
        let c = FlatControls::default();
        assert!(flat_ab_kernel(0.0, 1.0, 0.0, 0.0, euclid(1.0), &p, &c).is_err());
        assert!(flat_ab_kernel(1.0, 1.0, 0.0, 0.0, Complex64::new(0.0, 0.0), &p, &c).is_err());
        let tight = FlatControls { n_max: 3, ..c };
        assert!(matches!(
            flat_ab_kernel(3.0, 3.0, 0.0, 0.0, euclid(0.5), &p, &tight),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn real_time_best_effort() {
        // small argument: the channel sum converges and matches the free kernel
        let p = PhysicalParams::default();
        let t = Complex64::new(2.0, 0.0);
        let k = flat_ab_kernel(0.5, 0.6, 0.9, 0.0, t, &p, &FlatControls::default()).unwrap();
        let i = Complex64::i();
        let d2 = 0.25 + 0.36 - 2.0 * 0.3 * 0.9f64.cos();
        let e = 1.0 / (2.0 * PI * i * t) * (i * d2 / (2.0 * t)).exp();
        assert!((k.value - e).norm() < 1e-10 * e.norm());
    }
}
