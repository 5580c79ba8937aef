//! Constant magnetic field on the pseudosphere.
//!
//! Field strength enters as the dimensionless `b`; bound states exist only
//! for `N < b − 1/2`. Energies are in units of `ħ²/2m` (the curvature radius
//! is absorbed into `b` and `τ`). Wave functions are normalized against
//! `sinh τ dτ dφ`.
//!
//! The radial functions depend on `|l|` only. With the gauge
//! `A_φ = b(cosh τ − 1)` they solve the radial equation for one sign of `l`;
//! the other sign is the mirrored field orientation.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::model::{PhysicalParams, PseudospherePoint};
use crate::specfun::{hyp2f1_split, jacobi_poly, ln_gamma, ln_gamma_real, ln_sinh, SeriesControls};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub n: u32,
    pub l: i64,
    pub energy: f64,
    /// `C_{N,l}` with `|Ψ|²` integrating to one.
    pub normalization_constant: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringState {
    pub k: f64,
    pub l: i64,
    pub energy: f64,
    pub b: f64,
}

fn unit(params: &PhysicalParams) -> f64 {
    params.hbar * params.hbar / (2.0 * params.mass)
}

fn check_b(b: f64) -> Result<()> {
    if !(b.is_finite() && b >= 0.0) {
        return Err(invalid("b", format!("must be finite and >= 0, got {b}")));
    }
    Ok(())
}

fn check_k(k: f64) -> Result<()> {
    if !(k.is_finite() && k > 0.0) {
        return Err(invalid("k", format!("must be finite and > 0, got {k}")));
    }
    Ok(())
}

/// Number of bound levels: the `N ≥ 0` with `N < b − 1/2`.
pub fn bound_level_count(b: f64) -> usize {
    if b.is_nan() || b <= 0.5 {
        return 0;
    }
    // ceil(b − 1/2) is the first N failing N < b − 1/2
    (b - 0.5).ceil() as usize
}

/// `E_N = (ħ²/2m)[b² + 1/4 − (b − N − 1/2)²]` for every bound `N`.
pub fn landau_levels(b: f64, params: &PhysicalParams) -> Result<Vec<f64>> {
    check_b(b)?;
    params.validate()?;
    let u = unit(params);
    Ok((0..bound_level_count(b))
        .map(|n| {
            let d = b - n as f64 - 0.5;
            u * (b * b + 0.25 - d * d)
        })
        .collect())
}

pub fn bound_state(n: u32, l: i64, b: f64, params: &PhysicalParams) -> Result<BoundState> {
    check_b(b)?;
    params.validate()?;
    if (n as usize) >= bound_level_count(b) {
        return Err(Error::InvalidQuantumNumber(format!(
            "N = {n} outside the bound window N < b − 1/2 = {}",
            b - 0.5
        )));
    }
    let nf = n as f64;
    let lf = l.unsigned_abs() as f64;
    let ln_c2 = ln_gamma_real(nf + 1.0)?.0
        + (2.0 * b - 2.0 * nf - 1.0).ln()
        + ln_gamma_real(2.0 * b - nf + lf)?.0
        - (4.0 * PI).ln()
        - ln_gamma_real(nf + lf + 1.0)?.0
        - ln_gamma_real(2.0 * b - nf)?.0;
    let d = b - nf - 0.5;
    Ok(BoundState {
        n,
        l,
        energy: unit(params) * (b * b + 0.25 - d * d),
        normalization_constant: (0.5 * ln_c2).exp(),
    })
}

/// `Ψ = C t^{|l|} (1 − t²)^{b−N} P_N^{(|l|, 2b−2N−1)}(1 − 2t²) e^{ilφ}`, `t = tanh(τ/2)`.
pub fn landau_bound_wavefunction(
    n: u32,
    l: i64,
    b: f64,
    p: &PseudospherePoint,
    params: &PhysicalParams,
) -> Result<Complex64> {
    let state = bound_state(n, l, b, params)?;
    let nf = n as f64;
    let lf = l.unsigned_abs() as f64;
    let h = 0.5 * p.tau();
    let t = h.tanh();
    // 1 − t² = cosh^{−2}(τ/2)
    let ln_one_minus = -2.0 * h.cosh().ln();
    let ln_radial = lf * t.ln() + (b - nf) * ln_one_minus;
    let poly = jacobi_poly(n, lf, 2.0 * b - 2.0 * nf - 1.0, 1.0 - 2.0 * t * t);
    let radial = state.normalization_constant * ln_radial.exp() * poly;
    Ok(Complex64::from_polar(radial, l as f64 * p.phi()))
}

pub fn scattering_state(
    k: f64,
    l: i64,
    b: f64,
    params: &PhysicalParams,
) -> Result<ScatteringState> {
    check_k(k)?;
    check_b(b)?;
    params.validate()?;
    Ok(ScatteringState {
        k,
        l,
        energy: unit(params) * (k * k + b * b + 0.25),
        b,
    })
}

/// Continuum state, `δ(k − k′)` normalized:
/// `(1/π|l|!) √(k sinh 2πk/4π) Γ(1/2+ik+b+|l|) |Γ(1/2+ik−b)|
///  t^{|l|} (1−t²)^{1/2+ik} ₂F₁(1/2+ik+b+|l|, 1/2+ik−b; 1+|l|; t²) e^{ilφ}`.
///
/// Reduces pointwise to [`free_wavefunction`] at `b = 0`.
pub fn landau_scattering_wavefunction(
    k: f64,
    l: i64,
    b: f64,
    p: &PseudospherePoint,
    params: &PhysicalParams,
    ctl: &SeriesControls,
) -> Result<Complex64> {
    scattering_state(k, l, b, params)?;
    let lf = l.unsigned_abs() as f64;
    let h = 0.5 * p.tau();
    let t = h.tanh();
    let ln_cosh = h.cosh().ln();
    let a = Complex64::new(0.5 + b + lf, k);
    let c = Complex64::new(0.5 - b, k);
    let f = hyp2f1_split(
        a,
        c,
        Complex64::new(1.0 + lf, 0.0),
        t * t,
        (-2.0 * ln_cosh).exp(),
        ctl,
    )?;
    let ln_norm = -PI.ln() - ln_gamma_real(lf + 1.0)?.0
        + 0.5 * (k.ln() + ln_sinh(2.0 * PI * k) - (4.0 * PI).ln());
    let ln_amp = ln_norm + ln_gamma(a)? + ln_gamma(c)?.re + lf * t.ln()
        - 2.0 * Complex64::new(0.5, k) * ln_cosh;
    Ok(ln_amp.exp() * f * Complex64::from_polar(1.0, l as f64 * p.phi()))
}

/// Zero-field state `√(k sinh πk/2π²) Γ(1/2+ik+|l|) e^{ilφ} P^{−|l|}_{ik−1/2}(cosh τ)`
/// with energy `(ħ²/2m)(k² + 1/4)`.
pub fn free_wavefunction(
    k: f64,
    l: i64,
    p: &PseudospherePoint,
    params: &PhysicalParams,
    ctl: &SeriesControls,
) -> Result<Complex64> {
    check_k(k)?;
    params.validate()?;
    let lf = l.unsigned_abs() as f64;
    let parts = crate::specfun::conical_scaled(lf, k, p.tau(), ctl)?;
    let ln_norm = 0.5 * (k.ln() + ln_sinh(PI * k) - LN_2 - 2.0 * PI.ln());
    let ln_amp = ln_gamma(Complex64::new(0.5 + lf, k))? + ln_norm + parts.ln_amp;
    Ok(ln_amp.exp() * parts.value * Complex64::from_polar(1.0, l as f64 * p.phi()))
}

pub fn free_energy(k: f64, params: &PhysicalParams) -> Result<f64> {
    check_k(k)?;
    params.validate()?;
    Ok(unit(params) * (k * k + 0.25))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate_breaks, QuadControls};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn pt(tau: f64, phi: f64) -> PseudospherePoint {
        PseudospherePoint::new(tau, phi).unwrap()
    }
    fn nat() -> PhysicalParams {
        PhysicalParams::default()
    }

    #[test]
    fn ladder() {
        assert!(landau_levels(0.4, &nat()).unwrap().is_empty());
        assert!(landau_levels(0.5, &nat()).unwrap().is_empty());
        assert_eq!(landau_levels(3.0, &nat()).unwrap(), vec![1.5, 3.5, 4.5]);
        assert!(landau_levels(-1.0, &nat()).is_err());
    }

    #[test]
    fn level_count_matches_enumeration() {
        for b in [0.0, 0.5, 0.51, 1.5, 3.0, 10.2] {
            let brute = (0..100).filter(|&n| (n as f64) < b - 0.5).count();
            assert_eq!(landau_levels(b, &nat()).unwrap().len(), brute, "b = {b}");
        }
    }

    #[test]
    fn dimensional_levels_scale() {
        let p = PhysicalParams::new(2.0, 0.5, 1.0, 3.0).unwrap();
        let a = landau_levels(3.0, &p).unwrap();
        assert_eq!(a, vec![12.0, 28.0, 36.0]);
    }

    fn radial_overlap(n1: u32, n2: u32, l: i64, b: f64) -> f64 {
        let q = QuadControls {
            abs_tol: 1e-12,
            rel_tol: 1e-11,
            ..Default::default()
        };
        let f = |tau: f64| {
            if tau == 0.0 {
                return 0.0;
            }
            let p = pt(tau, 0.0);
            let a = landau_bound_wavefunction(n1, l, b, &p, &nat()).unwrap();
            let c = landau_bound_wavefunction(n2, l, b, &p, &nat()).unwrap();
            (a.conj() * c).re * tau.sinh()
        };
        2.0 * PI
            * integrate_breaks(f, &[0.0, 1.0, 3.0, 8.0, 20.0, 60.0], &q)
                .unwrap()
                .value
    }

    #[test]
    fn normalization_and_orthogonality() {
        assert_relative_eq!(radial_overlap(0, 0, 0, 3.0), 1.0, epsilon = 1e-8);
        assert!(radial_overlap(0, 1, 0, 3.0).abs() < 1e-8);
        assert_relative_eq!(radial_overlap(2, 2, 1, 4.2), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn vanishes_at_origin_for_nonzero_l() {
        let p = pt(1e-8, 0.3);
        assert!(
            landau_bound_wavefunction(0, 2, 3.0, &p, &nat())
                .unwrap()
                .norm()
                < 1e-15
        );
        let s = landau_scattering_wavefunction(1.0, 1, 0.7, &p, &nat(), &SeriesControls::default())
            .unwrap();
        assert!(s.norm() < 1e-7);
        assert!(landau_bound_wavefunction(2, 0, 2.5, &p, &nat()).is_err());
    }

    #[test]
    fn energies() {
        assert_relative_eq!(scattering_state(2.0, 0, 1.0, &nat()).unwrap().energy, 2.625);
        assert_relative_eq!(free_energy(2.0, &nat()).unwrap(), 2.125);
    }

    #[test]
    fn zero_field_reduction() {
        let ctl = SeriesControls::default();
        for (k, l) in [(0.5, 0), (2.0, 1), (2.0, -3), (0.5, 3)] {
            for tau in [0.1, 1.0, 3.0] {
                let p = pt(tau, 0.4);
                let s = landau_scattering_wavefunction(k, l, 0.0, &p, &nat(), &ctl).unwrap();
                let f = free_wavefunction(k, l, &p, &nat(), &ctl).unwrap();
                assert!(
                    (s - f).norm() <= 1e-8 * f.norm(),
                    "k={k} l={l} τ={tau}: {s} vs {f}"
                );
            }
        }
    }

    #[test]
    fn free_state_values() {
        let ctl = SeriesControls::default();
        let k: f64 = 1.3;
        let v = free_wavefunction(k, 0, &pt(1e-9, 0.0), &nat(), &ctl).unwrap();
        let g = ln_gamma(Complex64::new(0.5, k)).unwrap().re.exp();
        let e = (k * (PI * k).sinh() / (2.0 * PI * PI)).sqrt() * g;
        assert_relative_eq!(v.norm(), e, max_relative = 1e-8);
        // P^{−1}_{i−1/2}(cosh 1) (mpmath)
        let v = free_wavefunction(1.0, 1, &pt(1.0, 0.0), &nat(), &ctl).unwrap();
        let g = ln_gamma(Complex64::new(1.5, 1.0)).unwrap().re.exp();
        let e = (PI.sinh() / (2.0 * PI * PI)).sqrt() * g * 0.393_618_872_868_244_9;
        assert_relative_eq!(v.norm(), e, max_relative = 1e-10);
    }

    #[test]
    fn scattering_solves_radial_equation() {
        // −(1/s)(s f′)′ + (l − b(cosh τ − 1))²/s² f = (k² + b² + 1/4) f, with l ≥ 0
        let ctl = SeriesControls::default();
        let (k, b) = (1.3, 0.8);
        for l in [0i64, 1, 2] {
            let tau = 0.9;
            let f = |x: f64| {
                landau_scattering_wavefunction(k, l, b, &pt(x, 0.0), &nat(), &ctl).unwrap()
            };
            let h = 1e-3;
            let (fm, f0, fp) = (f(tau - h), f(tau), f(tau + h));
            let d2 = (fp - 2.0 * f0 + fm) / (h * h);
            let d1 = (fp - fm) / (2.0 * h);
            let s = tau.sinh();
            let a = l as f64 - b * (tau.cosh() - 1.0);
            let lhs = -(d2 + d1 * tau.cosh() / s) + f0 * (a * a / (s * s));
            let rhs = f0 * (k * k + b * b + 0.25);
            assert!(
                (lhs - rhs).norm() < 1e-5 * rhs.norm(),
                "l={l}: {lhs} vs {rhs}"
            );
        }
    }

    proptest! {
        #[test]
        fn below_continuum(b in 0.0f64..30.0) {
            let top = 0.5 * (b * b + 0.25);
            let levels = landau_levels(b, &nat()).unwrap();
            for w in levels.windows(2) {
                prop_assert!(w[1] > w[0]);
            }
            for e in levels {
                prop_assert!(e > 0.0 && e < top);
            }
        }
    }
}
