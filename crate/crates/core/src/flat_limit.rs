//! The flat-space limit `R → ∞`, where `r = Rτ` becomes the Euclidean radius.
//!
//! Here kernels are closed forms, so real time is allowed. The winding
//! kernels reduce to the Gaussian form
//! `K_n = (m/2πiħT) exp[imR²(τ₂−τ₁)²/2ħT + iħT/8mR²τ₁τ₂ + iξΘ_n + icΘ_n²/2]`
//! with `c = mR²τ₁τ₂/ħT` and `Θ_n = φ₂ − φ₁ + 2πn`. Their cross terms give
//! the interference pattern `I_nl = K_n* K_l + K_l* K_n`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::model::PhysicalParams;
use crate::quad::{integrate_breaks, QuadControls};
use crate::specfun::{bessel_i, bessel_i_scaled, legendre_p, SeriesControls};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_dev: f64,
}

/// Compares `ν^μ P^{−μ}_ν(cosh(z/ν))` with its limit `I_μ(z)`.
pub fn legendre_bessel_limit_check(mu: f64, z: f64, nu: f64) -> Result<LimitCheck> {
    if !(nu.is_finite() && nu >= 10.0) {
        return Err(invalid("nu", format!("must be finite and >= 10, got {nu}")));
    }
    if !(z.is_finite() && z > 0.0) {
        return Err(invalid("z", format!("must be finite and > 0, got {z}")));
    }
    let ctl = SeriesControls::default();
    // legendre_p takes the degree as ν + 1/2
    let p = legendre_p(mu, Complex64::new(nu + 0.5, 0.0), z / nu, &ctl)?.re;
    let lhs = (mu * nu.ln()).exp() * p;
    let rhs = bessel_i(mu, Complex64::new(z, 0.0), &ctl)?.re;
    Ok(LimitCheck {
        lhs,
        rhs,
        rel_dev: ((lhs - rhs) / rhs).abs(),
    })
}

fn check_time(time: Complex64) -> Result<()> {
    if !(time.re.is_finite() && time.im.is_finite() && time.norm() > 0.0) {
        return Err(invalid("time", "must be finite and nonzero"));
    }
    if time.im > 0.0 {
        return Err(invalid("time", "Im T must be <= 0"));
    }
    Ok(())
}

/// `(m/2πiħT) exp(im(r₁² + r₂²)/2ħT) I_{|λ|}(m r₁ r₂/iħT)`; Euclidean at `T = −iβ`.
pub fn flat_radial_kernel(
    lam: f64,
    r1: f64,
    r2: f64,
    time: Complex64,
    params: &PhysicalParams,
) -> Result<Complex64> {
    params.validate()?;
    check_time(time)?;
    for (name, r) in [("r1", r1), ("r2", r2)] {
        if !(r.is_finite() && r > 0.0) {
            return Err(invalid(name, format!("must be finite and > 0, got {r}")));
        }
    }
    let (m, hbar) = (params.mass, params.hbar);
    let i = Complex64::i();
    let iht = i * hbar * time;
    let z = m * r1 * r2 / iht;
    let exponent = i * m * (r1 * r1 + r2 * r2) / (2.0 * hbar * time) + z.re.abs();
    let bessel = bessel_i_scaled(lam.abs(), z, &SeriesControls::default())?;
    Ok(m / (2.0 * PI * iht) * exponent.exp() * bessel)
}

/// `e^{iξΘ_n} ∫ dλ e^{iλΘ_n} K_{|λ|}(r₂, r₁; −iβ)` by quadrature of the flat
/// radial kernel (Euclidean time only).
pub fn flat_winding_kernel(
    n: i64,
    r1: f64,
    r2: f64,
    delta_phi: f64,
    xi: f64,
    beta: f64,
    params: &PhysicalParams,
) -> Result<Complex64> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(invalid(
            "beta",
            format!("must be finite and > 0, got {beta}"),
        ));
    }
    let time = Complex64::new(0.0, -beta);
    let theta = delta_phi + 2.0 * PI * n as f64;
    let k0 = flat_radial_kernel(0.0, r1, r2, time, params)?.re;
    let mut top = 1.0;
    while flat_radial_kernel(top, r1, r2, time, params)?.re > 1e-15 * k0 {
        top += 1.0;
        if top > 1e4 {
            return Err(invalid("beta", "flat λ-integral does not decay"));
        }
    }
    let pts: Vec<f64> = (0..=top as usize).map(|j| j as f64).collect();
    let q = QuadControls {
        abs_tol: 1e-13 * k0,
        rel_tol: 1e-9,
        ..Default::default()
    };
    let mut failure = None;
    let v = integrate_breaks(
        |l| match flat_radial_kernel(l, r1, r2, time, params) {
            Ok(k) => (l * theta).cos() * k.re,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        &pts,
        &q,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(Complex64::from_polar(2.0 * v.value, xi * theta))
}

/// Endpoints, curvature radius and real time entering the interference law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceGeometry {
    pub tau1: f64,
    pub tau2: f64,
    /// Angles are used as given, so `Θ_n = φ₂ − φ₁ + 2πn` follows their labelling.
    pub phi1: f64,
    pub phi2: f64,
    pub curvature_radius: f64,
    pub time: f64,
    pub params: PhysicalParams,
}

impl InterferenceGeometry {
    pub fn new(
        tau1: f64,
        tau2: f64,
        phi1: f64,
        phi2: f64,
        curvature_radius: f64,
        time: f64,
    ) -> Result<Self> {
        let g = Self {
            tau1,
            tau2,
            phi1,
            phi2,
            curvature_radius,
            time,
            params: PhysicalParams::default(),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("tau1", self.tau1),
            ("tau2", self.tau2),
            ("curvature_radius", self.curvature_radius),
            ("time", self.time),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(name, format!("must be finite and > 0, got {v}")));
            }
        }
        if !(self.phi1.is_finite() && self.phi2.is_finite()) {
            return Err(invalid("phi", "must be finite"));
        }
        self.params.validate()
    }

    /// `c = mR²τ₁τ₂/ħT`.
    pub fn coupling(&self) -> f64 {
        let p = &self.params;
        p.mass * self.curvature_radius.powi(2) * self.tau1 * self.tau2 / (p.hbar * self.time)
    }

    pub fn theta(&self, n: i64) -> f64 {
        self.phi2 - self.phi1 + 2.0 * PI * n as f64
    }

    /// `m/2πiħT`.
    fn prefactor(&self) -> Complex64 {
        let p = &self.params;
        Complex64::new(0.0, -p.mass / (2.0 * PI * p.hbar * self.time))
    }

    /// Winding-independent part of the exponent.
    fn common_phase(&self) -> f64 {
        let p = &self.params;
        let r2 = self.curvature_radius.powi(2);
        p.mass * r2 * (self.tau2 - self.tau1).powi(2) / (2.0 * p.hbar * self.time)
            + p.hbar * self.time / (8.0 * p.mass * r2 * self.tau1 * self.tau2)
    }
}

/// Flat-limit winding propagator with the Gaussian `cΘ_n²/2` phase.
pub fn partial_propagator_flat(n: i64, g: &InterferenceGeometry, xi: f64) -> Result<Complex64> {
    g.validate()?;
    let theta = g.theta(n);
    let phase = g.common_phase() + xi * theta + 0.5 * g.coupling() * theta * theta;
    Ok(g.prefactor() * Complex64::from_polar(1.0, phase))
}

/// Variant with a phase linear in `Θ_n`: `icΘ_n/2` in place of `icΘ_n²/2`.
/// Kept for comparison only; it does not follow from the Gaussian integral.
pub fn partial_propagator_flat_linear(
    n: i64,
    g: &InterferenceGeometry,
    xi: f64,
) -> Result<Complex64> {
    g.validate()?;
    let theta = g.theta(n);
    let phase = g.common_phase() + xi * theta + 0.5 * g.coupling() * theta;
    Ok(g.prefactor() * Complex64::from_polar(1.0, phase))
}

/// Normalization of the interference term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// `2(m/2πiħT)² cos(…)`, keeping the negative sign of `i⁻²`.
    Verbatim,
    /// `2(m/2πħT)² cos(…)`, which equals `2 Re(K_n* K_l)`.
    Magnitude,
    /// `cos(…)` alone.
    #[default]
    Contrast,
}

impl Convention {
    fn scale(self, time: f64, params: &PhysicalParams) -> f64 {
        let a = params.mass / (2.0 * PI * params.hbar * time);
        match self {
            Convention::Verbatim => -2.0 * a * a,
            Convention::Magnitude => 2.0 * a * a,
            Convention::Contrast => 1.0,
        }
    }
}

/// `cos[2π(l−n)(ξ + c(Δφ − π)) + 2π²c(l−n)(l+n+1)]` scaled per `convention`.
pub fn interference_term(
    n: i64,
    l: i64,
    g: &InterferenceGeometry,
    xi: f64,
    convention: Convention,
) -> Result<f64> {
    g.validate()?;
    let c = g.coupling();
    let d = (l - n) as f64;
    let s = (l + n + 1) as f64;
    let dphi = g.phi2 - g.phi1;
    let arg = 2.0 * PI * d * (xi + c * (dphi - PI)) + 2.0 * PI * PI * c * d * s;
    Ok(convention.scale(g.time, &g.params) * arg.cos())
}

/// Adjacent-winding interference `I_{0,−1} = 2(m/2πiħT)² cos 2πξ`.
pub fn max_interference(
    xi: f64,
    time: f64,
    params: &PhysicalParams,
    convention: Convention,
) -> Result<f64> {
    params.validate()?;
    if !(time.is_finite() && time > 0.0) {
        return Err(invalid(
            "time",
            format!("must be finite and > 0, got {time}"),
        ));
    }
    if !xi.is_finite() {
        return Err(invalid("xi", "must be finite"));
    }
    Ok(convention.scale(time, params) * (2.0 * PI * xi).cos())
}
