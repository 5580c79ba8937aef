//! Higgs oscillator `(m/2)ω²R² tanh²τ` and Kepler–Coulomb `−(α/R)(coth τ − 1)`
//! on the pseudosphere, with the flux shifting every channel to `L = |l − ξ|`.
//!
//! Higgs wave functions are normalized against `R² sinh τ dτ dφ`.
//! The bound radial factor is
//! `sinh^{L+1/2}τ cosh^{2n+1/2−ν}τ ₂F₁(−n, ν−n; 1+L; tanh²τ)`,
//! a polynomial in `tanh²τ`; the non-terminating variant with first
//! parameter `−L` is available as [`HiggsForm::LowerParameter`] but is not an
//! eigenfunction. A level is square integrable only for `ν − L − 1 − 2n > 0`.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::kernel::{
    partial_wave_kernel, KernelControls, KernelRequest, KernelValue, RadialKernel,
};
use crate::model::{PhysicalParams, PseudospherePoint};
use crate::par::try_map;
use crate::quad::integrate_breaks;
use crate::specfun::{hyp2f1_split, jacobi_poly, ln_gamma, ln_gamma_real, ln_sinh, SeriesControls};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HiggsParams {
    pub omega: f64,
    /// `ν = √((mωR²/ħ)² + 1/4)`.
    pub nu: f64,
}

impl HiggsParams {
    pub fn new(omega: f64, params: &PhysicalParams) -> Result<Self> {
        params.validate()?;
        if !(omega.is_finite() && omega > 0.0) {
            return Err(invalid(
                "omega",
                format!("must be finite and > 0, got {omega}"),
            ));
        }
        let w = reduced_omega(omega, params);
        Ok(Self {
            omega,
            nu: (w * w + 0.25).sqrt(),
        })
    }

    pub fn validate(&self, params: &PhysicalParams) -> Result<()> {
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(invalid(
                "omega",
                format!("must be finite and > 0, got {}", self.omega),
            ));
        }
        let w = reduced_omega(self.omega, params);
        if !(self.nu >= 0.5 && ((self.nu * self.nu - 0.25) - w * w).abs() <= 1e-12 * (w * w + 0.25))
        {
            return Err(invalid(
                "nu",
                "inconsistent with omega: ν² − 1/4 must equal (mωR²/ħ)²",
            ));
        }
        Ok(())
    }
}

fn reduced_omega(omega: f64, p: &PhysicalParams) -> f64 {
    p.mass * omega * p.curvature_radius.powi(2) / p.hbar
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoulombParams {
    pub alpha: f64,
    /// `a = ħ²/mα`.
    pub bohr_radius: f64,
}

impl CoulombParams {
    pub fn new(alpha: f64, params: &PhysicalParams) -> Result<Self> {
        params.validate()?;
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(invalid(
                "alpha",
                format!("must be finite and > 0, got {alpha}"),
            ));
        }
        Ok(Self {
            alpha,
            bohr_radius: params.hbar * params.hbar / (params.mass * alpha),
        })
    }
}

/// `ħ²/2mR²`.
fn unit(p: &PhysicalParams) -> f64 {
    p.hbar * p.hbar / (2.0 * p.mass * p.curvature_radius.powi(2))
}

fn channel(l: i64, xi: f64) -> Result<f64> {
    if !xi.is_finite() {
        return Err(invalid("xi", "must be finite"));
    }
    Ok((l as f64 - xi).abs())
}

/// `[x]` with the requirement `[x] ≥ 0`.
fn window(x: f64) -> Option<u32> {
    (x >= 0.0).then(|| x.floor() as u32)
}

/// Levels `n = 0..=[ν − L − 1]`,
/// `E_n = −(ħ²/2mR²)[(2n + L − ν + 1)² − 1/4] + (m/2)ω²R²`.
pub fn higgs_bound_spectrum(
    h: &HiggsParams,
    l: i64,
    xi: f64,
    params: &PhysicalParams,
) -> Result<Vec<f64>> {
    params.validate()?;
    h.validate(params)?;
    let lam = channel(l, xi)?;
    let Some(n_max) = window(h.nu - lam - 1.0) else {
        return Ok(Vec::new());
    };
    Ok((0..=n_max)
        .map(|n| higgs_level(h, lam, n, params))
        .collect())
}

fn higgs_level(h: &HiggsParams, lam: f64, n: u32, params: &PhysicalParams) -> f64 {
    let d = 2.0 * n as f64 + lam - h.nu + 1.0;
    -unit(params) * (d * d - 0.25) + higgs_offset(h, params)
}

/// `(m/2)ω²R²`.
fn higgs_offset(h: &HiggsParams, p: &PhysicalParams) -> f64 {
    0.5 * p.mass * (h.omega * p.curvature_radius).powi(2)
}

/// Continuum threshold `ħ²/8mR² + (m/2)ω²R²`.
pub fn higgs_threshold(h: &HiggsParams, params: &PhysicalParams) -> f64 {
    0.25 * unit(params) + higgs_offset(h, params)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HiggsForm {
    #[default]
    Terminating,
    /// `cosh^{n+1/2−ν}τ ₂F₁(−L, ν−n; 1+L; tanh²τ)` with `Γ(ν−L)` in the norm.
    LowerParameter,
}

fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a - LN_2 + (-2.0 * a).exp().ln_1p()
}

/// Radial factor `S_n(τ)`, without `(2π sinh τ)^{−1/2} e^{ilφ}`.
fn higgs_bound_radial(
    n: u32,
    lam: f64,
    h: &HiggsParams,
    tau: f64,
    params: &PhysicalParams,
    form: HiggsForm,
    ctl: &SeriesControls,
) -> Result<f64> {
    let nu = h.nu;
    let nf = n as f64;
    let kappa = nu - lam - 1.0 - 2.0 * nf;
    let r = params.curvature_radius;
    let (ls, lc) = (ln_sinh(tau), ln_cosh(tau));
    match form {
        HiggsForm::Terminating => {
            if kappa.is_nan() || kappa <= 0.0 {
                return Err(Error::InvalidQuantumNumber(format!(
                    "n = {n} is not normalizable: ν − L − 1 − 2n = {kappa}"
                )));
            }
            // ₂F₁(−n, ν−n; 1+L; x) = n! Γ(1+L)/Γ(1+L+n) P_n^{(L,κ)}(1 − 2x)
            let ln_n2 =
                (2.0 * kappa).ln() + ln_gamma_real(nf + lam + 1.0)?.0 + ln_gamma_real(nu - nf)?.0
                    - ln_gamma_real(kappa + 1.0 + nf)?.0
                    - ln_gamma_real(nf + 1.0)?.0;
            let ln_poly_norm = ln_gamma_real(nf + 1.0)?.0 - ln_gamma_real(lam + 1.0 + nf)?.0;
            let x = tau.tanh().powi(2);
            let ln_amp = 0.5 * ln_n2 + ln_poly_norm + (lam + 0.5) * ls + (2.0 * nf + 0.5 - nu) * lc;
            Ok(ln_amp.exp() * jacobi_poly(n, lam, kappa, 1.0 - 2.0 * x) / r)
        }
        HiggsForm::LowerParameter => {
            let g = |x: f64| ln_gamma_real(x).map(|v| v.0);
            let ln_n2 = (2.0 * kappa).abs().ln() + g(nf + lam + 1.0)? + g(nu - lam)?
                - g(nu - lam - nf)?
                - g(nf + 1.0)?;
            let y = (-2.0 * lc).exp();
            let f = hyp2f1_split(
                Complex64::new(-lam, 0.0),
                Complex64::new(nu - nf, 0.0),
                Complex64::new(1.0 + lam, 0.0),
                1.0 - y,
                y,
                ctl,
            )?;
            let ln_amp = 0.5 * ln_n2 - g(lam + 1.0)? + (lam + 0.5) * ls + (nf + 0.5 - nu) * lc;
            Ok(ln_amp.exp() * f.re / r)
        }
    }
}

/// `(2π sinh τ)^{−1/2} S_n(τ) e^{ilφ}`.
#[allow(clippy::too_many_arguments)]
pub fn higgs_bound_wavefunction(
    n: u32,
    l: i64,
    xi: f64,
    h: &HiggsParams,
    p: &PseudospherePoint,
    params: &PhysicalParams,
    form: HiggsForm,
    ctl: &SeriesControls,
) -> Result<Complex64> {
    params.validate()?;
    h.validate(params)?;
    let lam = channel(l, xi)?;
    match window(h.nu - lam - 1.0) {
        Some(n_max) if n <= n_max => {}
        _ => {
            return Err(Error::InvalidQuantumNumber(format!(
                "n = {n} outside the window [ν − |l−ξ| − 1] = {}",
                (h.nu - lam - 1.0).floor()
            )))
        }
    }
    let tau = p.tau();
    let s = higgs_bound_radial(n, lam, h, tau, params, form, ctl)?;
    let radial = s * (-0.5 * ((2.0 * PI).ln() + ln_sinh(tau))).exp();
    Ok(Complex64::from_polar(radial, l as f64 * p.phi()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HiggsScattering {
    pub value: Complex64,
    pub energy: f64,
}

/// `S_k` without `(2π sinh τ)^{−1/2} e^{ilφ}`.
fn higgs_continuum_radial(
    k: f64,
    lam: f64,
    h: &HiggsParams,
    tau: f64,
    r: f64,
    ctl: &SeriesControls,
) -> Result<Complex64> {
    let nu = h.nu;
    let a = Complex64::new(0.5 * (nu + lam + 1.0), -0.5 * k);
    let b = Complex64::new(0.5 * (lam - nu + 1.0), -0.5 * k);
    let c = Complex64::new(1.0 + lam, 0.0);
    let lc = ln_cosh(tau);
    let y = (-2.0 * lc).exp();
    let f = hyp2f1_split(a, b, c, 1.0 - y, y, ctl)?;
    let ln_tanh = ln_sinh(tau) - lc;
    let ln_pre = 0.5 * (k.ln() + ln_sinh(PI * k) - (2.0 * PI * PI).ln())
        - ln_gamma_real(lam + 1.0)?.0
        - r.ln();
    let ln_amp =
        ln_gamma(a)? + ln_gamma(b)? + ln_pre + (lam + 0.5) * ln_tanh + Complex64::new(0.0, k * lc);
    Ok(ln_amp.exp() * f)
}

/// Continuum state with `E = (ħ²/2mR²)(k² + 1/4) + (m/2)ω²R²`, `δ(k − k′)` normalized.
/// The first gamma factor is `Γ((ν + L + 1 − ik)/2)`.
pub fn higgs_scattering_state(
    k: f64,
    l: i64,
    xi: f64,
    h: &HiggsParams,
    p: &PseudospherePoint,
    params: &PhysicalParams,
    ctl: &SeriesControls,
) -> Result<HiggsScattering> {
    params.validate()?;
    h.validate(params)?;
    if !(k.is_finite() && k > 0.0) {
        return Err(invalid("k", format!("must be finite and > 0, got {k}")));
    }
    let lam = channel(l, xi)?;
    let tau = p.tau();
    let s = higgs_continuum_radial(k, lam, h, tau, params.curvature_radius, ctl)?;
    let radial = s * (-0.5 * ((2.0 * PI).ln() + ln_sinh(tau))).exp();
    Ok(HiggsScattering {
        value: radial * Complex64::from_polar(1.0, l as f64 * p.phi()),
        energy: unit(params) * (k * k + 0.25) + higgs_offset(h, params),
    })
}

/// `E_N = α/R − ħ²(Ñ² − 1/4)/2mR² − mα²/2ħ²Ñ²`, `Ñ = N + L + 1/2`, for
/// `N = 0..=[√(R/a) − L − 1/2]`.
pub fn coulomb_bound_spectrum(
    c: &CoulombParams,
    l: i64,
    xi: f64,
    params: &PhysicalParams,
) -> Result<Vec<f64>> {
    params.validate()?;
    if !(c.alpha.is_finite() && c.alpha > 0.0) {
        return Err(invalid(
            "alpha",
            format!("must be finite and > 0, got {}", c.alpha),
        ));
    }
    let lam = channel(l, xi)?;
    let r = params.curvature_radius;
    let Some(n_max) = window((r / c.bohr_radius).sqrt() - lam - 0.5) else {
        return Ok(Vec::new());
    };
    let (m, hbar) = (params.mass, params.hbar);
    Ok((0..=n_max)
        .map(|n| {
            let nt = n as f64 + lam + 0.5;
            c.alpha / r
                - hbar * hbar * (nt * nt - 0.25) / (2.0 * m * r * r)
                - m * c.alpha * c.alpha / (2.0 * hbar * hbar * nt * nt)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Problem {
    Free,
    Higgs(HiggsParams),
    /// Only the spectrum is known; the assembly reports `Unsupported`.
    Coulomb(CoulombParams),
}

/// Euclidean Higgs channel kernel in the `R² sinh τ dτ` measure:
/// normalizable bound states plus the continuum integral.
pub fn higgs_radial_kernel(
    lam: f64,
    tau1: f64,
    tau2: f64,
    beta: f64,
    h: &HiggsParams,
    params: &PhysicalParams,
    ctl: &KernelControls,
) -> Result<RadialKernel> {
    params.validate()?;
    h.validate(params)?;
    if !(beta.is_finite() && beta > 0.0) {
        return Err(invalid(
            "beta",
            format!("must be finite and > 0, got {beta}"),
        ));
    }
    for (name, t) in [("tau1", tau1), ("tau2", tau2)] {
        if !(t.is_finite() && t > 0.0) {
            return Err(invalid(name, format!("must be finite and > 0, got {t}")));
        }
    }
    if !(lam.is_finite() && lam >= 0.0) {
        return Err(invalid(
            "lambda",
            format!("must be finite and >= 0, got {lam}"),
        ));
    }
    let hbar = params.hbar;
    let r = params.curvature_radius;
    let measure = (-0.5 * (ln_sinh(tau1) + ln_sinh(tau2))).exp();

    let mut bound = 0.0;
    if let Some(n_max) = window(h.nu - lam - 1.0) {
        for n in 0..=n_max {
            if h.nu - lam - 1.0 - 2.0 * n as f64 <= 0.0 {
                break;
            }
            let e = higgs_level(h, lam, n, params);
            let s1 =
                higgs_bound_radial(n, lam, h, tau1, params, HiggsForm::Terminating, &ctl.series)?;
            let s2 =
                higgs_bound_radial(n, lam, h, tau2, params, HiggsForm::Terminating, &ctl.series)?;
            bound += (-beta * e / hbar).exp() * s1 * s2;
        }
    }

    let b = params.reduced_beta(beta);
    let shift = beta * higgs_offset(h, params) / hbar;
    let k_max = ctl.k_max.unwrap_or(40.0 / b.sqrt());
    let mut failure = None;
    let term = |k: f64| -> Result<f64> {
        let s1 = higgs_continuum_radial(k, lam, h, tau1, r, &ctl.series)?;
        let s2 = if tau1 == tau2 {
            s1
        } else {
            higgs_continuum_radial(k, lam, h, tau2, r, &ctl.series)?
        };
        Ok((-0.5 * b * (k * k + 0.25) - shift).exp() * (s1 * s2.conj()).re)
    };
    let integrand = |k: f64| {
        if k == 0.0 || failure.is_some() {
            return 0.0;
        }
        term(k).unwrap_or_else(|e| {
            failure = Some(e);
            0.0
        })
    };
    let s = b.sqrt();
    let mut pts: Vec<f64> = [0.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|x| x / s)
        .filter(|&x| x < k_max)
        .collect();
    pts.push(k_max);
    let est = integrate_breaks(integrand, &pts, &ctl.quad)?;
    if let Some(e) = failure {
        return Err(e);
    }
    // the Gaussian factor dominates beyond k_max; its first neglected slab bounds the rest
    let tail_bound = term(k_max)?.abs() * 2.0 / (b * k_max);
    let value = bound + est.value;
    if tail_bound > ctl.quad.abs_tol.max(ctl.quad.rel_tol * value.abs()) {
        return Err(Error::Truncation {
            what: "Higgs continuum k-integral",
            tail: tail_bound / value.abs(),
        });
    }
    Ok(RadialKernel {
        value: value * measure,
        abs_err: est.abs_err * measure,
        tail_bound: tail_bound * measure,
    })
}

/// `(1/2π) Σ_{|l| ≤ l_max} e^{ilΔφ} K_{|l−ξ|}` built from the spectrum of `problem`.
pub fn ab_partial_wave_assembly(problem: &Problem, req: &KernelRequest) -> Result<KernelValue> {
    let h = match problem {
        Problem::Free => return partial_wave_kernel(req),
        Problem::Coulomb(_) => {
            return Err(Error::Unsupported(
                "Coulomb kernels need wave functions, which are not available".into(),
            ))
        }
        Problem::Higgs(h) => *h,
    };
    req.validate()?;
    let lmax = req.l_max as i64;
    let mut lams: Vec<f64> = (-lmax..=lmax).map(|l| (l as f64 - req.xi).abs()).collect();
    lams.sort_by(f64::total_cmp);
    lams.dedup_by(|a, b| a.to_bits() == b.to_bits());
    let (t1, t2) = (req.p1.tau(), req.p2.tau());
    let ctl = req.controls;
    let values = try_map(ctl.exec, &lams, |&lam| {
        higgs_radial_kernel(lam, t1, t2, req.beta, &h, &req.params, &ctl)
    })?;
    let find = |lam: f64| {
        let i = lams.partition_point(|x| x.total_cmp(&lam).is_lt());
        values[i]
    };
    let dphi = req.delta_phi();
    let mut value = Complex64::new(0.0, 0.0);
    let (mut scale, mut abs_err, mut outer) = (0.0, 0.0, 0.0);
    for l in -lmax..=lmax {
        let g = find((l as f64 - req.xi).abs());
        value += Complex64::from_polar(g.value, l as f64 * dphi);
        scale += g.value.abs();
        abs_err += g.abs_err + g.tail_bound;
        if l.abs() > lmax - 3 {
            outer += g.value.abs();
        }
    }
    let truncation = if scale > 0.0 { outer / scale } else { 0.0 };
    if truncation > ctl.truncation_tol {
        return Err(Error::Truncation {
            what: "Higgs partial-wave sum",
            tail: truncation,
        });
    }
    let norm = 1.0 / (2.0 * PI);
    Ok(KernelValue {
        value: value * norm,
        abs_err: abs_err * norm,
        truncation,
        scale: scale * norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::euclidean_radial_kernel;
    use crate::quad::QuadControls;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn nat() -> PhysicalParams {
        PhysicalParams::default()
    }

    fn pt(tau: f64) -> PseudospherePoint {
        PseudospherePoint::new(tau, 0.0).unwrap()
    }

    #[test]
    fn higgs_spectrum_example() {
        let h = HiggsParams::new(3.0, &nat()).unwrap();
        assert_relative_eq!(h.nu, 9.25f64.sqrt(), max_relative = 1e-15);
        let e = higgs_bound_spectrum(&h, 0, 0.0, &nat()).unwrap();
        assert_eq!(e.len(), 3);
        // mpmath, 30 digits
        assert!((e[0] - 2.541_381_265_149_109_8).abs() < 1e-12);
        assert!(higgs_bound_spectrum(&h, 3, 0.0, &nat()).unwrap().is_empty());
        assert_eq!(
            higgs_bound_spectrum(&h, 0, 0.5, &nat()).unwrap(),
            higgs_bound_spectrum(&h, 1, 0.5, &nat()).unwrap()
        );
    }

    #[test]
    fn higgs_count_matches_enumeration() {
        for i in 0..20 {
            let nu = 0.5 + 0.37 * i as f64;
            let lam = 0.13 * i as f64;
            let w = (nu * nu - 0.25).sqrt();
            let Ok(h) = HiggsParams::new(w, &nat()) else {
                continue;
            };
            let e = higgs_bound_spectrum(&h, 0, -lam, &nat()).unwrap();
            let direct = (0..100).filter(|&n| n as f64 <= h.nu - lam - 1.0).count();
            assert_eq!(e.len(), direct, "nu={nu} lam={lam}");
            let thr = higgs_threshold(&h, &nat());
            assert!(e.iter().all(|&x| x < thr));
        }
    }

    #[test]
    fn higgs_dimensions() {
        let p = PhysicalParams::new(1.3, 0.7, 1.0, 2.0).unwrap();
        let h = HiggsParams::new(0.9, &p).unwrap();
        let w = reduced_omega(0.9, &p);
        let e = higgs_bound_spectrum(&h, 0, 0.0, &p).unwrap();
        let u = 1.3f64.powi(2) / (2.0 * 0.7 * 4.0);
        assert_relative_eq!(
            e[0],
            u * (-(1.0 - h.nu).powi(2) + 0.25 + w * w),
            max_relative = 1e-13
        );
        assert!(h.validate(&p).is_ok() && h.validate(&nat()).is_err());
    }

    #[test]
    fn higgs_scattering_energy() {
        let h = HiggsParams::new(3.0, &nat()).unwrap();
        let s = higgs_scattering_state(
            1.0,
            0,
            0.0,
            &h,
            &pt(1.0),
            &nat(),
            &SeriesControls::default(),
        )
        .unwrap();
        assert_relative_eq!(s.energy, 5.125, max_relative = 1e-15);
        let small = HiggsParams::new(1e-8, &nat()).unwrap();
        let s = higgs_scattering_state(
            1.0,
            0,
            0.0,
            &small,
            &pt(1.0),
            &nat(),
            &SeriesControls::default(),
        )
        .unwrap();
        assert_relative_eq!(s.energy, 0.625, max_relative = 1e-12);
        assert!(higgs_scattering_state(
            0.0,
            0,
            0.0,
            &h,
            &pt(1.0),
            &nat(),
            &SeriesControls::default()
        )
        .is_err());
    }

    #[test]
    fn higgs_continuum_reference() {
        // mpmath evaluation of the same closed form at τ = 1
        let h = HiggsParams::new(3.0, &nat()).unwrap();
        let ctl = SeriesControls::default();
        for (lam, e) in [
            (
                0.0,
                Complex64::new(0.303_482_849_652_609_2, 0.325_307_207_529_763_76),
            ),
            (
                0.5,
                Complex64::new(0.005_326_158_560_071_116, 0.000_245_252_135_927_989),
            ),
        ] {
            let s = higgs_continuum_radial(1.7, lam, &h, 1.0, 1.0, &ctl).unwrap();
            assert!((s - e).norm() < 1e-11 * e.norm(), "{lam}: {s} vs {e}");
        }
    }

    fn norm_quad() -> QuadControls {
        QuadControls {
            abs_tol: 1e-13,
            rel_tol: 1e-11,
            ..Default::default()
        }
    }

    #[test]
    fn higgs_bound_orthonormal() {
        let h = HiggsParams::new(3.0, &nat()).unwrap();
        let ctl = SeriesControls::default();
        let f = |n: u32, l: i64, xi: f64, t: f64| {
            let w = higgs_bound_wavefunction(
                n,
                l,
                xi,
                &h,
                &pt(t),
                &nat(),
                HiggsForm::Terminating,
                &ctl,
            )
            .unwrap();
            w.re
        };
        let pts = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 30.0];
        for (n, l, xi) in [(0, 0, 0.0), (0, 1, 0.3), (0, 0, 0.5)] {
            let v = integrate_breaks(
                |t| {
                    if t == 0.0 {
                        0.0
                    } else {
                        2.0 * PI * t.sinh() * f(n, l, xi, t).powi(2)
                    }
                },
                &pts,
                &norm_quad(),
            )
            .unwrap();
            assert!((v.value - 1.0).abs() < 1e-6, "({n},{l},{xi}) {}", v.value);
        }
        let o = integrate_breaks(
            |t| {
                if t == 0.0 {
                    0.0
                } else {
                    2.0 * PI * t.sinh() * f(0, 0, 0.0, t) * f(1, 0, 0.0, t)
                }
            },
            &pts,
            &norm_quad(),
        )
        .unwrap();
        assert!(o.value.abs() < 1e-6);
        assert!(f(0, 1, 0.0, 1e-8).abs() < 1e-6);
        // n = 1 sits at κ = ν − 3 > 0
        assert!(higgs_bound_wavefunction(
            2,
            0,
            0.0,
            &h,
            &pt(1.0),
            &nat(),
            HiggsForm::Terminating,
            &ctl
        )
        .is_err());
        assert!(higgs_bound_wavefunction(
            3,
            0,
            0.0,
            &h,
            &pt(1.0),
            &nat(),
            HiggsForm::Terminating,
            &ctl
        )
        .is_err());
    }

    #[test]
    fn higgs_norm_carries_curvature_radius() {
        let p = PhysicalParams::new(1.0, 1.0, 1.0, 2.0).unwrap();
        let h = HiggsParams::new(0.75, &p).unwrap();
        let ctl = SeriesControls::default();
        let pts = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 30.0];
        let v = integrate_breaks(
            |t| {
                if t == 0.0 {
                    return 0.0;
                }
                let w = higgs_bound_wavefunction(
                    0,
                    0,
                    0.0,
                    &h,
                    &pt(t),
                    &p,
                    HiggsForm::Terminating,
                    &ctl,
                )
                .unwrap();
                4.0 * 2.0 * PI * t.sinh() * w.norm_sqr()
            },
            &pts,
            &norm_quad(),
        )
        .unwrap();
        assert!((v.value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn lower_parameter_form_differs() {
        let h = HiggsParams::new(3.0, &nat()).unwrap();
        let ctl = SeriesControls::default();
        let a = higgs_bound_wavefunction(
            1,
            1,
            0.0,
            &h,
            &pt(0.8),
            &nat(),
            HiggsForm::Terminating,
            &ctl,
        );
        let b = higgs_bound_wavefunction(
            1,
            1,
            0.0,
            &h,
            &pt(0.8),
            &nat(),
            HiggsForm::LowerParameter,
            &ctl,
        )
        .unwrap();
        // the two agree only when n = L = 0
        assert!(a.is_err() || (a.unwrap() - b).norm() > 1e-3);
        let a = higgs_bound_wavefunction(
            0,
            0,
            0.0,
            &h,
            &pt(0.8),
            &nat(),
            HiggsForm::Terminating,
            &ctl,
        )
        .unwrap();
        let b = higgs_bound_wavefunction(
            0,
            0,
            0.0,
            &h,
            &pt(0.8),
            &nat(),
            HiggsForm::LowerParameter,
            &ctl,
        )
        .unwrap();
        assert!((a - b).norm() < 1e-12 * a.norm());
    }

    #[test]
    fn coulomb_examples() {
        let p = PhysicalParams::new(1.0, 1.0, 1.0, 100.0).unwrap();
        let c = CoulombParams::new(1.0, &p).unwrap();
        let e = coulomb_bound_spectrum(&c, 0, 0.0, &p).unwrap();
        assert_eq!(e.len(), 10);
        assert!((e[0] + 1.99).abs() < 1e-12);
        assert!(e.windows(2).all(|w| w[1] > w[0]));
        assert!(coulomb_bound_spectrum(&c, 10, 0.0, &p).unwrap().is_empty());
        let far = PhysicalParams::new(1.0, 1.0, 1.0, 1e6).unwrap();
        let e = coulomb_bound_spectrum(&c, 1, 0.0, &far).unwrap();
        assert_relative_eq!(e[0], -1.0 / (2.0 * 1.5f64.powi(2)), max_relative = 1e-4);
    }

    #[test]
    fn higgs_kernel_reduces_to_free() {
        // ν → 1/2 removes bound states and turns S_k into the conical state
        let ctl = KernelControls::default();
        let h = HiggsParams::new(1e-6, &nat()).unwrap();
        for (lam, t1, t2) in [(0.0, 1.0, 1.0), (0.7, 0.5, 1.5), (2.0, 1.0, 2.0)] {
            let a = higgs_radial_kernel(lam, t1, t2, 0.5, &h, &nat(), &ctl)
                .unwrap()
                .value;
            let b = euclidean_radial_kernel(lam, t1, t2, 0.5, &nat(), &ctl)
                .unwrap()
                .value;
            assert_relative_eq!(a, b, max_relative = 1e-7);
        }
    }

    #[test]
    fn higgs_ground_state_dominates() {
        let h = HiggsParams::new(3.0, &nat()).unwrap();
        let (p1, p2) = (
            PseudospherePoint::new(0.4, 0.0).unwrap(),
            PseudospherePoint::new(0.6, 1.0).unwrap(),
        );
        let mut req = KernelRequest::new(p1, p2, 20.0, 0.0).unwrap();
        req.l_max = 6;
        req.controls.truncation_tol = 1e-6;
        let k = ab_partial_wave_assembly(&Problem::Higgs(h), &req).unwrap();
        let e0 = higgs_bound_spectrum(&h, 0, 0.0, &nat()).unwrap()[0];
        let ctl = SeriesControls::default();
        let w = |t| {
            higgs_bound_wavefunction(0, 0, 0.0, &h, &pt(t), &nat(), HiggsForm::Terminating, &ctl)
                .unwrap()
                .re
        };
        let ground = (-20.0 * e0).exp() * w(0.4) * w(0.6);
        assert_relative_eq!(k.value.re, ground, max_relative = 1e-9);
        assert!(k.value.im.abs() < 1e-12 * ground);
    }

    #[test]
    fn assembly_delegates_and_reindexes() {
        let (p1, p2) = (
            PseudospherePoint::new(1.0, 0.0).unwrap(),
            PseudospherePoint::new(1.0, 0.7).unwrap(),
        );
        let mut req = KernelRequest::new(p1, p2, 0.5, 0.0).unwrap();
        req.l_max = 12;
        req.controls.truncation_tol = 1e-4;
        assert_eq!(
            ab_partial_wave_assembly(&Problem::Free, &req).unwrap(),
            partial_wave_kernel(&req).unwrap()
        );
        let c = CoulombParams::new(1.0, &nat()).unwrap();
        assert!(matches!(
            ab_partial_wave_assembly(&Problem::Coulomb(c), &req),
            Err(Error::Unsupported(_))
        ));

        let h = Problem::Higgs(HiggsParams::new(0.8, &nat()).unwrap());
        req.xi = 0.3;
        req.l_max = 14;
        let a = ab_partial_wave_assembly(&h, &req).unwrap().value;
        req.xi = 1.3;
        let b = ab_partial_wave_assembly(&h, &req).unwrap().value;
        let shifted = b * Complex64::from_polar(1.0, -0.7);
        assert!((shifted - a).norm() < 1e-6 * a.norm());
    }

    proptest! {
        #[test]
        fn spectra_covariant_under_flux_shift(l in -4i64..4, xi in -2.0f64..2.0, omega in 0.5f64..6.0) {
            let h = HiggsParams::new(omega, &nat()).unwrap();
            let a = higgs_bound_spectrum(&h, l, xi, &nat()).unwrap();
            let b = higgs_bound_spectrum(&h, l + 1, xi + 1.0, &nat()).unwrap();
            prop_assert_eq!(a.len(), b.len());
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
            }
            let p = PhysicalParams::new(1.0, 1.0, 1.0, 100.0).unwrap();
            let c = CoulombParams::new(1.0, &p).unwrap();
            let a = coulomb_bound_spectrum(&c, l, xi, &p).unwrap();
            let b = coulomb_bound_spectrum(&c, l + 1, xi + 1.0, &p).unwrap();
            prop_assert_eq!(a.len(), b.len());
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
            }
        }
    }
}
