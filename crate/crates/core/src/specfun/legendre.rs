use std::f64::consts::LN_2;

use num_complex::Complex64;

use super::gamma::{ln_gamma, ln_gamma_real};
use super::hypergeometric::hyp2f1_split;
use super::SeriesControls;
use crate::error::{invalid, Error, Result};

/// `P^{−μ}_{ν−1/2}(cosh τ)`, the solution regular at `τ = 0`.
///
/// Uses
/// `P^{−μ}_{ν−1/2}(cosh τ) = 2^{−2μ} (1−e^{−2τ})^μ e^{−(ν+1/2)τ}
///  ₂F₁(1/2+μ, 1/2+ν+μ; 1+2μ; 1−e^{−2τ}) / Γ(1+μ)`.
/// For purely imaginary `ν` (conical functions) the result is real; the
/// imaginary part is checked to be roundoff and then dropped.
pub fn legendre_p(mu: f64, nu: Complex64, tau: f64, ctl: &SeriesControls) -> Result<Complex64> {
    let value = legendre_unchecked(mu, nu, tau, ctl)?;
    if nu.re == 0.0 {
        return real_part_checked(value);
    }
    Ok(value)
}

fn legendre_unchecked(mu: f64, nu: Complex64, tau: f64, ctl: &SeriesControls) -> Result<Complex64> {
    check(mu, tau)?;
    let x = -(-2.0 * tau).exp_m1();
    let y = (-2.0 * tau).exp();
    let half = Complex64::new(0.5, 0.0);
    let f = hyp2f1_split(
        half + mu,
        half + nu + mu,
        Complex64::new(1.0 + 2.0 * mu, 0.0),
        x,
        y,
        ctl,
    )?;
    let ln_pre = -ln_gamma_real(1.0 + mu)?.0 - 2.0 * mu * LN_2 + mu * x.ln() - (nu + 0.5) * tau;
    Ok(ln_pre.exp() * f)
}

/// `|Im P| / |P|` of the complex evaluation of `P^{−μ}_{ik−1/2}(cosh τ)`,
/// which is real in exact arithmetic.
pub fn conical_reality_residual(mu: f64, k: f64, tau: f64, ctl: &SeriesControls) -> Result<f64> {
    let v = legendre_unchecked(mu, Complex64::new(0.0, k), tau, ctl)?;
    Ok(v.im.abs() / v.norm().max(f64::MIN_POSITIVE))
}

/// `P^{+μ}_{ν−1/2}(cosh τ)` from the same relation with `μ → −μ`.
/// Undefined where `Γ(1−μ)` has a pole (positive integer `μ`).
pub fn legendre_p_positive_order(
    mu: f64,
    nu: Complex64,
    tau: f64,
    ctl: &SeriesControls,
) -> Result<Complex64> {
    check(mu, tau)?;
    let x = -(-2.0 * tau).exp_m1();
    let y = (-2.0 * tau).exp();
    let half = Complex64::new(0.5, 0.0);
    let f = hyp2f1_split(
        half - mu,
        half + nu - mu,
        Complex64::new(1.0 - 2.0 * mu, 0.0),
        x,
        y,
        ctl,
    )?;
    let lg = ln_gamma(Complex64::new(1.0 - mu, 0.0))?;
    let ln_pre = -lg + 2.0 * mu * LN_2 - mu * x.ln() - (nu + 0.5) * tau;
    let value = ln_pre.exp() * f;
    if nu.re == 0.0 {
        return real_part_checked(value);
    }
    Ok(value)
}

/// Log-scaled conical function: `P^{−λ}_{ik−1/2}(cosh τ) = e^{ln_amp} · value`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicalParts {
    pub ln_amp: f64,
    pub value: f64,
}

impl ConicalParts {
    pub fn eval(&self) -> f64 {
        self.ln_amp.exp() * self.value
    }
}

/// Conical function split into a log amplitude and an `O(1)` factor, so
/// that products with `|Γ(1/2+ik+λ)|` stay finite for large `λ` or `k`.
pub fn conical_scaled(lam: f64, k: f64, tau: f64, ctl: &SeriesControls) -> Result<ConicalParts> {
    check(lam, tau)?;
    let x = -(-2.0 * tau).exp_m1();
    let y = (-2.0 * tau).exp();
    let a = Complex64::new(0.5 + lam, 0.0);
    let b = Complex64::new(0.5 + lam, k);
    let f = hyp2f1_split(a, b, Complex64::new(1.0 + 2.0 * lam, 0.0), x, y, ctl)?;
    let phase = Complex64::from_polar(1.0, -k * tau);
    let ln_amp = -ln_gamma_real(1.0 + lam)?.0 - 2.0 * lam * LN_2 + lam * x.ln() - 0.5 * tau;
    Ok(ConicalParts {
        ln_amp,
        value: (phase * f).re,
    })
}

fn check(mu: f64, tau: f64) -> Result<()> {
    if !(mu.is_finite() && mu >= 0.0) {
        return Err(invalid("mu", format!("must be finite and >= 0, got {mu}")));
    }
    if !(tau.is_finite() && tau > 0.0) {
        return Err(invalid("tau", format!("must be finite and > 0, got {tau}")));
    }
    Ok(())
}

fn real_part_checked(v: Complex64) -> Result<Complex64> {
    if v.im.abs() > 1e-8 * v.re.abs() + 1e-12 {
        return Err(Error::ConicalReality { re: v.re, im: v.im });
    }
    Ok(Complex64::new(v.re, 0.0))
}
