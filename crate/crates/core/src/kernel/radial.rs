use std::f64::consts::PI;

use num_complex::Complex64;

use super::KernelControls;
use crate::error::{invalid, Error, Result};
use crate::model::PhysicalParams;
use crate::quad::integrate_breaks;
use crate::specfun::{conical_scaled, ln_gamma, ln_sinh, ConicalParts};

/// `ρ_λ(k) = (k sinh πk/π) |Γ(1/2 + ik + λ)|²`.
pub fn radial_spectral_weight(k: f64, lam: f64) -> Result<f64> {
    Ok(ln_weight(k, lam)?.exp())
}

fn ln_weight(k: f64, lam: f64) -> Result<f64> {
    if !(k.is_finite() && k > 0.0) {
        return Err(invalid("k", format!("must be finite and > 0, got {k}")));
    }
    if !(lam.is_finite() && lam >= 0.0) {
        return Err(invalid(
            "lambda",
            format!("must be finite and >= 0, got {lam}"),
        ));
    }
    Ok(k.ln() + ln_sinh(PI * k) - PI.ln() + 2.0 * ln_gamma(Complex64::new(0.5 + lam, k))?.re)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialKernel {
    pub value: f64,
    pub abs_err: f64,
    /// Bound on the neglected `k > k_max` part.
    pub tail_bound: f64,
}

/// `G_λ(τ₂, τ₁; β) = (1/R²) ∫₀^∞ dk e^{−β'(k²+1/4)/2} ρ_λ(k) P^{−λ}_{ik−1/2}(cosh τ₂) P^{−λ}_{ik−1/2}(cosh τ₁)`.
pub fn euclidean_radial_kernel(
    lam: f64,
    tau1: f64,
    tau2: f64,
    beta: f64,
    params: &PhysicalParams,
    ctl: &KernelControls,
) -> Result<RadialKernel> {
    params.validate()?;
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
    let b = params.reduced_beta(beta);
    let k_max = ctl.k_max.unwrap_or(40.0 / b.sqrt());
    let r2 = params.curvature_radius.powi(2);
    let k = reduced_kernel(lam, tau1, tau2, b, k_max, ctl)?;
    Ok(RadialKernel {
        value: k.value / r2,
        abs_err: k.abs_err / r2,
        tail_bound: k.tail_bound / r2,
    })
}

/// The kernel at `R = 1` for reduced time `b`.
pub(crate) fn reduced_kernel(
    lam: f64,
    tau1: f64,
    tau2: f64,
    b: f64,
    k_max: f64,
    ctl: &KernelControls,
) -> Result<RadialKernel> {
    let same = tau1 == tau2;
    let mut failure = None;
    let ln_term = |k: f64, p1: &ConicalParts, p2: &ConicalParts| -> Result<f64> {
        // grouped so that swapping τ₁ and τ₂ gives identical bits
        Ok(ln_weight(k, lam)? + (p1.ln_amp + p2.ln_amp) - 0.5 * b * (k * k + 0.25))
    };
    let integrand = |k: f64| -> f64 {
        if k == 0.0 || failure.is_some() {
            return 0.0;
        }
        let eval = || -> Result<f64> {
            let p1 = conical_scaled(lam, k, tau1, &ctl.series)?;
            let p2 = if same {
                p1
            } else {
                conical_scaled(lam, k, tau2, &ctl.series)?
            };
            Ok(ln_term(k, &p1, &p2)?.exp() * (p1.value * p2.value))
        };
        match eval() {
            Ok(v) => v,
            Err(e) => {
                failure = Some(e);
                0.0
            }
        }
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

    // |P^{−λ}_{ik−1/2}| ≤ P^{−λ}_{−1/2} and, once k² ≥ 4(2λ+1)/b, the integrand
    // decays at least like exp(−b k_max (k − k_max)/2).
    let tail_bound = if k_max * k_max >= 4.0 * (2.0 * lam + 1.0) / b {
        let e1 = conical_scaled(lam, 0.0, tau1, &ctl.series)?;
        let e2 = conical_scaled(lam, 0.0, tau2, &ctl.series)?;
        let env = ln_term(k_max, &e1, &e2)?.exp() * (e1.value * e2.value).abs();
        2.0 * env / (b * k_max)
    } else {
        f64::INFINITY
    };
    if tail_bound > ctl.quad.abs_tol.max(ctl.quad.rel_tol * est.value.abs()) {
        return Err(Error::Truncation {
            what: "radial kernel k-integral",
            tail: tail_bound / est.value.abs(),
        });
    }
    Ok(RadialKernel {
        value: est.value,
        abs_err: est.abs_err,
        tail_bound,
    })
}
