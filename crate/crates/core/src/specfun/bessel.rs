use std::f64::consts::{LN_10, PI};

use num_complex::Complex64;

use super::gamma::ln_gamma_real;
use super::SeriesControls;
use crate::error::{invalid, Error, Result};

const SWITCH: f64 = 30.0;
// complex arguments switch earlier: the series cancels like e^{|Im z|}
const SWITCH_COMPLEX: f64 = 12.0;
const RESCALE: f64 = 1e250;

/// Modified Bessel function `I_ν(z)`.
///
/// Power series for real `z` up to 700 and for complex `|z| ≤ 12`; Hankel's
/// expansion (both exponentials kept) beyond. When that expansion cannot reach the requested
/// tolerance (`ν² ≳ |z|`) the series is used anyway, which loses accuracy
/// to cancellation for large `|Im z|`.
pub fn bessel_i(nu: f64, z: Complex64, ctl: &SeriesControls) -> Result<Complex64> {
    let s = bessel_i_scaled(nu, z, ctl)?;
    Ok(s * z.re.abs().exp())
}

/// `e^{−|Re z|} I_ν(z)`, finite for large real arguments.
pub fn bessel_i_scaled(nu: f64, z: Complex64, ctl: &SeriesControls) -> Result<Complex64> {
    if !(nu.is_finite() && nu >= 0.0) {
        return Err(invalid("nu", format!("must be finite and >= 0, got {nu}")));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(invalid("z", "must be finite"));
    }
    if z.norm() == 0.0 {
        return Ok(Complex64::new(if nu == 0.0 { 1.0 } else { 0.0 }, 0.0));
    }
    let real_positive = z.im == 0.0 && z.re > 0.0;
    let use_hankel = if real_positive {
        z.re > 700.0
    } else {
        z.norm() > SWITCH_COMPLEX.min(SWITCH)
    };
    if use_hankel {
        if let Some(v) = hankel(nu, z, ctl.stop()) {
            return Ok(v);
        }
    }
    series(nu, z, ctl)
}

fn series(nu: f64, z: Complex64, ctl: &SeriesControls) -> Result<Complex64> {
    let half = z * 0.5;
    let q = half * half;
    let mut log_scale = nu * half.ln() - ln_gamma_real(nu + 1.0)?.0 - z.re.abs();
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let tol = ctl.stop();
    for j in 1..=ctl.max_terms {
        let jf = j as f64;
        term *= q / (jf * (nu + jf));
        sum += term;
        if sum.norm() > RESCALE {
            sum /= RESCALE;
            term /= RESCALE;
            log_scale += RESCALE.log10() * LN_10;
        }
        if jf * jf > q.norm() && term.norm() <= tol * sum.norm() {
            return Ok(sum * log_scale.exp());
        }
    }
    Err(Error::NonConvergence {
        what: "bessel_i series",
        terms: ctl.max_terms,
    })
}

fn hankel(nu: f64, z: Complex64, tol: f64) -> Option<Complex64> {
    let mu = 4.0 * nu * nu;
    let w = z.inv();
    let mut a = 1.0;
    let mut p = Complex64::new(1.0, 0.0);
    let mut alt = Complex64::new(1.0, 0.0);
    let mut plain = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    let mut converged = false;
    for k in 1..60 {
        let kf = k as f64;
        a *= (mu - (2.0 * kf - 1.0).powi(2)) / (8.0 * kf);
        p *= w;
        let t = p * a;
        let size = t.norm();
        if size > last {
            break;
        }
        last = size;
        plain += t;
        alt += if k % 2 == 1 { -t } else { t };
        if size <= tol * alt.norm().min(plain.norm()) || a == 0.0 {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }
    let root = (2.0 * PI * z).sqrt();
    let shift = z.re.abs();
    let main = (z - shift).exp() / root * alt;
    if z.im == 0.0 && z.re > 0.0 {
        return Some(main);
    }
    let sign = if z.im >= 0.0 { 1.0 } else { -1.0 };
    let phase = Complex64::new(0.0, sign) * Complex64::from_polar(1.0, sign * PI * nu);
    let second = phase * (-z - shift).exp() / root * plain;
    Some(main + second)
}

/// The leading asymptotic form `√(1/2πz) exp(z − (λ² − 1/4)/2z)`.
pub fn bessel_i_asymptotic(lam: f64, z: Complex64) -> Complex64 {
    (2.0 * PI * z).inv().sqrt() * (z - (lam * lam - 0.25) / (2.0 * z)).exp()
}

/// `∫ dλ e^{iλΘ} I_λ(z) ≈ exp(z + 1/8z − zΘ²/2)`.
pub fn gaussian_lambda_integral(theta: f64, z: Complex64) -> Complex64 {
    (z + (8.0 * z).inv() - z * theta * theta / 2.0).exp()
}
