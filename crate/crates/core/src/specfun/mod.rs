//! Special functions: complex log-gamma, Gauss ₂F₁ on `[0, 1)`, Jacobi
//! polynomials, Legendre (conical) functions and modified Bessel `I`.

mod bessel;
mod gamma;
mod hypergeometric;
mod jacobi;
mod legendre;

pub use bessel::{bessel_i, bessel_i_asymptotic, bessel_i_scaled, gaussian_lambda_integral};
pub use gamma::{gamma_real, ln_gamma, ln_gamma_real};
pub(crate) use hypergeometric::hyp2f1_split;
pub use hypergeometric::{hyp2f1, hyp2f1_terminating};
pub use jacobi::jacobi_poly;
pub use legendre::{
    conical_reality_residual, conical_scaled, legendre_p, legendre_p_positive_order, ConicalParts,
};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControls {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesControls {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_terms: 1_000_000,
        }
    }
}

impl SeriesControls {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(invalid(
                "rel_tol",
                format!("must lie in (0, 1), got {rel_tol}"),
            ));
        }
        if max_terms == 0 {
            return Err(invalid("max_terms", "must be >= 1"));
        }
        Ok(Self { rel_tol, max_terms })
    }

    /// Series stop once terms drop below this fraction of the partial sum.
    pub(crate) fn stop(&self) -> f64 {
        (self.rel_tol * 1e-2).max(1e-17)
    }
}

pub(crate) fn ln_sinh(x: f64) -> f64 {
    // ln sinh x for x > 0 without overflow
    if x > 20.0 {
        x - std::f64::consts::LN_2 + (-(-2.0 * x).exp()).ln_1p()
    } else {
        x.sinh().ln()
    }
}
