use num_complex::Complex64;

use crate::error::{Error, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_406;

// B_{2k} / (2k (2k-1)), k = 1..=10
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

const SHIFT_RADIUS: f64 = 15.0;

fn is_pole(re: f64, im: f64) -> bool {
    im == 0.0 && re <= 0.0 && re.fract() == 0.0
}

fn stirling(z: Complex64) -> Complex64 {
    let w = z.inv();
    let w2 = w * w;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = w;
    for c in STIRLING {
        series += p * c;
        p *= w2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + series
}

/// Principal branch of `ln Γ(z)`: the analytic continuation from the
/// positive real axis, with branch cut along the negative real axis.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "z",
            reason: "must be finite".into(),
        });
    }
    if is_pole(z.re, z.im) {
        return Err(Error::Pole {
            function: "ln_gamma",
            at: format!("{}", z.re),
        });
    }
    let mut shifted = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while shifted.re < 0.5 || shifted.norm_sqr() < SHIFT_RADIUS * SHIFT_RADIUS {
        shift += shifted.ln();
        shifted += 1.0;
    }
    Ok(stirling(shifted) - shift)
}

/// `ln|Γ(x)|` and the sign of `Γ(x)` for real `x`.
pub fn ln_gamma_real(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() {
        return Err(Error::InvalidParameter {
            name: "x",
            reason: "must be finite".into(),
        });
    }
    if is_pole(x, 0.0) {
        return Err(Error::Pole {
            function: "ln_gamma_real",
            at: format!("{x}"),
        });
    }
    let mut y = x;
    let mut shift = 0.0;
    let mut sign = 1.0;
    while y < SHIFT_RADIUS {
        shift += y.abs().ln();
        if y < 0.0 {
            sign = -sign;
        }
        y += 1.0;
    }
    let w = 1.0 / y;
    let w2 = w * w;
    let mut series = 0.0;
    let mut p = w;
    for c in STIRLING {
        series += c * p;
        p *= w2;
    }
    Ok(((y - 0.5) * y.ln() - y + HALF_LN_2PI + series - shift, sign))
}

/// `Γ(x)` for real `x`.
pub fn gamma_real(x: f64) -> Result<f64> {
    let (l, s) = ln_gamma_real(x)?;
    Ok(s * l.exp())
}
