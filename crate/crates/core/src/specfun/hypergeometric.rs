use num_complex::Complex64;

use super::gamma::ln_gamma;
use super::SeriesControls;
use crate::error::{invalid, Error, Result};

const NEAR_INTEGER: f64 = 1e-3;
const CANCELLATION: f64 = 1e4;
const DIRECT_LIMIT: f64 = 0.75;

fn non_positive_integer(z: Complex64) -> Option<u64> {
    (z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 && z.re > -1e15).then(|| (-z.re) as u64)
}

/// `ln(1/Γ(z))`, or `None` where `1/Γ` vanishes.
fn ln_rgamma(z: Complex64) -> Result<Option<Complex64>> {
    if non_positive_integer(z).is_some() {
        return Ok(None);
    }
    Ok(Some(-ln_gamma(z)?))
}

/// Gauss hypergeometric function `₂F₁(a, b; c; x)` for `0 ≤ x < 1`.
///
/// Direct series for `x ≤ 3/4`, the `x → 1 − x` connection formula above.
/// When `c − a − b` is within `1e-3` of an integer, or the two connection
/// terms cancel badly, the direct series is summed instead; if that is too
/// slow (`x` extremely close to 1) the connection formula is evaluated at
/// `a ± δ` and Richardson-extrapolated to `δ = 0`.
pub fn hyp2f1(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    x: f64,
    ctl: &SeriesControls,
) -> Result<Complex64> {
    hyp2f1_split(a, b, c, x, 1.0 - x, ctl)
}

/// As [`hyp2f1`], with `y = 1 − x` supplied to full relative precision.
pub(crate) fn hyp2f1_split(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    x: f64,
    y: f64,
    ctl: &SeriesControls,
) -> Result<Complex64> {
    for (name, z) in [("a", a), ("b", b), ("c", c)] {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(invalid(name, "must be finite"));
        }
    }
    if !(0.0..1.0).contains(&x) {
        return Err(invalid("x", format!("must lie in [0, 1), got {x}")));
    }
    if x == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let terminating = match (non_positive_integer(a), non_positive_integer(b)) {
        (Some(n), Some(m)) => Some(n.min(m)),
        (Some(n), None) | (None, Some(n)) => Some(n),
        _ => None,
    };
    if let Some(n) = terminating {
        if let Some(m) = non_positive_integer(c) {
            if m < n {
                return Err(Error::Pole {
                    function: "hyp2f1",
                    at: format!("c = {c} before termination at degree {n}"),
                });
            }
        }
        return Ok(polynomial(a, b, c, x, n));
    }
    if non_positive_integer(c).is_some() {
        return Err(Error::Pole {
            function: "hyp2f1",
            at: format!("c = {c}"),
        });
    }
    if x <= DIRECT_LIMIT {
        return direct(a, b, c, x, ctl);
    }
    let d = c - a - b;
    let near_integer = (d - d.re.round()).norm() < NEAR_INTEGER;
    if !near_integer {
        let (value, magnitude) = connection(a, b, c, y, ctl)?;
        if magnitude <= CANCELLATION * value.norm() {
            return Ok(value);
        }
        return Ok(direct_bounded(a, b, c, x, ctl)?.unwrap_or(value));
    }
    if let Some(v) = direct_bounded(a, b, c, x, ctl)? {
        return Ok(v);
    }
    // Richardson over a symmetric shift of a; the error is even in δ
    let shifted = |delta: f64| -> Result<Complex64> {
        let p = connection(a + delta, b, c, y, ctl)?.0;
        let m = connection(a - delta, b, c, y, ctl)?.0;
        Ok(0.5 * (p + m))
    };
    let coarse = shifted(2e-2)?;
    let fine = shifted(1e-2)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// `₂F₁(−n, b; c; x)` summed exactly as a polynomial.
pub fn hyp2f1_terminating(n: u32, b: Complex64, c: Complex64, x: f64) -> Result<Complex64> {
    let a = Complex64::new(-(n as f64), 0.0);
    if let Some(m) = non_positive_integer(c) {
        if m < n as u64 {
            return Err(Error::Pole {
                function: "hyp2f1_terminating",
                at: format!("c = {c}"),
            });
        }
    }
    Ok(polynomial(a, b, c, x, n as u64))
}

fn polynomial(a: Complex64, b: Complex64, c: Complex64, x: f64, n: u64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for j in 0..n {
        let jf = j as f64;
        term *= (a + jf) * (b + jf) / ((c + jf) * (jf + 1.0)) * x;
        sum += term;
    }
    sum
}

fn direct(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    x: f64,
    ctl: &SeriesControls,
) -> Result<Complex64> {
    series(a, b, c, x, ctl.stop(), ctl.max_terms).ok_or(Error::NonConvergence {
        what: "hyp2f1 series",
        terms: ctl.max_terms,
    })
}

/// Direct series with a term budget suited to a fallback path.
fn direct_bounded(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    x: f64,
    ctl: &SeriesControls,
) -> Result<Option<Complex64>> {
    let budget = ctl.max_terms.min(200_000);
    Ok(series(a, b, c, x, ctl.stop(), budget))
}

fn series(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    x: f64,
    tol: f64,
    max_terms: usize,
) -> Option<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut small = 0;
    for j in 0..max_terms {
        let jf = j as f64;
        let ratio = (a + jf) * (b + jf) / ((c + jf) * (jf + 1.0)) * x;
        term *= ratio;
        sum += term;
        if term.norm() <= tol * sum.norm() && ratio.norm() < 1.0 {
            small += 1;
            if small >= 2 {
                return Some(sum);
            }
        } else {
            small = 0;
        }
        if !(sum.re.is_finite() && sum.im.is_finite()) {
            return None;
        }
    }
    None
}

/// Connection-formula value and the magnitude of its larger term.
fn connection(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    y: f64,
    ctl: &SeriesControls,
) -> Result<(Complex64, f64)> {
    let d = c - a - b;
    let lc = ln_gamma(c)?;
    let mut value = Complex64::new(0.0, 0.0);
    let mut magnitude: f64 = 0.0;

    if let (Some(r1), Some(r2)) = (ln_rgamma(c - a)?, ln_rgamma(c - b)?) {
        let coef = (lc + ln_gamma(d)? + r1 + r2).exp();
        let t = coef * series_or_err(a, b, Complex64::new(1.0, 0.0) - d, y, ctl)?;
        magnitude = magnitude.max(t.norm());
        value += t;
    }
    if let (Some(r1), Some(r2)) = (ln_rgamma(a)?, ln_rgamma(b)?) {
        let coef = (lc + ln_gamma(-d)? + r1 + r2 + d * y.ln()).exp();
        let t = coef * series_or_err(c - a, c - b, d + 1.0, y, ctl)?;
        magnitude = magnitude.max(t.norm());
        value += t;
    }
    Ok((value, magnitude))
}

fn series_or_err(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    y: f64,
    ctl: &SeriesControls,
) -> Result<Complex64> {
    if let Some(n) = non_positive_integer(a).or(non_positive_integer(b)) {
        return Ok(polynomial(a, b, c, y, n));
    }
    direct(a, b, c, y, ctl)
}
