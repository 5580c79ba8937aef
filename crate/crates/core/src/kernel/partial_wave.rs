use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;

use super::radial::reduced_kernel;
use super::{KernelRequest, KernelValue, RadialKernel};
use crate::error::{Error, Result};
use crate::par::try_map;

/// Radial kernels for every channel `|l − ξ|`, `|l| ≤ l_max`, keyed by `l`.
pub(crate) fn channel_kernels(req: &KernelRequest) -> Result<Vec<(i64, RadialKernel)>> {
    req.validate()?;
    let lmax = req.l_max as i64;
    let ls: Vec<i64> = (-lmax..=lmax).collect();
    // ξ = 0 or 1/2 makes channels coincide
    let mut unique = BTreeMap::new();
    for &l in &ls {
        let lam = (l as f64 - req.xi).abs();
        unique.entry(lam.to_bits()).or_insert(lam);
    }
    let lams: Vec<f64> = unique.values().copied().collect();
    let b = req.params.reduced_beta(req.beta);
    let k_max = req.controls.k_max.unwrap_or(40.0 / b.sqrt());
    let (t1, t2) = (req.p1.tau(), req.p2.tau());
    let ctl = req.controls;
    let values = try_map(ctl.exec, &lams, |&lam| {
        reduced_kernel(lam, t1, t2, b, k_max, &ctl)
    })?;
    let table: BTreeMap<u64, RadialKernel> = lams.iter().map(|l| l.to_bits()).zip(values).collect();
    Ok(ls
        .into_iter()
        .map(|l| (l, table[&(l as f64 - req.xi).abs().to_bits()]))
        .collect())
}

/// `(1/2π) Σ_{|l| ≤ l_max} e^{ilΔφ} G_{|l−ξ|}(τ₂, τ₁; β)`.
///
/// The truncation estimate is the share of the three outermost `|l|`
/// shells in the total `Σ G`.
pub fn partial_wave_kernel(req: &KernelRequest) -> Result<KernelValue> {
    let channels = channel_kernels(req)?;
    let dphi = req.delta_phi();
    let r2 = req.params.curvature_radius.powi(2);
    let mut value = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    let mut abs_err = 0.0;
    let mut outer = 0.0;
    let lmax = req.l_max as i64;
    for (l, g) in &channels {
        value += Complex64::from_polar(g.value, *l as f64 * dphi);
        scale += g.value.abs();
        abs_err += g.abs_err + g.tail_bound;
        if l.abs() > lmax - 3 {
            outer += g.value.abs();
        }
    }
    let norm = 1.0 / (TAU * r2);
    let truncation = if scale > 0.0 { outer / scale } else { 0.0 };
    if truncation > req.controls.truncation_tol {
        return Err(Error::Truncation {
            what: "partial-wave sum",
            tail: truncation,
        });
    }
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
    use crate::model::PseudospherePoint;
    use crate::par::Execution;
    use std::f64::consts::PI;

    fn req(phi2: f64, xi: f64) -> KernelRequest {
        let p1 = PseudospherePoint::new(1.0, 0.0).unwrap();
        let p2 = PseudospherePoint::new(1.0, phi2).unwrap();
        let mut r = KernelRequest::new(p1, p2, 0.5, xi).unwrap();
        r.l_max = 12;
        r.controls.truncation_tol = 1e-4;
        r
    }

    #[test]
    fn real_at_zero_flux() {
        let k = partial_wave_kernel(&req(0.0, 0.0)).unwrap();
        assert!(k.value.im.abs() <= 1e-15 * k.value.re);
        let k = partial_wave_kernel(&req(0.9, 0.0)).unwrap();
        assert!(k.value.im.abs() <= 1e-14 * k.value.norm());
    }

    #[test]
    fn reflection_conjugation() {
        let dphi: f64 = 0.7;
        let wide = |phi2: f64| {
            let mut r = req(phi2, 0.5);
            r.l_max = 30;
            r
        };
        let a = partial_wave_kernel(&wide(dphi)).unwrap().value;
        let b = partial_wave_kernel(&wide(-dphi)).unwrap().value;
        assert!((b - a.conj()).norm() <= 1e-14 * a.norm());
        // l → 1 − l at ξ = 1/2
        assert!((b - a * Complex64::from_polar(1.0, -dphi)).norm() <= 1e-12 * a.norm());
        let c = partial_wave_kernel(&req(dphi, -0.3)).unwrap().value;
        let d = partial_wave_kernel(&req(-dphi, 0.3)).unwrap().value;
        assert!((c - d).norm() <= 1e-14 * c.norm());
    }

    #[test]
    fn flux_periodicity() {
        let dphi: f64 = 0.7;
        let mut r0 = req(dphi, 0.3);
        r0.l_max = 14;
        let mut r1 = r0;
        r1.xi = 1.3;
        let a = partial_wave_kernel(&r0).unwrap().value;
        let b = partial_wave_kernel(&r1).unwrap().value;
        assert!((a.norm() - b.norm()).abs() <= 1e-6 * a.norm());
        let shifted = b * Complex64::from_polar(1.0, -dphi);
        assert!((shifted - a).norm() <= 1e-6 * a.norm());
    }

    #[test]
    fn sequential_matches_parallel() {
        let mut r = req(PI, 0.3);
        r.controls.exec = Execution::Sequential;
        let a = partial_wave_kernel(&r).unwrap();
        r.controls.exec = Execution::Parallel;
        let b = partial_wave_kernel(&r).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn truncation_reported() {
        let mut r = req(0.0, 0.0);
        r.l_max = 2;
        r.controls.truncation_tol = 1e-8;
        assert!(matches!(
            partial_wave_kernel(&r),
            Err(Error::Truncation { .. })
        ));
    }
}
