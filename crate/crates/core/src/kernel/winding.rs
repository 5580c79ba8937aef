use std::f64::consts::TAU;

use num_complex::Complex64;

use super::partial_wave::partial_wave_kernel;
use super::radial::reduced_kernel;
use super::{KernelControls, KernelRequest, KernelValue};
use crate::error::{invalid, Error, Result};
use crate::model::PhysicalParams;
use crate::par::try_map;
use crate::quad::gauss_legendre;

const PANEL: f64 = 0.5;
const NODES: usize = 24;
const CUTOFF: f64 = 1e-12;
const MAX_PANELS: usize = 400;
const BATCH: usize = 4;
/// Windings summed explicitly in the asymptotic tail.
const TAIL_WINDINGS: i64 = 1_000_000;

/// `G_λ(τ₂, τ₁; β)` tabulated on Gauss–Legendre panels in `λ`.
///
/// Independent of `ξ` and `Δφ`, so one table serves every winding and flux.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaTable {
    lambdas: Vec<f64>,
    weights: Vec<f64>,
    values: Vec<f64>,
    g0: f64,
    d1: f64,
    d3: f64,
    r2: f64,
}

impl LambdaTable {
    /// Adds panels of width 1/2 until `G_λ` drops below `1e-12 · G_0` on a whole panel.
    pub fn build(
        tau1: f64,
        tau2: f64,
        beta: f64,
        params: &PhysicalParams,
        ctl: &KernelControls,
    ) -> Result<Self> {
        params.validate()?;
        if !(beta.is_finite() && beta > 0.0) {
            return Err(invalid(
                "beta",
                format!("must be finite and > 0, got {beta}"),
            ));
        }
        let b = params.reduced_beta(beta);
        let k_max = ctl.k_max.unwrap_or(40.0 / b.sqrt());
        let (x, w) = gauss_legendre(NODES);
        let g0 = reduced_kernel(0.0, tau1, tau2, b, k_max, ctl)?.value;
        let mut lambdas = Vec::new();
        let mut weights = Vec::new();
        let mut values = Vec::new();
        let mut panels = 0;
        'outer: while panels < MAX_PANELS {
            let nodes: Vec<f64> = (panels..panels + BATCH)
                .flat_map(|p| {
                    x.iter()
                        .map(move |xi| PANEL * (p as f64 + 0.5 * (xi + 1.0)))
                })
                .collect();
            let g = try_map(ctl.exec, &nodes, |&lam| {
                reduced_kernel(lam, tau1, tau2, b, k_max, ctl).map(|r| r.value)
            })?;
            for (chunk, lam) in g.chunks(NODES).zip(nodes.chunks(NODES)) {
                lambdas.extend_from_slice(lam);
                weights.extend(w.iter().map(|wi| 0.5 * PANEL * wi));
                values.extend_from_slice(chunk);
                panels += 1;
                if chunk.iter().all(|v| v.abs() < CUTOFF * g0.abs()) {
                    break 'outer;
                }
            }
        }
        if panels >= MAX_PANELS {
            return Err(Error::Truncation {
                what: "winding λ-integral",
                tail: values[values.len() - 1] / g0,
            });
        }
        let (d1, d3) = edge_derivatives(&x, &w, &values[..NODES]);
        Ok(Self {
            lambdas,
            weights,
            values,
            g0,
            d1,
            d3,
            r2: params.curvature_radius.powi(2),
        })
    }

    pub fn lambda_max(&self) -> f64 {
        PANEL * (self.lambdas.len() / NODES) as f64
    }

    /// `G_0` at `R = 1`.
    pub fn g0(&self) -> f64 {
        self.g0
    }

    /// `∂_λ G` and `∂³_λ G` at `λ = 0`, at `R = 1`.
    pub fn edge_derivatives(&self) -> (f64, f64) {
        (self.d1, self.d3)
    }

    /// `2 ∫₀^∞ cos(λΘ) G_λ dλ` at `R = 1`.
    pub fn cosine_transform(&self, theta: f64) -> f64 {
        let mut s = 0.0;
        for ((l, w), g) in self.lambdas.iter().zip(&self.weights).zip(&self.values) {
            s += w * (l * theta).cos() * g;
        }
        2.0 * s
    }

    /// `K_n = e^{iξΘ_n} (1/2π) ∫ dλ e^{iλΘ_n} G_{|λ|}` with `Θ_n = Δφ + 2πn`.
    ///
    /// The panels resolve the cosine up to `|Θ| ≈ 60`; use
    /// [`winding_asymptotic`](Self::winding_asymptotic) beyond.
    pub fn winding(&self, n: i64, xi: f64, delta_phi: f64) -> Complex64 {
        let theta = delta_phi + TAU * n as f64;
        Complex64::from_polar(self.cosine_transform(theta) / (TAU * self.r2), xi * theta)
    }

    /// Leading terms `(e^{iξΘ}/2π)(−2G′(0)/Θ² + 2G‴(0)/Θ⁴)` for large `|Θ|`.
    pub fn winding_asymptotic(&self, n: i64, xi: f64, delta_phi: f64) -> Complex64 {
        let theta = delta_phi + TAU * n as f64;
        let t2 = theta * theta;
        let v = -2.0 * self.d1 / t2 + 2.0 * self.d3 / (t2 * t2);
        Complex64::from_polar(v / (TAU * self.r2), xi * theta)
    }

    /// Explicit windings `|n| ≤ n_max` plus the asymptotic remainder.
    pub fn sum(&self, n_max: u32, xi: f64, delta_phi: f64) -> WindingSum {
        let n_max = n_max as i64;
        let terms: Vec<(i64, Complex64)> = (-n_max..=n_max)
            .map(|n| (n, self.winding(n, xi, delta_phi)))
            .collect();
        let bare = terms.iter().map(|t| t.1).sum();
        let mut tail = Complex64::new(0.0, 0.0);
        // smallest terms first
        for m in (n_max + 1..=TAIL_WINDINGS).rev() {
            tail += self.winding_asymptotic(m, xi, delta_phi)
                + self.winding_asymptotic(-m, xi, delta_phi);
        }
        WindingSum {
            terms,
            bare,
            tail,
            corrected: bare + tail,
        }
    }
}

/// First and third derivative at the left edge from the Legendre expansion
/// of the first panel.
fn edge_derivatives(x: &[f64], w: &[f64], g: &[f64]) -> (f64, f64) {
    let n = x.len();
    let mut coef = vec![0.0; n];
    for (i, (&xi, &wi)) in x.iter().zip(w).enumerate() {
        let (mut p0, mut p1) = (1.0, xi);
        for (j, c) in coef.iter_mut().enumerate() {
            let pj = if j == 0 { p0 } else { p1 };
            *c += (2.0 * j as f64 + 1.0) / 2.0 * wi * g[i] * pj;
            if j >= 1 {
                let jf = j as f64;
                let next = ((2.0 * jf + 1.0) * xi * p1 - jf * p0) / (jf + 1.0);
                p0 = p1;
                p1 = next;
            }
        }
    }
    // P_j^{(m)}(−1) = (−1)^{j+m} (j+m)! / (2^m m! (j−m)!)
    let deriv = |m: usize| -> f64 {
        let mut s = 0.0;
        for (j, c) in coef.iter().enumerate().skip(m) {
            let mut ratio = 1.0;
            for q in (j - m + 1)..=(j + m) {
                ratio *= q as f64;
            }
            let fact_m: f64 = (1..=m).map(|q| q as f64).product();
            let sign = if (j + m).is_multiple_of(2) { 1.0 } else { -1.0 };
            s += c * sign * ratio / (2f64.powi(m as i32) * fact_m);
        }
        s * (2.0 / PANEL).powi(m as i32)
    };
    (deriv(1), deriv(3))
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindingSum {
    pub terms: Vec<(i64, Complex64)>,
    /// `Σ_{|n| ≤ n_max} K_n`.
    pub bare: Complex64,
    /// Asymptotic estimate of `Σ_{|n| > n_max} K_n`.
    pub tail: Complex64,
    pub corrected: Complex64,
}

fn table_for(req: &KernelRequest) -> Result<LambdaTable> {
    req.validate()?;
    LambdaTable::build(
        req.p1.tau(),
        req.p2.tau(),
        req.beta,
        &req.params,
        &req.controls,
    )
}

pub fn winding_kernel(n: i64, req: &KernelRequest) -> Result<Complex64> {
    Ok(table_for(req)?.winding(n, req.xi, req.delta_phi()))
}

pub fn winding_kernel_sum(req: &KernelRequest) -> Result<WindingSum> {
    Ok(table_for(req)?.sum(req.n_max, req.xi, req.delta_phi()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Duality {
    pub partial_wave: KernelValue,
    pub winding: WindingSum,
    /// `|Σ_n − Σ_l| / max(|Σ_l|, 1e-3 · S)` for the bare winding sum.
    pub residual_bare: f64,
    pub residual_corrected: f64,
}

/// Both representations of the same request, using `table` when given.
pub fn poisson_duality(req: &KernelRequest, table: Option<&LambdaTable>) -> Result<Duality> {
    let owned;
    let table = match table {
        Some(t) => t,
        None => {
            owned = table_for(req)?;
            &owned
        }
    };
    let pw = partial_wave_kernel(req)?;
    let w = table.sum(req.n_max, req.xi, req.delta_phi());
    // near-zero kernels (Δφ = π, ξ = 1/2) are measured against the term scale
    let denom = pw.value.norm().max(1e-3 * pw.scale);
    Ok(Duality {
        residual_bare: (w.bare - pw.value).norm() / denom,
        residual_corrected: (w.corrected - pw.value).norm() / denom,
        partial_wave: pw,
        winding: w,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PseudospherePoint;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn table(beta: f64) -> LambdaTable {
        LambdaTable::build(
            1.0,
            1.0,
            beta,
            &PhysicalParams::default(),
            &KernelControls::default(),
        )
        .unwrap()
    }

    #[test]
    fn edge_derivatives_of_polynomial_and_exponential() {
        let (x, w) = gauss_legendre(NODES);
        let g: Vec<f64> = x
            .iter()
            .map(|xi| {
                let l = PANEL * 0.5 * (xi + 1.0);
                l.powi(3) - 2.0 * l + 1.0
            })
            .collect();
        let (d1, d3) = edge_derivatives(&x, &w, &g);
        assert_relative_eq!(d1, -2.0, max_relative = 1e-10);
        assert_relative_eq!(d3, 6.0, max_relative = 1e-6);
        let g: Vec<f64> = x
            .iter()
            .map(|xi| (-1.3 * PANEL * 0.5 * (xi + 1.0)).exp())
            .collect();
        let (d1, d3) = edge_derivatives(&x, &w, &g);
        assert_relative_eq!(d1, -1.3, max_relative = 1e-10);
        assert_relative_eq!(d3, -1.3f64.powi(3), max_relative = 1e-6);
    }

    #[test]
    fn zero_winding_positive_at_zero_flux() {
        let t = table(0.5);
        let k = t.winding(0, 0.0, 0.0);
        assert!(k.re > 0.0 && k.im == 0.0);
        assert!(t.lambda_max() > 2.0);
    }

    #[test]
    fn winding_magnitudes_decrease() {
        let t = table(0.5);
        for dphi in [0.0, 0.7, 2.0, PI] {
            for sign in [1i64, -1] {
                // Δφ = π puts n = 0 and n = −1 at equal |Θ|
                let mut last = f64::INFINITY;
                for n in 0..6i64 {
                    let a = t.winding(sign * n, 0.3, dphi).norm();
                    assert!(a <= last * (1.0 + 1e-12), "Δφ={dphi} n={}", sign * n);
                    last = a;
                }
            }
        }
    }

    #[test]
    fn asymptotic_tail_matches_far_windings() {
        let t = table(0.5);
        for n in [6i64, 8] {
            let exact = t.winding(n, 0.3, 0.7);
            let approx = t.winding_asymptotic(n, 0.3, 0.7);
            assert!(
                (exact - approx).norm() < 1e-3 * approx.norm(),
                "n={n}: {exact} vs {approx}"
            );
        }
    }

    #[test]
    fn duality_with_tail() {
        let p1 = PseudospherePoint::new(1.0, 0.0).unwrap();
        let p2 = PseudospherePoint::new(1.0, 0.7).unwrap();
        let req = KernelRequest::new(p1, p2, 0.5, 0.3).unwrap();
        let d = poisson_duality(&req, Some(&table(0.5))).unwrap();
        assert!(d.residual_corrected < 1e-4, "{d:?}");
        assert!(d.residual_corrected < d.residual_bare);
    }
}
