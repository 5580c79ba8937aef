//! Finite-volume oracle for the radial channel kernels.
//!
//! With `f = sinh^λτ g` the channel operator
//! `½[−(1/sinh τ)(sinh τ f′)′ + λ² f/sinh²τ]` (in units of `ħ²/mR²`) becomes
//! `½[−(1/w)(w g′)′ − λ(λ+1) g]` with weight `w = sinh^{2λ+1}τ`, and the
//! regular solution `g` is smooth and even at the origin. The `g` operator is
//! discretized on cells of equal width between `tau_min` and `tau_max`; the
//! inner face carries no flux and the outer face is Dirichlet. Kernels of
//! `exp(−βH/ħ)` follow from the eigendecomposition and are interpolated to
//! off-node endpoints with cubic Lagrange stencils on `g`.

mod eigen;

pub use eigen::tridiagonal_eigen;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::model::{PhysicalParams, PseudospherePoint};
use crate::par::{try_map, Execution};
use crate::quad::gauss_legendre;
use crate::specfun::ln_sinh;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    pub tau_min: f64,
    pub tau_max: f64,
    /// Cell faces; the grid has `points − 1` cells.
    pub points: usize,
}

impl Default for RadialGrid {
    fn default() -> Self {
        Self {
            tau_min: 1e-3,
            tau_max: 12.0,
            points: 2000,
        }
    }
}

impl RadialGrid {
    pub fn new(tau_min: f64, tau_max: f64, points: usize) -> Result<Self> {
        let g = Self {
            tau_min,
            tau_max,
            points,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau_min.is_finite() && self.tau_min > 0.0) {
            return Err(invalid(
                "tau_min",
                format!("must be finite and > 0, got {}", self.tau_min),
            ));
        }
        if !(self.tau_max.is_finite() && self.tau_max > self.tau_min) {
            return Err(invalid(
                "tau_max",
                format!("must exceed tau_min, got {}", self.tau_max),
            ));
        }
        if self.points < 100 {
            return Err(invalid(
                "points",
                format!("must be >= 100, got {}", self.points),
            ));
        }
        Ok(())
    }

    pub fn cells(&self) -> usize {
        self.points - 1
    }

    pub fn step(&self) -> f64 {
        (self.tau_max - self.tau_min) / self.cells() as f64
    }

    pub fn face(&self, i: usize) -> f64 {
        self.tau_min + i as f64 * self.step()
    }

    pub fn node(&self, i: usize) -> f64 {
        self.tau_min + (i as f64 + 0.5) * self.step()
    }

    fn refined(&self, factor: usize) -> Self {
        Self {
            points: self.points * factor,
            ..*self
        }
    }
}

/// Symmetric tridiagonal form of a channel operator, in units of `ħ²/mR²`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialOperator {
    pub lam: f64,
    pub grid: RadialGrid,
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
    /// `ln ∫ sinh^{2λ+1}τ dτ` over each cell.
    pub ln_masses: Vec<f64>,
    /// `ħ²/mR²`.
    pub energy_scale: f64,
}

pub fn build_radial_operator(
    lam: f64,
    grid: &RadialGrid,
    params: &PhysicalParams,
) -> Result<RadialOperator> {
    grid.validate()?;
    params.validate()?;
    if !(lam.is_finite() && lam >= 0.0) {
        return Err(invalid(
            "lambda",
            format!("must be finite and >= 0, got {lam}"),
        ));
    }
    let m = grid.cells();
    let h = grid.step();
    let power = 2.0 * lam + 1.0;
    // everything in logs: the weight sinh^{2λ+1} spans more than the f64 range
    // for large λ, while each matrix entry is a ratio of neighbouring cells
    let ln_weight = |t: f64| power * ln_sinh(t);
    let ln_flux: Vec<f64> = (0..=m)
        .map(|i| match i {
            0 => f64::NEG_INFINITY,
            // Dirichlet at half a cell beyond the last node
            _ if i == m => ln_weight(grid.face(i)) - h.ln() + 2f64.ln(),
            _ => ln_weight(grid.face(i)) - h.ln(),
        })
        .collect();
    let (x, w) = gauss_legendre(4);
    let ln_masses: Vec<f64> = (0..m)
        .map(|i| {
            let c = grid.node(i);
            let terms: Vec<f64> = x
                .iter()
                .zip(&w)
                .map(|(xj, wj)| (0.5 * h * wj).ln() + ln_weight(c + 0.5 * h * xj))
                .collect();
            let top = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln()
        })
        .collect();
    let shift = 0.5 * lam * (lam + 1.0);
    let diag: Vec<f64> = (0..m)
        .map(|i| {
            0.5 * ((ln_flux[i] - ln_masses[i]).exp() + (ln_flux[i + 1] - ln_masses[i]).exp())
                - shift
        })
        .collect();
    let off: Vec<f64> = (0..m - 1)
        .map(|i| -0.5 * (ln_flux[i + 1] - 0.5 * (ln_masses[i] + ln_masses[i + 1])).exp())
        .collect();
    Ok(RadialOperator {
        lam,
        grid: *grid,
        diag,
        off,
        ln_masses,
        energy_scale: params.hbar * params.hbar / (params.mass * params.curvature_radius.powi(2)),
    })
}

/// Cubic Lagrange stencil for a point between nodes.
fn stencil(grid: &RadialGrid, tau: f64) -> Result<(usize, [f64; 4])> {
    let lo = grid.node(0);
    let hi = grid.node(grid.cells() - 1);
    if !(tau > grid.tau_min && tau < grid.tau_max) || tau < lo || tau > hi {
        return Err(Error::OutsideGrid {
            tau,
            tau_min: lo,
            tau_max: hi,
        });
    }
    let x = (tau - lo) / grid.step();
    let start = (x.floor() as usize).saturating_sub(1).min(grid.cells() - 4);
    let mut w = [0.0; 4];
    for (p, wp) in w.iter_mut().enumerate() {
        let xp = (start + p) as f64;
        *wp = (0..4)
            .filter(|&q| q != p)
            .map(|q| {
                let xq = (start + q) as f64;
                (x - xq) / (xp - xq)
            })
            .product();
    }
    Ok((start, w))
}

/// Eigenvalues with eigenvector profiles at a fixed set of endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPropagator {
    /// Reduced eigenvalues; physical energies are `energy_scale ×` these.
    pub eigenvalues: Vec<f64>,
    /// `profiles[a][j]`: eigenfunction `j` (unit norm in `sinh τ dτ`) at endpoint `a`.
    pub profiles: Vec<Vec<f64>>,
    pub energy_scale: f64,
}

impl RadialOperator {
    pub fn dimension(&self) -> usize {
        self.diag.len()
    }

    /// Ascending physical eigenvalues.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let (mut ev, _) = tridiagonal_eigen(&self.diag, &self.off, &[])?;
        ev.sort_by(f64::total_cmp);
        Ok(ev.into_iter().map(|e| e * self.energy_scale).collect())
    }

    pub fn propagator(&self, taus: &[f64]) -> Result<GridPropagator> {
        let stencils = taus
            .iter()
            .map(|&t| stencil(&self.grid, t))
            .collect::<Result<Vec<_>>>()?;
        let mut rows: Vec<usize> = stencils.iter().flat_map(|(s, _)| *s..*s + 4).collect();
        rows.sort_unstable();
        rows.dedup();
        let (eigenvalues, z) = tridiagonal_eigen(&self.diag, &self.off, &rows)?;
        let profiles = stencils
            .iter()
            .zip(taus)
            .map(|((start, w), &tau)| {
                let mut v = vec![0.0; eigenvalues.len()];
                let ln_f_over_g = self.lam * ln_sinh(tau);
                for (p, wp) in w.iter().enumerate() {
                    let node = start + p;
                    let r = rows
                        .binary_search(&node)
                        .expect("stencil rows are accumulated");
                    let c = wp * (ln_f_over_g - 0.5 * self.ln_masses[node]).exp();
                    for (vj, zj) in v.iter_mut().zip(&z[r]) {
                        *vj += c * zj;
                    }
                }
                v
            })
            .collect();
        Ok(GridPropagator {
            eigenvalues,
            profiles,
            energy_scale: self.energy_scale,
        })
    }
}

impl GridPropagator {
    /// Kernel of `exp(−βH/ħ)` between endpoints `a` and `b` at reduced time `β' = ħβ/mR²`,
    /// in the `sinh τ dτ` measure (without the `1/R²`).
    pub fn reduced_kernel(&self, a: usize, b: usize, reduced_beta: f64) -> f64 {
        self.eigenvalues
            .iter()
            .zip(self.profiles[a].iter().zip(&self.profiles[b]))
            .map(|(e, (x, y))| (-reduced_beta * e).exp() * x * y)
            .sum()
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(invalid(
            "beta",
            format!("must be finite and > 0, got {beta}"),
        ));
    }
    Ok(())
}

/// Grid counterpart of `euclidean_radial_kernel`, carrying the same `1/R²`.
pub fn grid_kernel(
    lam: f64,
    tau1: f64,
    tau2: f64,
    beta: f64,
    grid: &RadialGrid,
    params: &PhysicalParams,
) -> Result<f64> {
    check_beta(beta)?;
    let prop = build_radial_operator(lam, grid, params)?.propagator(&[tau1, tau2])?;
    Ok(prop.reduced_kernel(0, 1, params.reduced_beta(beta)) / params.curvature_radius.powi(2))
}

/// `(1/2π) Σ_{|l| ≤ l_max} e^{ilΔφ} grid_kernel(|l − ξ|, τ₁, τ₂, β)`.
#[allow(clippy::too_many_arguments)]
pub fn grid_2d_kernel(
    p1: &PseudospherePoint,
    p2: &PseudospherePoint,
    beta: f64,
    xi: f64,
    l_max: u32,
    grid: &RadialGrid,
    params: &PhysicalParams,
    exec: Execution,
) -> Result<Complex64> {
    check_beta(beta)?;
    if !xi.is_finite() {
        return Err(invalid("xi", "must be finite"));
    }
    let lmax = l_max as i64;
    let ls: Vec<i64> = (-lmax..=lmax).collect();
    let mut lams: Vec<f64> = ls.iter().map(|&l| (l as f64 - xi).abs()).collect();
    lams.sort_by(f64::total_cmp);
    lams.dedup_by(|a, b| a.to_bits() == b.to_bits());
    let (t1, t2) = (p1.tau(), p2.tau());
    let values = try_map(exec, &lams, |&lam| {
        grid_kernel(lam, t1, t2, beta, grid, params)
    })?;
    let dphi = p2.phi() - p1.phi();
    let mut sum = Complex64::new(0.0, 0.0);
    for l in ls {
        let lam = (l as f64 - xi).abs();
        let i = lams.partition_point(|x| x.total_cmp(&lam).is_lt());
        sum += Complex64::from_polar(values[i], l as f64 * dphi);
    }
    Ok(sum / (2.0 * PI))
}

/// Grid kernel on three successively doubled grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Refinement {
    pub tau1: f64,
    pub tau2: f64,
    pub beta: f64,
    pub values: [f64; 3],
    pub steps: [f64; 3],
    /// Second-order Richardson extrapolation from the two finest grids.
    pub extrapolated: f64,
    /// Observed convergence order from the three values.
    pub order: f64,
}

/// Refines `grid`, `2×` and `4×` its points for every `(τ₁, τ₂, β)` in `cases`,
/// reusing one eigendecomposition per grid.
pub fn refine_grid_kernel(
    lam: f64,
    cases: &[(f64, f64, f64)],
    grid: &RadialGrid,
    params: &PhysicalParams,
) -> Result<Vec<Refinement>> {
    for &(_, _, beta) in cases {
        check_beta(beta)?;
    }
    let mut taus: Vec<f64> = cases.iter().flat_map(|&(a, b, _)| [a, b]).collect();
    taus.sort_by(f64::total_cmp);
    taus.dedup();
    let idx = |t: f64| taus.partition_point(|x| *x < t);
    let grids = [grid.refined(1), grid.refined(2), grid.refined(4)];
    let r2 = params.curvature_radius.powi(2);
    let mut values = vec![[0.0; 3]; cases.len()];
    for (g, level) in grids.iter().zip(0..) {
        let prop = build_radial_operator(lam, g, params)?.propagator(&taus)?;
        for (v, &(a, b, beta)) in values.iter_mut().zip(cases) {
            v[level] = prop.reduced_kernel(idx(a), idx(b), params.reduced_beta(beta)) / r2;
        }
    }
    let steps = [grids[0].step(), grids[1].step(), grids[2].step()];
    Ok(cases
        .iter()
        .zip(values)
        .map(|(&(tau1, tau2, beta), v)| {
            let q = (steps[1] / steps[2]).powi(2);
            let extrapolated = v[2] + (v[2] - v[1]) / (q - 1.0);
            let order = ((v[0] - v[1]) / (v[1] - v[2])).abs().ln() / (steps[1] / steps[2]).ln();
            Refinement {
                tau1,
                tau2,
                beta,
                values: v,
                steps,
                extrapolated,
                order,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn nat() -> PhysicalParams {
        PhysicalParams::default()
    }

    fn half_closed_form(b: f64, t1: f64, t2: f64) -> f64 {
        (-b / 8.0).exp() / (2.0 * PI * b).sqrt()
            * ((-(t1 - t2).powi(2) / (2.0 * b)).exp() - (-(t1 + t2).powi(2) / (2.0 * b)).exp())
            / (t1.sinh() * t2.sinh()).sqrt()
    }

    #[test]
    fn operator_shape() {
        let g = RadialGrid::new(1e-3, 12.0, 200).unwrap();
        let op = build_radial_operator(0.7, &g, &nat()).unwrap();
        assert_eq!(op.dimension(), 199);
        assert_eq!(op.off.len(), 198);
        assert!(op.off.iter().all(|&o| o < 0.0));
        assert!(RadialGrid::new(1.0, 0.5, 200).is_err());
        assert!(RadialGrid::new(1e-3, 12.0, 50).is_err());
    }

    #[test]
    fn spectrum_sits_above_continuum_edge() {
        for lam in [0.5, 1.0, 2.5] {
            let op = build_radial_operator(lam, &RadialGrid::new(1e-3, 12.0, 400).unwrap(), &nat())
                .unwrap();
            let ev = op.eigenvalues().unwrap();
            assert!(ev[0] >= 0.125 - 1e-6, "{lam}: {}", ev[0]);
        }
        // the edge is approached from above as the box grows
        let lowest = |tmax: f64| {
            let g = RadialGrid::new(1e-3, tmax, 800).unwrap();
            build_radial_operator(0.5, &g, &nat())
                .unwrap()
                .eigenvalues()
                .unwrap()[0]
        };
        let (a, b) = (lowest(8.0), lowest(16.0));
        assert!(a > b && b > 0.125);
    }

    #[test]
    fn half_order_matches_closed_form() {
        let r = refine_grid_kernel(
            0.5,
            &[(0.7, 1.3, 0.5), (1.0, 1.0, 0.25)],
            &RadialGrid::new(1e-3, 12.0, 500).unwrap(),
            &nat(),
        )
        .unwrap();
        for c in r {
            let e = half_closed_form(c.beta, c.tau1, c.tau2);
            assert_relative_eq!(c.extrapolated, e, max_relative = 1e-7);
            assert!((c.order - 2.0).abs() < 0.05, "order {}", c.order);
        }
    }

    #[test]
    fn symmetric_and_positive() {
        let g = RadialGrid::new(1e-3, 12.0, 400).unwrap();
        let a = grid_kernel(0.3, 0.5, 2.0, 0.5, &g, &nat()).unwrap();
        let b = grid_kernel(0.3, 2.0, 0.5, 0.5, &g, &nat()).unwrap();
        assert!(a > 0.0);
        assert_relative_eq!(a, b, max_relative = 1e-12);
        assert!(matches!(
            grid_kernel(0.3, 13.0, 1.0, 0.5, &g, &nat()),
            Err(Error::OutsideGrid { .. })
        ));
    }

    #[test]
    fn semigroup() {
        // kernel(β₁+β₂)(a, b) = Σ_i kernel(β₁)(a, i) kernel(β₂)(i, b) M_i / sinh^{2λ} on the grid nodes
        let g = RadialGrid::new(1e-3, 8.0, 300).unwrap();
        let op = build_radial_operator(0.7, &g, &nat()).unwrap();
        let nodes: Vec<f64> = (0..g.cells()).map(|i| g.node(i)).collect();
        let mut taus = vec![0.8, 1.4];
        taus.extend(&nodes);
        let prop = op.propagator(&taus).unwrap();
        let direct = prop.reduced_kernel(0, 1, 0.7);
        let composed: f64 = (0..nodes.len())
            .map(|i| {
                let s = nodes[i].sinh().powf(1.4);
                prop.reduced_kernel(0, i + 2, 0.3)
                    * prop.reduced_kernel(i + 2, 1, 0.4)
                    * op.ln_masses[i].exp()
                    / s
            })
            .sum();
        assert_relative_eq!(direct, composed, max_relative = 1e-10);
    }

    #[test]
    fn two_dimensional_hermiticity() {
        let g = RadialGrid::new(1e-3, 12.0, 300).unwrap();
        let p1 = PseudospherePoint::new(0.8, 0.3).unwrap();
        let p2 = PseudospherePoint::new(1.2, 1.4).unwrap();
        let a = grid_2d_kernel(&p1, &p2, 0.5, 0.3, 8, &g, &nat(), Execution::Sequential).unwrap();
        let b = grid_2d_kernel(&p2, &p1, 0.5, 0.3, 8, &g, &nat(), Execution::Sequential).unwrap();
        assert!((a - b.conj()).norm() < 1e-12 * a.norm());
    }
}
