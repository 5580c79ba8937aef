//! Oracle suites: each check compares an implementation against an
//! independent reference and reports the measured residual.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::flat_limit::{flat_winding_kernel, legendre_bessel_limit_check};
use crate::grid::{refine_grid_kernel, RadialGrid};
use crate::kernel::{
    euclidean_radial_kernel, poisson_duality, radial_spectral_weight, KernelControls,
    KernelRequest, LambdaTable,
};
use crate::landau::{
    bound_level_count, free_wavefunction, landau_bound_wavefunction, landau_levels,
    landau_scattering_wavefunction,
};
use crate::model::{PhysicalParams, PseudospherePoint};
use crate::par::{try_map, Execution};
use crate::potentials::{coulomb_bound_spectrum, higgs_bound_spectrum, CoulombParams, HiggsParams};
use crate::quad::gauss_legendre;
use crate::specfun::{
    bessel_i, conical_reality_residual, hyp2f1, hyp2f1_terminating, jacobi_poly, SeriesControls,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Specfun,
    Kernel,
    Limits,
    Spectra,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Specfun, Suite::Kernel, Suite::Limits, Suite::Spectra];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Specfun => "specfun",
            Suite::Kernel => "kernel",
            Suite::Limits => "limits",
            Suite::Spectra => "spectra",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| invalid("suite", format!("unknown suite {s:?}")))
    }
}

/// One oracle comparison; it passes when `measured < tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(suite: Suite, name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            suite,
            name: name.into(),
            measured,
            tolerance,
            passed: measured < tolerance,
        }
    }
}

pub fn run_suite(suite: Suite, exec: Execution) -> Result<Vec<Check>> {
    match suite {
        Suite::Specfun => specfun_suite(),
        Suite::Kernel => kernel_suite(exec),
        Suite::Limits => limits_suite(exec),
        Suite::Spectra => spectra_suite(exec),
    }
}

pub fn run_all(exec: Execution) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for s in Suite::ALL {
        out.extend(run_suite(s, exec)?);
    }
    Ok(out)
}

fn max_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, f64::max)
}

/// `|Γ(1/2 + ik)|² = π/cosh πk` turns the order-zero weight into `k tanh πk`.
pub fn mehler_fock_residual(k: f64) -> Result<f64> {
    let exact = k * (PI * k).tanh();
    Ok((radial_spectral_weight(k, 0.0)? - exact).abs() / exact)
}

/// `P_n^{(a,b)}(x)` against `(a+1)_n/n! ₂F₁(−n, n+a+b+1; a+1; (1−x)/2)`,
/// relative to the sum of absolute series terms.
pub fn jacobi_hypergeometric_residual(n: u32, a: f64, b: f64, x: f64) -> Result<f64> {
    let y = 0.5 * (1.0 - x);
    let bb = n as f64 + a + b + 1.0;
    let mut poch = 1.0;
    for j in 0..n {
        poch *= (a + 1.0 + j as f64) / (j + 1) as f64;
    }
    let rep =
        poch * hyp2f1_terminating(n, Complex64::new(bb, 0.0), Complex64::new(a + 1.0, 0.0), y)?.re;
    let (mut term, mut size) = (1.0f64, 1.0f64);
    for j in 0..n {
        let jf = j as f64;
        term *= (jf - n as f64) * (bb + jf) / ((a + 1.0 + jf) * (jf + 1.0)) * y;
        size += term.abs();
    }
    Ok((jacobi_poly(n, a, b, x) - rep).abs() / (poch.abs() * size))
}

/// Euler's transformation `₂F₁(−n, b; c; x) = (1−x)^{c+n−b} ₂F₁(c+n, c−b; c; x)`:
/// a terminating sum against the general (non-terminating) evaluator, relative
/// to the sum of absolute terms of the terminating side.
pub fn hypergeometric_euler_residual(n: u32, b: f64, c: f64, x: f64) -> Result<f64> {
    let ctl = SeriesControls::default();
    let nf = n as f64;
    let cc = Complex64::new(c, 0.0);
    let exact = hyp2f1_terminating(n, Complex64::new(b, 0.0), cc, x)?;
    let general = hyp2f1(
        Complex64::new(c + nf, 0.0),
        Complex64::new(c - b, 0.0),
        cc,
        x,
        &ctl,
    )? * (1.0 - x).powf(c + nf - b);
    let (mut term, mut size) = (1.0f64, 1.0f64);
    for j in 0..n {
        let jf = j as f64;
        term *= (jf - nf) * (b + jf) / ((c + jf) * (jf + 1.0)) * x;
        size += term.abs();
    }
    Ok((general - exact).norm() / size)
}

/// `I_{ν−1}(z) − I_{ν+1}(z) = (2ν/z) I_ν(z)`, relative to the largest term.
pub fn bessel_recurrence_residual(nu: f64, z: Complex64) -> Result<f64> {
    let ctl = SeriesControls::default();
    let lo = bessel_i(nu - 1.0, z, &ctl)?;
    let mid = bessel_i(nu, z, &ctl)?;
    let hi = bessel_i(nu + 1.0, z, &ctl)?;
    let rhs = mid * (2.0 * nu) / z;
    Ok((lo - hi - rhs).norm() / lo.norm().max(hi.norm()).max(rhs.norm()))
}

fn specfun_suite() -> Result<Vec<Check>> {
    let s = Suite::Specfun;
    let mut out = Vec::new();

    let mf = (1..=400)
        .map(|j| mehler_fock_residual(0.05 * j as f64))
        .collect::<Result<Vec<_>>>()?;
    out.push(Check::new(
        s,
        "mehler_fock_density k=0.05..20",
        max_of(mf),
        1e-12,
    ));

    let mut jac = Vec::new();
    let mut hyp = Vec::new();
    for n in [0u32, 1, 3, 7, 12] {
        for a in [0.0, 0.5, 2.3] {
            for b in [-0.4, 1.0, 4.0] {
                for x in [-0.9, -0.3, 0.2, 0.8] {
                    jac.push(jacobi_hypergeometric_residual(n, a, b, x)?);
                }
            }
        }
        for (b, c) in [(1.5, 2.0), (-2.5, 0.7), (4.0, 3.3)] {
            for x in [0.1, 0.5, 0.8, 0.97] {
                hyp.push(hypergeometric_euler_residual(n, b, c, x)?);
            }
        }
    }
    out.push(Check::new(
        s,
        "jacobi_vs_2f1 terminating",
        max_of(jac),
        1e-12,
    ));
    out.push(Check::new(
        s,
        "2f1_euler_transformation",
        max_of(hyp),
        1e-12,
    ));

    let mut bes = Vec::new();
    for nu in [1.0, 1.3, 2.7, 7.5, 20.25] {
        for z in [
            Complex64::new(0.3, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(10.0, 0.0),
            Complex64::new(35.0, 0.0),
            Complex64::new(0.0, 3.0),
            Complex64::new(5.0, 2.0),
            Complex64::new(0.0, -15.0),
        ] {
            bes.push(bessel_recurrence_residual(nu, z)?);
        }
    }
    out.push(Check::new(s, "bessel_recurrence", max_of(bes), 1e-9));

    let ctl = SeriesControls::default();
    let mut con = Vec::new();
    for mu in [0.0, 0.5, 1.7, 3.0] {
        for k in [0.1, 1.0, 5.0, 15.0] {
            for tau in [0.1, 1.0, 3.0, 6.0] {
                con.push(conical_reality_residual(mu, k, tau, &ctl)?);
            }
        }
    }
    out.push(Check::new(s, "conical_reality", max_of(con), 1e-8));
    Ok(out)
}

/// The `(λ, β, τ₁, τ₂)` points of the grid-oracle comparison.
pub const GRID_LAMBDAS: [f64; 5] = [0.0, 0.3, 0.7, 1.0, 2.5];
pub const GRID_BETAS: [f64; 3] = [0.25, 0.5, 1.0];
pub const GRID_TAUS: [f64; 3] = [0.5, 1.0, 2.0];

fn kernel_suite(exec: Execution) -> Result<Vec<Check>> {
    let s = Suite::Kernel;
    let params = PhysicalParams::default();
    let ctl = KernelControls::default();
    let mut cases = Vec::new();
    for beta in GRID_BETAS {
        for t1 in GRID_TAUS {
            for t2 in GRID_TAUS {
                cases.push((t1, t2, beta));
            }
        }
    }
    let base = RadialGrid {
        points: 1000,
        ..RadialGrid::default()
    };
    let refined = try_map(exec, &GRID_LAMBDAS, |&lam| {
        refine_grid_kernel(lam, &cases, &base, &params)
    })?;
    let mut out = Vec::new();
    for (lam, rows) in GRID_LAMBDAS.iter().zip(refined) {
        let mut order_dev: f64 = 0.0;
        for r in rows {
            let spectral = euclidean_radial_kernel(*lam, r.tau1, r.tau2, r.beta, &params, &ctl)?;
            let rel = (r.extrapolated - spectral.value).abs() / spectral.value.abs();
            out.push(Check::new(
                s,
                format!(
                    "grid_oracle lambda={lam} beta={} tau1={} tau2={}",
                    r.beta, r.tau1, r.tau2
                ),
                rel,
                1e-3,
            ));
            order_dev = order_dev.max((r.order - 2.0).abs());
        }
        out.push(Check::new(
            s,
            format!("grid_order lambda={lam} |p-2|"),
            order_dev,
            0.1,
        ));
    }

    let mut points = Vec::new();
    for beta in [0.5, 1.0] {
        for xi in [0.0, 0.3, 0.5] {
            for dphi in [0.0, 0.7, PI] {
                points.push((beta, xi, dphi));
            }
        }
    }
    let tables = try_map(exec, &[0.5, 1.0], |&beta| {
        LambdaTable::build(1.0, 1.0, beta, &params, &ctl)
    })?;
    for (beta, xi, dphi) in points {
        let req = duality_request(beta, xi, dphi)?;
        let table = if beta == 0.5 { &tables[0] } else { &tables[1] };
        let d = poisson_duality(&req, Some(table))?;
        out.push(Check::new(
            s,
            format!("poisson_duality_tail_corrected beta={beta} xi={xi} dphi={dphi}"),
            d.residual_corrected,
            1e-4,
        ));
    }
    Ok(out)
}

/// `τ₁ = τ₂ = 1`, `|l| ≤ 40`, `|n| ≤ 5`.
pub fn duality_request(beta: f64, xi: f64, dphi: f64) -> Result<KernelRequest> {
    let p1 = PseudospherePoint::new(1.0, 0.0)?;
    let p2 = PseudospherePoint::new(1.0, dphi)?;
    let mut req = KernelRequest::new(p1, p2, beta, xi)?;
    req.l_max = 40;
    req.n_max = 5;
    Ok(req)
}

fn limits_suite(exec: Execution) -> Result<Vec<Check>> {
    let s = Suite::Limits;
    let mut out = Vec::new();
    for mu in [0.0, 0.3, 0.5, 1.0] {
        for z in [0.5, 2.0] {
            let d = [500.0, 1000.0, 2000.0]
                .map(|nu| legendre_bessel_limit_check(mu, z, nu).map(|c| c.rel_dev));
            let [a, b, c] = [d[0].clone()?, d[1].clone()?, d[2].clone()?];
            out.push(Check::new(
                s,
                format!("legendre_bessel mu={mu} z={z} nu=1000"),
                b,
                1e-2,
            ));
            out.push(Check::new(
                s,
                format!("legendre_bessel_decreasing mu={mu} z={z} ratio"),
                (b / a).max(c / b),
                1.0,
            ));
        }
    }

    // curved winding kernels at R = 50 against the flat λ-integral at r = Rτ
    let curved = PhysicalParams::new(1.0, 1.0, 1.0, 50.0)?;
    let (tau, beta) = (0.02, 1.0);
    let table = LambdaTable::build(tau, tau, beta, &curved, &KernelControls::default())?;
    let cases: Vec<(i64, f64, f64)> = [(0, 0.3, 0.7), (1, 0.3, 0.7), (-1, 0.5, 0.0), (2, 0.0, 2.0)]
        .into_iter()
        .collect();
    let flat = try_map(exec, &cases, |&(n, xi, dphi)| {
        let r = 50.0 * tau;
        flat_winding_kernel(n, r, r, dphi, xi, beta, &PhysicalParams::default())
    })?;
    for (&(n, xi, dphi), f) in cases.iter().zip(flat) {
        let c = table.winding(n, xi, dphi);
        out.push(Check::new(
            s,
            format!("flat_limit_winding R=50 n={n} xi={xi} dphi={dphi}"),
            (c - f).norm() / f.norm(),
            5e-2,
        ));
    }
    Ok(out)
}

/// Largest `|G − I|` of the bound-state Gram matrix for `l ∈ ls`, with a
/// composite Gauss–Legendre rule in `τ` and the trapezoid rule in `φ`.
pub fn landau_gram_deviation(b: f64, ls: &[i64], exec: Execution) -> Result<f64> {
    let params = PhysicalParams::default();
    let states: Vec<(u32, i64)> = ls
        .iter()
        .flat_map(|&l| (0..bound_level_count(b) as u32).map(move |n| (n, l)))
        .collect();
    let (x, w) = gauss_legendre(20);
    let (panel, panels) = (2.0, 30);
    let n_phi = 4 * ls
        .iter()
        .map(|l| l.unsigned_abs() as usize)
        .max()
        .unwrap_or(0)
        + 8;
    let mut nodes = Vec::new();
    for p in 0..panels {
        for (xj, wj) in x.iter().zip(&w) {
            let tau = panel * (p as f64 + 0.5 * (xj + 1.0));
            for q in 0..n_phi {
                let phi = 2.0 * PI * q as f64 / n_phi as f64;
                let weight = 0.5 * panel * wj * tau.sinh() * 2.0 * PI / n_phi as f64;
                nodes.push((tau, phi, weight));
            }
        }
    }
    let values = try_map(exec, &states, |&(n, l)| {
        nodes
            .iter()
            .map(|&(tau, phi, _)| {
                landau_bound_wavefunction(n, l, b, &PseudospherePoint::new(tau, phi)?, &params)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut dev: f64 = 0.0;
    for i in 0..states.len() {
        for j in 0..states.len() {
            let g: Complex64 = nodes
                .iter()
                .enumerate()
                .map(|(k, node)| values[i][k].conj() * values[j][k] * node.2)
                .sum();
            let e = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((g - e).norm());
        }
    }
    Ok(dev)
}

/// Largest relative gap between constant-field states at `b = 0` and free states.
pub fn zero_field_deviation() -> Result<f64> {
    let params = PhysicalParams::default();
    let ctl = SeriesControls::default();
    let mut dev: f64 = 0.0;
    for k in [0.5, 2.0] {
        for l in [0, 1, 3] {
            for tau in [0.1, 1.0, 3.0] {
                let p = PseudospherePoint::new(tau, 0.4)?;
                let a = landau_scattering_wavefunction(k, l, 0.0, &p, &params, &ctl)?;
                let f = free_wavefunction(k, l, &p, &params, &ctl)?;
                dev = dev.max((a - f).norm() / f.norm());
            }
        }
    }
    Ok(dev)
}

/// Mpmath value of the lowest Higgs level at `ω = 3`, `R = 1`, `l = ξ = 0`.
pub const HIGGS_E0: f64 = 2.541_381_265_149_109_8;

fn spectra_suite(exec: Execution) -> Result<Vec<Check>> {
    let s = Suite::Spectra;
    let nat = PhysicalParams::default();
    let mut out = Vec::new();

    let ladder = landau_levels(3.0, &nat)?;
    let expected = [1.5, 3.5, 4.5];
    let dev = if ladder.len() == 3 {
        max_of(ladder.iter().zip(expected).map(|(a, e)| (a - e).abs()))
    } else {
        f64::INFINITY
    };
    out.push(Check::new(s, "landau_ladder b=3", dev, 1e-12));
    out.push(Check::new(
        s,
        "landau_bound_count b=0.4",
        landau_levels(0.4, &nat)?.len() as f64,
        0.5,
    ));
    out.push(Check::new(
        s,
        "landau_gram b=4.2 l=-2..2",
        landau_gram_deviation(4.2, &[-2, -1, 0, 1, 2], exec)?,
        1e-7,
    ));
    out.push(Check::new(
        s,
        "landau_zero_field_reduction",
        zero_field_deviation()?,
        1e-8,
    ));

    let h = HiggsParams::new(3.0, &nat)?;
    let e = higgs_bound_spectrum(&h, 0, 0.0, &nat)?;
    out.push(Check::new(
        s,
        "higgs_level_count omega=3",
        (e.len() as f64 - 3.0).abs(),
        0.5,
    ));
    out.push(Check::new(
        s,
        "higgs_e0 omega=3",
        e.first().map_or(f64::INFINITY, |x| (x - HIGGS_E0).abs()),
        1e-6,
    ));

    let r100 = PhysicalParams::new(1.0, 1.0, 1.0, 100.0)?;
    let c = CoulombParams::new(1.0, &r100)?;
    let e = coulomb_bound_spectrum(&c, 0, 0.0, &r100)?;
    out.push(Check::new(
        s,
        "coulomb_level_count R=100",
        (e.len() as f64 - 10.0).abs(),
        0.5,
    ));
    out.push(Check::new(
        s,
        "coulomb_e0 R=100",
        e.first().map_or(f64::INFINITY, |x| (x + 1.99).abs()),
        1e-12,
    ));

    let mut cov: f64 = 0.0;
    for l in -3i64..=3 {
        for xi in [-1.5, -0.3, 0.0, 0.25, 0.5, 0.9, 1.7] {
            let pairs = [
                (
                    higgs_bound_spectrum(&h, l, xi, &nat)?,
                    higgs_bound_spectrum(&h, l + 1, xi + 1.0, &nat)?,
                ),
                (
                    coulomb_bound_spectrum(&c, l, xi, &r100)?,
                    coulomb_bound_spectrum(&c, l + 1, xi + 1.0, &r100)?,
                ),
            ];
            for (a, b) in pairs {
                if a.len() != b.len() {
                    cov = f64::INFINITY;
                }
                cov = cov.max(max_of(a.iter().zip(&b).map(|(x, y)| (x - y).abs())));
            }
        }
    }
    out.push(Check::new(
        s,
        "flux_shift_covariance higgs+coulomb",
        cov,
        1e-12,
    ));
    Ok(out)
}
