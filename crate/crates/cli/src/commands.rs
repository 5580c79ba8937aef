use hyperbolic_ab::flat_limit::{
    interference_term, legendre_bessel_limit_check, Convention, InterferenceGeometry,
};
use hyperbolic_ab::kernel::{
    partial_wave_kernel, poisson_duality, winding_kernel_sum, KernelRequest,
};
use hyperbolic_ab::landau::landau_levels;
use hyperbolic_ab::par::try_map;
use hyperbolic_ab::potentials::{
    coulomb_bound_spectrum, higgs_bound_spectrum, CoulombParams, HiggsParams,
};
use hyperbolic_ab::validation::{run_all, run_suite, Suite};
use hyperbolic_ab::{Error, Execution, PhysicalParams, PseudospherePoint, Result};

use crate::output::{Cell, Record};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Potential {
    Landau { b: f64 },
    Higgs { omega: f64 },
    Coulomb { alpha: f64 },
}

pub fn spectrum(pot: Potential, xi: f64, l_max: u32, params: &PhysicalParams) -> Result<Record> {
    let mut rec = match pot {
        Potential::Landau { b } => {
            let mut r = Record::new("spectrum landau", &["N", "l", "E"]);
            r.param("b", b);
            r
        }
        Potential::Higgs { omega } => {
            let mut r = Record::new("spectrum higgs", &["N", "l", "E"]);
            r.param("omega", omega);
            r
        }
        Potential::Coulomb { alpha } => {
            let mut r = Record::new("spectrum coulomb", &["N", "l", "E"]);
            r.param("alpha", alpha);
            r
        }
    };
    rec.param("xi", xi).param("lmax", l_max as i64);
    let lmax = l_max as i64;
    for l in -lmax..=lmax {
        let levels = match pot {
            // the constant-field ladder does not depend on l
            Potential::Landau { b } => landau_levels(b, params)?,
            Potential::Higgs { omega } => {
                higgs_bound_spectrum(&HiggsParams::new(omega, params)?, l, xi, params)?
            }
            Potential::Coulomb { alpha } => {
                coulomb_bound_spectrum(&CoulombParams::new(alpha, params)?, l, xi, params)?
            }
        };
        for (n, e) in levels.into_iter().enumerate() {
            rec.push(vec![(n as i64).into(), l.into(), e.into()]);
        }
    }
    Ok(rec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum KernelMode {
    PartialWave,
    Winding,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelArgs {
    pub beta: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub dphi: f64,
    pub xi: f64,
    pub mode: KernelMode,
    pub l_max: u32,
    pub n_max: u32,
}

pub fn kernel(a: &KernelArgs, params: &PhysicalParams) -> Result<Record> {
    let mut req = KernelRequest::new(
        PseudospherePoint::new(a.tau1, 0.0)?,
        PseudospherePoint::new(a.tau2, a.dphi)?,
        a.beta,
        a.xi,
    )?;
    req.l_max = a.l_max;
    req.n_max = a.n_max;
    req.params = *params;
    req.validate()?;
    let mut rec = match a.mode {
        KernelMode::PartialWave => {
            let k = partial_wave_kernel(&req)?;
            let mut r = Record::new("kernel", &["re", "im", "abs_err", "truncation"]);
            r.push(vec![
                k.value.re.into(),
                k.value.im.into(),
                k.abs_err.into(),
                k.truncation.into(),
            ]);
            r
        }
        KernelMode::Winding => {
            let s = winding_kernel_sum(&req)?;
            let mut r = Record::new("kernel", &["n", "re", "im", "abs"]);
            for (n, k) in s.terms {
                r.push(vec![n.into(), k.re.into(), k.im.into(), k.norm().into()]);
            }
            r
        }
        KernelMode::Both => {
            let d = poisson_duality(&req, None)?;
            let mut r = Record::new(
                "kernel",
                &[
                    "partial_wave_re",
                    "partial_wave_im",
                    "winding_re",
                    "winding_im",
                    "residual_bare",
                    "residual",
                ],
            );
            r.push(vec![
                d.partial_wave.value.re.into(),
                d.partial_wave.value.im.into(),
                d.winding.corrected.re.into(),
                d.winding.corrected.im.into(),
                d.residual_bare.into(),
                d.residual_corrected.into(),
            ]);
            r
        }
    };
    let mode = match a.mode {
        KernelMode::PartialWave => "partial-wave",
        KernelMode::Winding => "winding",
        KernelMode::Both => "both",
    };
    rec.param("mode", mode)
        .param("beta", a.beta)
        .param("tau1", a.tau1)
        .param("tau2", a.tau2)
        .param("dphi", a.dphi)
        .param("xi", a.xi)
        .param("lmax", a.l_max as i64)
        .param("nmax", a.n_max as i64);
    Ok(rec)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceArgs {
    pub xi_start: f64,
    pub xi_end: f64,
    pub xi_steps: usize,
    pub pairs: Vec<(i64, i64)>,
    pub tau1: f64,
    pub tau2: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub time: f64,
    pub verbatim_sign: bool,
}

/// `"0:-1,2:2"` into winding pairs.
pub fn parse_pairs(s: &str) -> std::result::Result<Vec<(i64, i64)>, String> {
    let pairs: Vec<(i64, i64)> = s
        .split(',')
        .map(|p| {
            let (n, l) = p
                .trim()
                .split_once(':')
                .ok_or_else(|| format!("pair {p:?} is not of the form n:l"))?;
            let n = n.trim().parse().map_err(|e| format!("{n:?}: {e}"))?;
            let l = l.trim().parse().map_err(|e| format!("{l:?}: {e}"))?;
            Ok((n, l))
        })
        .collect::<std::result::Result<_, String>>()?;
    for (i, p) in pairs.iter().enumerate() {
        if pairs[..i].contains(p) {
            return Err(format!("pair {}:{} listed twice", p.0, p.1));
        }
    }
    Ok(pairs)
}

pub fn sweep(start: f64, end: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..steps)
            .map(|i| start + (end - start) * i as f64 / (steps - 1) as f64)
            .collect(),
    }
}

pub fn interference(
    a: &InterferenceArgs,
    params: &PhysicalParams,
    exec: Execution,
) -> Result<Record> {
    if a.pairs.is_empty() {
        return Err(Error::InvalidParameter {
            name: "pairs",
            reason: "at least one n:l pair is required".into(),
        });
    }
    if a.xi_steps == 0 || !(a.xi_start.is_finite() && a.xi_end.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "xi",
            reason: "need a finite range and at least one step".into(),
        });
    }
    let mut g = InterferenceGeometry::new(
        a.tau1,
        a.tau2,
        a.phi1,
        a.phi2,
        params.curvature_radius,
        a.time,
    )?;
    g.params = *params;
    g.validate()?;
    let conv = if a.verbatim_sign {
        Convention::Verbatim
    } else {
        Convention::Contrast
    };
    let names: Vec<String> = std::iter::once("xi".to_owned())
        .chain(a.pairs.iter().map(|(n, l)| format!("I_{n}_{l}")))
        .collect();
    let cols: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut rec = Record::new("interference", &cols);
    let xis = sweep(a.xi_start, a.xi_end, a.xi_steps);
    let rows = try_map(exec, &xis, |&xi| {
        let mut row: Vec<Cell> = vec![xi.into()];
        for &(n, l) in &a.pairs {
            row.push(interference_term(n, l, &g, xi, conv)?.into());
        }
        Ok::<_, Error>(row)
    })?;
    for r in rows {
        rec.push(r);
    }
    let pairs: Vec<String> = a.pairs.iter().map(|(n, l)| format!("{n}:{l}")).collect();
    rec.param("pairs", pairs.join(",").as_str())
        .param("xi_start", a.xi_start)
        .param("xi_end", a.xi_end)
        .param("xi_steps", a.xi_steps as i64)
        .param("tau1", a.tau1)
        .param("tau2", a.tau2)
        .param("phi1", a.phi1)
        .param("phi2", a.phi2)
        .param("time", a.time)
        .param(
            "convention",
            if a.verbatim_sign {
                "verbatim"
            } else {
                "contrast"
            },
        );
    Ok(rec)
}

pub fn flatlimit(mus: &[f64], zs: &[f64], nus: &[f64]) -> Result<Record> {
    let mut rec = Record::new("flatlimit", &["mu", "z", "nu", "lhs", "rhs", "rel_dev"]);
    for &mu in mus {
        for &z in zs {
            for &nu in nus {
                let c = legendre_bessel_limit_check(mu, z, nu)?;
                rec.push(vec![
                    mu.into(),
                    z.into(),
                    nu.into(),
                    c.lhs.into(),
                    c.rhs.into(),
                    c.rel_dev.into(),
                ]);
            }
        }
    }
    Ok(rec)
}

/// The report and whether every check passed.
pub fn validate(suite: Option<Suite>, exec: Execution) -> Result<(Record, bool)> {
    let checks = match suite {
        Some(s) => run_suite(s, exec)?,
        None => run_all(exec)?,
    };
    let mut rec = Record::new(
        "validate",
        &["suite", "name", "measured", "tolerance", "passed"],
    );
    rec.param("suite", suite.map_or("all", Suite::name));
    let mut all = true;
    for c in checks {
        all &= c.passed;
        let measured = if c.measured.is_finite() {
            Cell::Num(c.measured)
        } else {
            Cell::Text(c.measured.to_string())
        };
        rec.push(vec![
            c.suite.name().into(),
            c.name.as_str().into(),
            measured,
            c.tolerance.into(),
            c.passed.into(),
        ]);
    }
    Ok((rec, all))
}
