//! `hyperab`: spectra, kernels, interference sweeps and oracle reports as CSV or JSON.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 numerical
//! non-convergence, 4 validation failure.

mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperbolic_ab::validation::Suite;
use hyperbolic_ab::{Error, Execution, PhysicalParams};

use commands::{InterferenceArgs, KernelArgs, KernelMode, Potential};
use output::{Format, Record};

#[derive(Debug, Parser)]
#[command(
    name = "hyperab",
    version,
    about = "Aharonov-Bohm effect on the hyperbolic plane"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    #[arg(long, default_value_t = 1.0, global = true)]
    hbar: f64,
    #[arg(long, default_value_t = 1.0, global = true)]
    mass: f64,
    /// Curvature radius.
    #[arg(long = "R", default_value_t = 1.0, global = true)]
    radius: f64,
    /// Reserved; nothing here is random, so setting it is an error.
    #[arg(long, global = true)]
    seedless: bool,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Evaluate sweep points one at a time.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bound-state energies (N, l, E) for |l| <= lmax.
    #[command(allow_negative_numbers = true)]
    Spectrum {
        #[command(subcommand)]
        potential: SpectrumCmd,
    },
    /// Euclidean AB kernel by partial waves, windings, or both.
    #[command(allow_negative_numbers = true)]
    Kernel {
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        #[arg(long, default_value_t = 1.0)]
        tau1: f64,
        #[arg(long, default_value_t = 1.0)]
        tau2: f64,
        #[arg(long, default_value_t = 0.7)]
        dphi: f64,
        #[arg(long, default_value_t = 0.3)]
        xi: f64,
        #[arg(long, value_enum, default_value_t = KernelMode::PartialWave)]
        mode: KernelMode,
        #[arg(long, default_value_t = 40)]
        lmax: u32,
        #[arg(long, default_value_t = 5)]
        nmax: u32,
    },
    /// Flux sweep of the winding interference terms I_nl.
    #[command(allow_negative_numbers = true)]
    Interference {
        #[arg(long, default_value_t = 0.0)]
        xi_start: f64,
        #[arg(long, default_value_t = 1.0)]
        xi_end: f64,
        #[arg(long, default_value_t = 11)]
        xi_steps: usize,
        /// Comma-separated n:l pairs.
        #[arg(long, default_value = "0:-1", value_parser = parse_pairs, allow_hyphen_values = true)]
        pairs: Pairs,
        #[arg(long, default_value_t = 1.0)]
        tau1: f64,
        #[arg(long, default_value_t = 1.0)]
        tau2: f64,
        #[arg(long, default_value_t = 0.0)]
        phi1: f64,
        #[arg(long, default_value_t = std::f64::consts::PI)]
        phi2: f64,
        /// Real time T.
        #[arg(long, default_value_t = 1.0)]
        time: f64,
        /// Keep the negative prefactor 2(m/2πiħT)² instead of the bare contrast.
        #[arg(long)]
        verbatim_sign: bool,
    },
    /// Convergence of ν^μ P^{−μ}_ν(cosh(z/ν)) to I_μ(z).
    #[command(allow_negative_numbers = true)]
    Flatlimit {
        #[arg(long, value_delimiter = ',', default_value = "0,0.3,0.5,1")]
        mu: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0.5,2")]
        z: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "500,1000,2000")]
        nu: Vec<f64>,
    },
    /// Run oracle suites; exits 4 if any check fails.
    Validate {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
}

#[derive(Debug, Subcommand)]
enum SpectrumCmd {
    #[command(allow_negative_numbers = true)]
    Landau {
        #[arg(long)]
        b: f64,
        #[arg(long, default_value_t = 0.0)]
        xi: f64,
        #[arg(long, default_value_t = 0)]
        lmax: u32,
    },
    #[command(allow_negative_numbers = true)]
    Higgs {
        #[arg(long)]
        omega: f64,
        #[arg(long, default_value_t = 0.0)]
        xi: f64,
        #[arg(long, default_value_t = 0)]
        lmax: u32,
    },
    #[command(allow_negative_numbers = true)]
    Coulomb {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        xi: f64,
        #[arg(long, default_value_t = 0)]
        lmax: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Pairs(Vec<(i64, i64)>);

fn parse_pairs(s: &str) -> Result<Pairs, String> {
    commands::parse_pairs(s).map(Pairs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    All,
    Specfun,
    Kernel,
    Limits,
    Spectra,
}

impl SuiteArg {
    fn suite(self) -> Option<Suite> {
        match self {
            SuiteArg::All => None,
            SuiteArg::Specfun => Some(Suite::Specfun),
            SuiteArg::Kernel => Some(Suite::Kernel),
            SuiteArg::Limits => Some(Suite::Limits),
            SuiteArg::Spectra => Some(Suite::Spectra),
        }
    }
}

enum Failure {
    Usage(String),
    Numerical(String),
    Validation,
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence { .. }
            | Error::Truncation { .. }
            | Error::Quadrature(_)
            | Error::ConicalReality { .. }
            | Error::Pole { .. } => Failure::Numerical(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    if g.seedless {
        return Err(Failure::Usage(
            "--seedless is reserved: no computation uses randomness".into(),
        ));
    }
    let params = PhysicalParams::new(g.hbar, g.mass, 1.0, g.radius)?;
    let exec = if g.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let mut passed = true;
    let mut record: Record = match cli.command {
        Command::Spectrum { potential } => {
            let (pot, xi, lmax) = match potential {
                SpectrumCmd::Landau { b, xi, lmax } => (Potential::Landau { b }, xi, lmax),
                SpectrumCmd::Higgs { omega, xi, lmax } => (Potential::Higgs { omega }, xi, lmax),
                SpectrumCmd::Coulomb { alpha, xi, lmax } => {
                    (Potential::Coulomb { alpha }, xi, lmax)
                }
            };
            commands::spectrum(pot, xi, lmax, &params)?
        }
        Command::Kernel {
            beta,
            tau1,
            tau2,
            dphi,
            xi,
            mode,
            lmax,
            nmax,
        } => commands::kernel(
            &KernelArgs {
                beta,
                tau1,
                tau2,
                dphi,
                xi,
                mode,
                l_max: lmax,
                n_max: nmax,
            },
            &params,
        )?,
        Command::Interference {
            xi_start,
            xi_end,
            xi_steps,
            pairs,
            tau1,
            tau2,
            phi1,
            phi2,
            time,
            verbatim_sign,
        } => commands::interference(
            &InterferenceArgs {
                xi_start,
                xi_end,
                xi_steps,
                pairs: pairs.0,
                tau1,
                tau2,
                phi1,
                phi2,
                time,
                verbatim_sign,
            },
            &params,
            exec,
        )?,
        Command::Flatlimit { mu, z, nu } => commands::flatlimit(&mu, &z, &nu)?,
        Command::Validate { suite } => {
            let (rec, ok) = commands::validate(suite.suite(), exec)?;
            passed = ok;
            rec
        }
    };
    record
        .param("hbar", g.hbar)
        .param("mass", g.mass)
        .param("R", g.radius);
    if let Some(col) = record.non_finite() {
        return Err(Failure::Numerical(format!("non-finite value in {col}")));
    }
    match &g.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            record.write(g.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let mut w = io::stdout().lock();
            record.write(g.format, &mut w)?;
            w.flush()?;
        }
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Validation)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Validation) => {
            eprintln!("error: validation failed");
            ExitCode::from(4)
        }
        // a closed reader (`| head`) is not a failure of the computation
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
