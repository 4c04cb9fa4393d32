//! `cglmp`: CSV sweeps and the verification suite.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use cglmp_core::bell::{chsh_identity_check, quantum_behavior, Behavior, JointDistribution};
use cglmp_core::classical::lhv_minimum;
use cglmp_core::continuum::{self, QuadratureSpec, Scheme};
use cglmp_core::measurements::Setting;
use cglmp_core::optimize::{self, MatvecStrategy, PowerIterationConfig};
use cglmp_core::states::{maximally_entangled, LogBase};
use cglmp_core::verify::{self, VerifyConfig};

#[derive(Parser)]
#[command(
    name = "cglmp",
    version,
    about = "Quantum violation of the 2x2xd CGLMP-type Bell inequality"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal and approximate Bell values over a grid of d.
    SweepViolation {
        #[command(flatten)]
        grid: DGrid,
        #[command(flatten)]
        solver: Solver,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Entanglement entropy of the optimal and approximate states.
    SweepEntropy {
        #[command(flatten)]
        grid: DGrid,
        #[command(flatten)]
        solver: Solver,
        #[arg(long, value_enum, default_value_t = Base::Natural)]
        log_base: Base,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// M(f_delta) and the closed-form corner bound over a grid of delta.
    SweepContinuum {
        #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = continuum::DEFAULT_DELTAS)]
        delta: Vec<f64>,
        #[arg(long, default_value_t = 0.25)]
        epsilon: f64,
        #[command(flatten)]
        quad: Quadrature,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the invariant suite; exits 1 if any check fails.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Smaller grids, for smoke runs.
        #[arg(long)]
        quick: bool,
        /// Also write the checks as CSV.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Minimum of the Bell functional over deterministic local strategies.
    Lhv {
        #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [1usize, 2, 3, 4, 8])]
        d: Vec<usize>,
    },
    /// CHSH form of the d = 2 functional, for the quantum optimum or given tables.
    Chsh {
        /// CSV with header `alice,bob,k,l,probability`; settings 1|2, outcomes 0|1.
        #[arg(long)]
        tables: Option<PathBuf>,
    },
}

#[derive(Args)]
struct DGrid {
    /// Comma-separated dimensions; defaults to 2, 4, ..., 2^14 and 10^3, 10^4, 10^5.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    d: Option<Vec<usize>>,
}

impl DGrid {
    fn values(&self) -> Vec<usize> {
        match &self.d {
            Some(d) => d.clone(),
            None => {
                let mut d: Vec<usize> = (1..=14).map(|k| 1usize << k).collect();
                d.extend([1_000, 10_000, 100_000]);
                d.sort_unstable();
                d
            }
        }
    }
}

#[derive(Args)]
struct Solver {
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 100_000)]
    max_iter: usize,
}

impl Solver {
    fn config(&self) -> anyhow::Result<PowerIterationConfig> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            bail!(UsageError(format!(
                "--tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            bail!(UsageError("--max-iter must be positive".into()));
        }
        Ok(PowerIterationConfig {
            tol: self.tol,
            max_iter: self.max_iter,
            strategy: MatvecStrategy::Auto,
        })
    }
}

#[derive(Args)]
struct Quadrature {
    #[arg(long, value_enum, default_value_t = QuadScheme::GaussLegendre)]
    scheme: QuadScheme,
    #[arg(long, default_value_t = 96)]
    points: usize,
    /// Target for the refinement error estimate.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

impl Quadrature {
    fn spec(&self) -> anyhow::Result<QuadratureSpec> {
        let spec = QuadratureSpec {
            scheme: match self.scheme {
                QuadScheme::GaussLegendre => Scheme::GaussLegendre,
                QuadScheme::TanhSinh => Scheme::TanhSinh,
            },
            points: self.points,
            target_abs_err: self.tol,
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum QuadScheme {
    GaussLegendre,
    TanhSinh,
}

#[derive(Clone, Copy, ValueEnum)]
enum Base {
    Natural,
    Base2,
}

impl From<Base> for LogBase {
    fn from(b: Base) -> Self {
        match b {
            Base::Natural => LogBase::Natural,
            Base::Base2 => LogBase::Base2,
        }
    }
}

/// Argument problems found after clap parsing.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Verification ran but some check failed.
#[derive(Debug)]
struct VerificationFailed(usize);

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} verification check(s) failed", self.0)
    }
}

impl std::error::Error for VerificationFailed {}

fn exit_code(err: &anyhow::Error) -> u8 {
    use cglmp_core::Error as E;
    if err.is::<VerificationFailed>() {
        return 1;
    }
    match err.downcast_ref::<E>() {
        Some(
            E::BudgetExceeded { .. }
            | E::MaxIterationsExceeded { .. }
            | E::QuadratureNotConverged { .. },
        ) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::SweepViolation {
            grid,
            solver,
            output,
        } => {
            let d = grid.values();
            let points = optimize::violation_sweep(&d, &solver.config()?)?;
            let rows = points.iter().map(|p| ViolationRow {
                d: p.d,
                a_optimal: p.a_optimal,
                a_approximate: p.a_approximate,
                eigenvalue: p.eigenvalue,
                iterations: p.iterations,
                residual: p.residual,
            });
            write_csv(output.as_deref(), rows)
        }
        Command::SweepEntropy {
            grid,
            solver,
            log_base,
            output,
        } => {
            let base = LogBase::from(log_base);
            let points = optimize::entropy_sweep(&grid.values(), &solver.config()?)?;
            let rows = points.iter().map(|p| EntropyRow {
                d: p.d,
                entropy_optimal: base.from_nats(p.entropy_optimal),
                entropy_approx: base.from_nats(p.entropy_approx),
                ratio_optimal: p.ratio_optimal,
                ratio_approx: p.ratio_approx,
            });
            write_csv(output.as_deref(), rows)
        }
        Command::SweepContinuum {
            delta,
            epsilon,
            quad,
            output,
        } => {
            let points = continuum::continuum_sweep(&delta, epsilon, &quad.spec()?)?;
            let rows = points.iter().map(|p| ContinuumRow {
                delta: p.delta,
                m_f: p.m_f,
                i_delta_closed: p.i_delta_closed,
                epsilon: p.epsilon,
            });
            write_csv(output.as_deref(), rows)
        }
        Command::Verify {
            seed,
            quick,
            output,
        } => {
            let config = if quick {
                quick_config(seed)
            } else {
                VerifyConfig {
                    seed,
                    ..Default::default()
                }
            };
            let report = verify::run(&config);
            print!("{report}");
            io::stdout().flush()?;
            if let Some(path) = output {
                let rows = report.checks.iter().map(|c| CheckRow {
                    check: c.name,
                    status: if c.passed { "pass" } else { "fail" },
                    detail: &c.detail,
                });
                write_csv(Some(&path), rows)?;
            }
            if !report.all_passed() {
                bail!(VerificationFailed(report.failures()));
            }
            Ok(())
        }
        Command::Lhv { d } => {
            for d in d {
                let (min, w) = lhv_minimum(d)?;
                println!(
                    "d={d} min={min} witness=(a1={},a2={},b1={},b2={})",
                    w.a1, w.a2, w.b1, w.b2
                );
            }
            Ok(())
        }
        Command::Chsh { tables } => {
            let behavior = match tables {
                Some(path) => read_tables(&path)?,
                None => quantum_behavior(&maximally_entangled(2)?)?,
            };
            let c = chsh_identity_check(&behavior)?;
            println!("S={} lhs={} residual={:e}", c.s, c.lhs, c.residual);
            println!("signalling_defect={:e}", behavior.signalling_defect());
            Ok(())
        }
    }
}

fn quick_config(seed: u64) -> VerifyConfig {
    VerifyConfig {
        seed,
        states_per_dim: 20,
        chsh_samples: 20,
        violation_grid: vec![2, 4, 8, 16, 32, 64, 128, 256, 1024],
        large_d: 4096,
        entropy_grid: vec![100, 1_000, 10_000, 100_000],
        continuum_deltas: vec![0.2, 0.1, 0.05],
        ..Default::default()
    }
}

#[derive(Serialize)]
struct ViolationRow {
    d: usize,
    #[serde(rename = "A_optimal")]
    a_optimal: f64,
    #[serde(rename = "A_approximate")]
    a_approximate: f64,
    eigenvalue: f64,
    iterations: usize,
    residual: f64,
}

#[derive(Serialize)]
struct EntropyRow {
    d: usize,
    entropy_optimal: f64,
    entropy_approx: f64,
    ratio_optimal: f64,
    ratio_approx: f64,
}

#[derive(Serialize)]
struct ContinuumRow {
    delta: f64,
    #[serde(rename = "M_f")]
    m_f: f64,
    #[serde(rename = "I_delta_closed")]
    i_delta_closed: f64,
    epsilon: f64,
}

#[derive(Serialize)]
struct CheckRow<'a> {
    check: &'a str,
    status: &'a str,
    detail: &'a str,
}

fn write_csv<T: Serialize>(
    path: Option<&Path>,
    rows: impl IntoIterator<Item = T>,
) -> anyhow::Result<()> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(
            File::create(p)
                .map_err(|e| UsageError(format!("cannot write {}: {e}", p.display())))?,
        ),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Deserialize)]
struct TableRow {
    alice: u8,
    bob: u8,
    k: usize,
    l: usize,
    probability: f64,
}

fn read_tables(path: &Path) -> anyhow::Result<Behavior> {
    let mut probs = [[[0.0f64; 4]; 2]; 2];
    let mut seen = [[[false; 4]; 2]; 2];
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
    for (line, row) in reader.deserialize::<TableRow>().enumerate() {
        let row = row.map_err(|e| UsageError(format!("row {}: {e}", line + 1)))?;
        let setting = |s: u8| {
            Setting::from_number(s).ok_or_else(|| UsageError(format!("setting {s} is not 1 or 2")))
        };
        let (a, b) = (setting(row.alice)?, setting(row.bob)?);
        if row.k > 1 || row.l > 1 {
            bail!(UsageError(format!(
                "row {}: outcomes must be 0 or 1",
                line + 1
            )));
        }
        let slot = 2 * row.k + row.l;
        if seen[a.index()][b.index()][slot] {
            bail!(UsageError(format!("row {}: duplicate entry", line + 1)));
        }
        seen[a.index()][b.index()][slot] = true;
        probs[a.index()][b.index()][slot] = row.probability;
    }
    if seen.iter().flatten().flatten().any(|&s| !s) {
        bail!(UsageError("tables must list all 16 entries".into()));
    }
    let table = |a: Setting, b: Setting| {
        JointDistribution::new(2, (a, b), probs[a.index()][b.index()].to_vec())
            .context("invalid table")
    };
    use Setting::{One, Two};
    Ok(Behavior::new([
        [table(One, One)?, table(One, Two)?],
        [table(Two, One)?, table(Two, Two)?],
    ])?)
}
