//! Argument parsing and the five commands.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kfp_core::assumption::{check_assumption, compact_resolvent_indicator, AssumptionReport, SearchOptions};
use kfp_core::estimates::{verify_bnv_lower, verify_bnv_remainder, verify_main_theorem, MainTheoremOptions};
use kfp_core::operator::{
    assemble_kj, assemble_kv, assemble_op, assemble_xv, spectrum, Boundary, Discretization, OperatorMatrix,
    DENSE_LIMIT,
};
use kfp_core::partition::{build_fine_partition, nu_bounds, select_nu, semiclassical, Shell};
use kfp_core::potential::potential_constants;
use kfp_core::{HessianNorm, HomogeneousPotential, Polynomial};
use serde::Serialize;

use crate::export::{num, write_csv, write_matrix_market};
use crate::potential_file::read_potential;
use crate::report::{
    AssumptionJson, CheckJson, ConstantsJson, HomogeneousConstantsJson, IndicatorJson, NotFoundJson, VerifyJson,
};
use crate::CliError;

/// Largest operator whose full complex spectrum `spectrum` will compute.
const SPECTRUM_LIMIT: usize = 4000;

#[derive(Debug, Parser)]
#[command(name = "kfp", version, about = "Numerical checks for Kramers-Fokker-Planck operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find the critical points of V on the unit sphere and decide the
    /// non-degeneracy hypothesis.
    Check(CheckArgs),
    /// Measure the constant of a subelliptic estimate on a discretization.
    Verify(VerifyArgs),
    /// Eigenvalues of an assembled operator as CSV.
    Spectrum(SpectrumArgs),
    /// Profile of one fine-partition cutoff as CSV.
    PartitionDemo(PartitionArgs),
    /// The constants attached to a potential.
    Constants(ConstantsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Bc {
    Periodic,
    Dirichlet,
}

impl From<Bc> for Boundary {
    fn from(b: Bc) -> Self {
        match b {
            Bc::Periodic => Boundary::Periodic,
            Bc::Dirichlet => Boundary::Dirichlet,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    Opnorm,
    Det,
}

impl From<Convention> for HessianNorm {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Opnorm => HessianNorm::Operator,
            Convention::Det => HessianNorm::Determinant,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Hessian norm convention.
    #[arg(long, value_enum, default_value_t = Convention::Opnorm)]
    pub convention: Convention,
    /// Seed for randomized starting vectors.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker cap (the kernels are single-threaded; the value is validated
    /// and recorded only).
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Grid points per position axis.
    #[arg(long = "Nq", default_value_t = 32)]
    pub nq: usize,
    /// Hermite functions per velocity axis.
    #[arg(long = "Np", default_value_t = 16)]
    pub np: usize,
    /// Half-width of the position box.
    #[arg(long = "L", default_value_t = 4.0)]
    pub half_width: f64,
    #[arg(long, value_enum, default_value_t = Bc::Periodic)]
    pub bc: Bc,
}

impl GridArgs {
    fn build(&self, dim: usize) -> Result<Discretization, CliError> {
        Ok(Discretization::new(dim, self.nq, self.np, self.half_width, self.bc.into())?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    pub potential: PathBuf,
    /// Angular spacing of the sphere search.
    #[arg(long, default_value_t = 1e-3)]
    pub resolution: f64,
    /// Gradient tolerance of the Newton refinement.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Also run the growth indicator for this δ in (0,1).
    #[arg(long)]
    pub delta: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    /// `‖Ku‖² + C‖u‖² ≥ C^{-1} Σ‖Λ_i u‖²` with the log-corrected weights.
    Main,
    /// Lower bound for potentials of degree at most two.
    Lower,
    /// Remainder estimate for potentials of degree at most two.
    Remainder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Drop {
    None,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    pub potential: PathBuf,
    #[arg(long, value_enum, default_value_t = Which::Main)]
    pub inequality: Which,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Upper end of the search interval for C.
    #[arg(long = "Cmax", default_value_t = 1e6)]
    pub c_max: f64,
    /// Relative tolerance of the search for C.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    /// Remove the weights from the right-hand side.
    #[arg(long = "drop-weights", value_enum, default_value_t = Drop::None)]
    pub drop_weights: Drop,
    /// Angular spacing of the hypothesis check run before the estimate.
    #[arg(long, default_value_t = 1e-3)]
    pub resolution: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OpKind {
    #[value(name = "Op")]
    Op,
    #[value(name = "XV")]
    Xv,
    #[value(name = "KV")]
    Kv,
    #[value(name = "Kj")]
    Kj,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    /// Potential file; required for every operator except `Op`.
    pub potential: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OpKind::Kv)]
    pub op: OpKind,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Dimension when no potential is given.
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// Dyadic level of the rescaled operator `Kj`.
    #[arg(long)]
    pub j: Option<i32>,
    /// Also export the assembled matrix in MatrixMarket format.
    #[arg(long)]
    pub mtx: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct PartitionArgs {
    /// Semiclassical parameter h in (0,1).
    #[arg(long, conflicts_with = "j")]
    pub h: Option<f64>,
    /// Dyadic level; sets h = 2^{-2(r-1)j}.
    #[arg(long)]
    pub j: Option<i32>,
    /// Degree of the potential.
    #[arg(long)]
    pub r: f64,
    /// Patch exponent; defaults to the admissible value for r.
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Number of samples along the profile.
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct ConstantsArgs {
    pub potential: PathBuf,
    /// δ of the growth exponent (homogeneous potentials of degree above two).
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub resolution: f64,
    #[command(flatten)]
    pub common: Common,
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn positive(name: &str, x: f64) -> Result<(), CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(input(format!("--{name} must be positive, got {x}")))
    }
}

fn validate_common(c: &Common) -> Result<(), CliError> {
    if c.threads == 0 {
        return Err(input("--threads must be at least 1"));
    }
    log::debug!("threads = {} (kernels run single-threaded)", c.threads);
    Ok(())
}

fn validate_grid(g: &GridArgs) -> Result<(), CliError> {
    if g.nq == 0 || g.np == 0 {
        return Err(input("--Nq and --Np must be positive"));
    }
    positive("L", g.half_width)
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| input(format!("cannot create {}: {e}", path.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit_json<T: Serialize>(value: &T, out: &Option<PathBuf>) -> Result<(), CliError> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| match e.io_error_kind() {
        Some(kind) => CliError::from(io::Error::from(kind)),
        None => input(e.to_string()),
    })?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn homogeneous(p: &Polynomial, path: &Path) -> Result<HomogeneousPotential, CliError> {
    HomogeneousPotential::from_polynomial(p.clone())
        .map_err(|e| input(format!("{}: the hypothesis check needs a homogeneous potential ({e})", path.display())))
}

fn search(resolution: f64, tol: f64) -> Result<SearchOptions, CliError> {
    positive("resolution", resolution)?;
    positive("tol", tol)?;
    Ok(SearchOptions {
        resolution,
        refine_tol: tol,
    })
}

fn assumption(v: &HomogeneousPotential, opts: SearchOptions, convention: HessianNorm) -> Result<AssumptionReport, CliError> {
    let rep = check_assumption(v, opts, convention)?;
    log::info!(
        "{} critical point(s); hypothesis {}",
        rep.critical_set.points.len(),
        if rep.holds { "holds" } else { "fails" }
    );
    Ok(rep)
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Check(a) => cmd_check(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::PartitionDemo(a) => cmd_partition_demo(a),
        Command::Constants(a) => cmd_constants(a),
    }
}

fn cmd_check(a: CheckArgs) -> Result<(), CliError> {
    validate_common(&a.common)?;
    let opts = search(a.resolution, a.tol)?;
    if let Some(d) = a.delta {
        if !(d > 0.0 && d < 1.0) {
            return Err(input(format!("--delta must lie in (0,1), got {d}")));
        }
    }
    let start = Instant::now();
    let p = read_potential(&a.potential)?;
    let v = homogeneous(&p, &a.potential)?;
    let rep = assumption(&v, opts, a.common.convention.into())?;
    let indicator = match a.delta {
        Some(d) if rep.holds => Some(IndicatorJson::new(d, &compact_resolvent_indicator(&v, &rep, d, a.resolution.max(1e-2))?)),
        _ => None,
    };
    let json = CheckJson {
        command: "check",
        potential: (&p).into(),
        assumption: (&rep).into(),
        indicator,
        runtime_ms: start.elapsed().as_millis(),
    };
    emit_json(&json, &a.common.out)?;
    if rep.holds {
        Ok(())
    } else {
        Err(CliError::Hypothesis(format!(
            "the critical-point hypothesis fails at {} point(s)",
            rep.failures.len()
        )))
    }
}

fn cmd_verify(a: VerifyArgs) -> Result<(), CliError> {
    validate_common(&a.common)?;
    validate_grid(&a.grid)?;
    positive("Cmax", a.c_max)?;
    positive("tol", a.tol)?;
    if a.c_max < 1.0 {
        return Err(input("--Cmax must be at least 1"));
    }
    let start = Instant::now();
    let p = read_potential(&a.potential)?;
    let disc = a.grid.build(p.dim())?;
    let convention: HessianNorm = a.common.convention.into();

    let gate = match p.homogeneous_degree() {
        Some(r) if r > 2 && a.inequality == Which::Main => {
            let v = homogeneous(&p, &a.potential)?;
            let rep = assumption(&v, search(a.resolution, 1e-10)?, convention)?;
            if !rep.holds {
                return Err(kfp_core::Error::AssumptionFailed { points: rep.failures }.into());
            }
            Some(AssumptionJson::from(&rep))
        }
        _ => None,
    };
    let n = disc.total_dim();
    if a.inequality != Which::Lower && n > DENSE_LIMIT {
        return Err(input(format!(
            "this estimate factors dense {n} × {n} matrices; reduce --Nq/--Np to at most {DENSE_LIMIT} unknowns"
        )));
    }

    let report = match a.inequality {
        Which::Main => {
            let opts = MainTheoremOptions {
                c_max: a.c_max,
                rel_tol: a.tol,
                drop_weights: a.drop_weights == Drop::All,
                convention,
                seed: a.common.seed,
                ..MainTheoremOptions::default()
            };
            match verify_main_theorem(&p, &disc, opts) {
                Err(kfp_core::Error::NotFound { c_max, min_eigenvalue }) => {
                    let json = NotFoundJson {
                        command: "verify",
                        status: "not_found",
                        c_max,
                        min_eigenvalue,
                    };
                    emit_json(&json, &a.common.out)?;
                    return Err(kfp_core::Error::NotFound { c_max, min_eigenvalue }.into());
                }
                other => other?,
            }
        }
        Which::Lower => verify_bnv_lower(&p, &disc)?,
        Which::Remainder => verify_bnv_remainder(&p, &disc)?,
    };
    let mut json = VerifyJson::new(&p, &report, gate);
    json.runtime_ms = start.elapsed().as_millis();
    emit_json(&json, &a.common.out)
}

fn cmd_spectrum(a: SpectrumArgs) -> Result<(), CliError> {
    validate_common(&a.common)?;
    validate_grid(&a.grid)?;
    let p = a.potential.as_deref().map(read_potential).transpose()?;
    let dim = p.as_ref().map_or(a.dim, |p| p.dim());
    let disc = a.grid.build(dim)?;
    let n = disc.total_dim();
    if n > SPECTRUM_LIMIT {
        return Err(input(format!("{n} unknowns exceed the dense spectrum limit {SPECTRUM_LIMIT}")));
    }
    let need = |p: &Option<Polynomial>| p.clone().ok_or_else(|| input("this operator needs a potential file"));
    let op: OperatorMatrix = match a.op {
        OpKind::Op => assemble_op(&disc),
        OpKind::Xv => assemble_xv(&need(&p)?, &disc)?,
        OpKind::Kv => assemble_kv(&need(&p)?, &disc)?,
        OpKind::Kj => {
            let p = need(&p)?;
            let j = a.j.ok_or_else(|| input("--op Kj needs --j"))?;
            let r = p
                .homogeneous_degree()
                .ok_or_else(|| input("--op Kj needs a homogeneous potential"))?;
            assemble_kj(&p, r, j, &disc)?
        }
    };
    if let Some(path) = &a.mtx {
        let mut w = BufWriter::new(File::create(path).map_err(|e| input(format!("cannot create {}: {e}", path.display())))?);
        let comment = format!(
            "operator {:?}, dim {}, Nq {}, Np {}, L {}, bc {}",
            a.op,
            disc.dim(),
            disc.nq(),
            disc.np(),
            disc.half_width(),
            disc.boundary().name()
        );
        write_matrix_market(&op.matrix, &comment, &mut w)?;
        w.flush()?;
    }
    let rows: Vec<Vec<String>> = spectrum(&op.matrix)
        .into_iter()
        .enumerate()
        .map(|(k, (re, im))| vec![k.to_string(), num(re), num(im + 0.0)])
        .collect();
    let mut w = sink(&a.common.out)?;
    write_csv(&["index", "re", "im"], &rows, &mut w)?;
    w.flush()?;
    Ok(())
}

fn cmd_partition_demo(a: PartitionArgs) -> Result<(), CliError> {
    validate_common(&a.common)?;
    if !(a.r > 2.0) {
        return Err(input(format!("--r must exceed 2, got {}", a.r)));
    }
    if a.samples < 2 {
        return Err(input("--samples must be at least 2"));
    }
    let h = match (a.h, a.j) {
        (Some(h), None) => h,
        (None, Some(j)) if j >= 1 => semiclassical(j, a.r).h,
        (None, Some(j)) => return Err(input(format!("--j must be at least 1, got {j}"))),
        _ => return Err(input("give either --h or --j")),
    };
    let nu = match a.nu {
        Some(nu) => nu,
        None => select_nu(a.r)?,
    };
    let (lo, hi) = nu_bounds(a.r);
    if !(lo < nu && nu < hi) {
        log::warn!("ν = {nu} lies outside the admissible interval ({lo}, {hi})");
    }
    let part = build_fine_partition(h, nu, a.dim, Shell::STANDARD)?;

    // the patch whose center is closest to the middle of the shell on the first axis
    let target: Vec<f64> = (0..a.dim).map(|k| if k == 0 { 1.5 } else { 0.0 }).collect();
    let k = (0..part.len())
        .min_by(|&x, &y| {
            let d = |i| kfp_core::sphere::distance(&part.center(i), &target);
            d(x).total_cmp(&d(y))
        })
        .ok_or_else(|| input("the partition has no patches"))?;
    let center = part.center(k);
    let rho = part.radius();
    let rows: Vec<Vec<String>> = (0..a.samples)
        .map(|i| {
            let x = center[0] + rho * (-1.2 + 2.4 * i as f64 / (a.samples - 1) as f64);
            let mut q = center.clone();
            q[0] = x;
            let sum_sq: f64 = part.active(&q).iter().map(|(_, t)| t * t).sum();
            vec![num(x), num(part.theta(k, &q)), num(sum_sq)]
        })
        .collect();
    let summary = format!(
        "patch radius {rho} (h = {h}, nu = {nu}, dim = {}), {} patches, gradient constant {}, profile of patch {k} centered at {center:?}",
        a.dim,
        part.len(),
        part.gradient_constant()
    );
    let mut w = sink(&a.common.out)?;
    write_csv(&["x", "theta", "sum_sq"], &rows, &mut w)?;
    w.flush()?;
    if a.common.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

fn cmd_constants(a: ConstantsArgs) -> Result<(), CliError> {
    validate_common(&a.common)?;
    if !(0.0..1.0).contains(&a.delta) {
        return Err(input(format!("--delta must lie in [0,1), got {}", a.delta)));
    }
    let opts = search(a.resolution, 1e-10)?;
    let start = Instant::now();
    let p = read_potential(&a.potential)?;
    let convention: HessianNorm = a.common.convention.into();
    let mut json = ConstantsJson {
        command: "constants",
        potential: (&p).into(),
        quadratic: None,
        homogeneous: None,
        runtime_ms: 0,
    };
    if p.degree() <= 2 {
        json.quadratic = Some((&potential_constants(&p)?).into());
    } else {
        let v = homogeneous(&p, &a.potential)?;
        let rep = assumption(&v, opts, convention)?;
        let growth = v.growth_exponent_with_resolution(a.delta, convention, a.resolution.max(1e-2))?;
        let r = v.degree() as f64;
        json.homogeneous = Some(HomogeneousConstantsJson {
            nu: select_nu(r)?,
            nu_bounds: nu_bounds(r),
            delta: a.delta,
            growth_exponent: growth.exponent,
            m_delta: growth.m_delta,
            assumption: (&rep).into(),
        });
    }
    json.runtime_ms = start.elapsed().as_millis();
    emit_json(&json, &a.common.out)
}
