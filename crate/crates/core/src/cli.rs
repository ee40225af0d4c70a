//! The `ovf` command line.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check or a
//! constructive hypothesis fails, 2 on malformed input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::dilation::{dilate, similarity_witness};
use crate::duality::{canonical_dual, is_dual};
use crate::error::{OvfError, Result};
use crate::frame::{embedding, OperatorOnb, WeakOvf};
use crate::group::{
    check_shift_conditions, generate_frame, left_regular, reconstruct_representation, FiniteGroup,
};
use crate::grouplike::{
    check_grouplike_conditions, generate_grouplike_frame, reconstruct_grouplike_representation,
    regular_representation, GroupLikeSystem,
};
use crate::io::{
    op_to_rows, write_text, FrameFile, RepresentationFile, WitnessFile, REPRESENTATION_VERSION,
    TOLERANCE_ENV, WITNESS_VERSION,
};
use crate::numkernel::{random_isometry_with, random_op_with, random_unitary_with, seeded_rng, Op, Tolerance};
use crate::perturb::{tightness_row, verify_perturbation, write_tightness_csv};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ovf", version, about = "Build and check factorable weak operator-valued frames")]
pub struct Cli {
    /// Override residual_eps for this run (takes precedence over OVF_TOLERANCE).
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random frame file of the requested class.
    Gen(GenArgs),
    /// Run checks on a frame file.
    Verify(VerifyArgs),
    /// Write the canonical dual.
    Dual(TransformArgs),
    /// Write the orthonormal dilation of a Parseval frame.
    Dilate(TransformArgs),
    /// Recover the operators relating two similar frames.
    Similar(SimilarArgs),
    /// Recover the (projective) representation generating a frame.
    Reconstruct(TransformArgs),
    /// Sample admissible perturbations and emit a CSV tightness table.
    Perturb(PerturbArgs),
    /// Print classification, bounds and truncated analysis norms.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Parseval,
    Weak,
    Group,
    Grouplike,
    OperatorOnb,
}

#[derive(Debug, clap::Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 1)]
    pub d0: usize,
    /// Number of operators; fixed by the index set for group kinds.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// z<N>, d<N> (dihedral of order 2N) or z2xz2.
    #[arg(long, default_value = "z3")]
    pub group: String,
    /// quarter, wh<N>, or any group name.
    #[arg(long, default_value = "quarter")]
    pub system: String,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    All,
    Factor,
    Parseval,
    Riesz,
    Dual,
    Shift,
    Grouplike,
    Perturb,
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    pub checks: Vec<Check>,
    /// Candidate dual frame for the dual check.
    #[arg(long)]
    pub dual: Option<PathBuf>,
    /// File whose A family is the perturbed sequence B.
    #[arg(long)]
    pub perturbed: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct TransformArgs {
    pub file: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct SimilarArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct PerturbArgs {
    pub file: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.5,0.9,0.99")]
    pub fractions: Vec<f64>,
    /// Seeds per fraction.
    #[arg(long, default_value_t = 25)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub first_seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct ReportArgs {
    pub file: PathBuf,
}

/// Streams and environment handed to a command.
pub struct Context<'a> {
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
    pub env_tolerance: Option<String>,
    pub flag_tolerance: Option<f64>,
}

enum Failure {
    Input(String),
    Theorem(String),
}

impl From<OvfError> for Failure {
    fn from(e: OvfError) -> Self {
        let msg = e.to_string();
        match e {
            OvfError::ShapeMismatch(_)
            | OvfError::IndexOutOfRange { .. }
            | OvfError::InvalidTolerance(_)
            | OvfError::InvalidGroup(_)
            | OvfError::InvalidSystem(_)
            | OvfError::InvalidParameter(_) => Failure::Input(msg),
            _ => Failure::Theorem(msg),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, ctx: &mut Context<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let _ = write!(if e.use_stderr() { &mut *ctx.stderr } else { &mut *ctx.stdout }, "{e}");
            return code;
        }
    };
    if cli.tolerance.is_some() {
        ctx.flag_tolerance = cli.tolerance;
    }
    let outcome = match cli.command {
        Command::Gen(a) => cmd_gen(&a, ctx),
        Command::Verify(a) => cmd_verify(&a, ctx),
        Command::Dual(a) => cmd_dual(&a, ctx),
        Command::Dilate(a) => cmd_dilate(&a, ctx),
        Command::Similar(a) => cmd_similar(&a, ctx),
        Command::Reconstruct(a) => cmd_reconstruct(&a, ctx),
        Command::Perturb(a) => cmd_perturb(&a, ctx),
        Command::Report(a) => cmd_report(&a, ctx),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(ctx.stderr, "error: {msg}");
            EXIT_INPUT
        }
        Err(Failure::Theorem(msg)) => {
            let _ = writeln!(ctx.stderr, "failed: {msg}");
            EXIT_FAIL
        }
    }
}

/// Runs with the process arguments, streams and environment.
pub fn main_with_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let mut ctx = Context {
        stdout: &mut out,
        stderr: &mut err,
        env_tolerance: std::env::var(TOLERANCE_ENV).ok(),
        flag_tolerance: None,
    };
    run(std::env::args_os(), &mut ctx)
}

fn load(path: &Path, ctx: &Context<'_>) -> std::result::Result<(FrameFile, WeakOvf), Failure> {
    let file = FrameFile::read(path)?;
    let tol = file.tolerance(ctx.env_tolerance.as_deref(), ctx.flag_tolerance)?;
    let frame = file.to_frame(tol)?;
    Ok((file, frame))
}

fn emit(text: &str, output: Option<&Path>, ctx: &mut Context<'_>) -> std::result::Result<(), Failure> {
    match output {
        Some(path) => write_text(path, text)?,
        None => writeln!(ctx.stdout, "{text}")?,
    }
    Ok(())
}

/// Parses `z<N>`, `d<N>` and `z2xz2`.
pub fn parse_group(name: &str) -> Result<FiniteGroup> {
    let bad = || OvfError::InvalidParameter(format!("unknown group {name:?}"));
    let lower = name.to_ascii_lowercase();
    if lower == "z2xz2" {
        let z2 = FiniteGroup::cyclic(2);
        return Ok(FiniteGroup::direct_product(&z2, &z2));
    }
    let (prefix, digits) = lower.split_at(1.min(lower.len()));
    let n: usize = digits.parse().map_err(|_| bad())?;
    match (prefix, n) {
        (_, 0) => Err(bad()),
        ("z", n) if n <= 64 => Ok(FiniteGroup::cyclic(n)),
        ("d", n) if n <= 32 => Ok(FiniteGroup::dihedral(n)),
        _ => Err(bad()),
    }
}

/// Parses `quarter`, `wh<N>` or a group name.
pub fn parse_system(name: &str) -> Result<GroupLikeSystem> {
    let lower = name.to_ascii_lowercase();
    if lower == "quarter" {
        return Ok(GroupLikeSystem::quarter_pair());
    }
    if let Some(n) = lower.strip_prefix("wh") {
        return match n.parse::<usize>() {
            Ok(n) if (1..=8).contains(&n) => Ok(GroupLikeSystem::weyl_heisenberg(n)),
            _ => Err(OvfError::InvalidParameter(format!("unknown system {name:?}"))),
        };
    }
    parse_group(name).map(|g| GroupLikeSystem::from_group(&g))
}

fn input(msg: String) -> Failure {
    Failure::Input(msg)
}

/// Generates the frame file for `args` and checks its class.
pub fn generate(args: &GenArgs, tol: Tolerance) -> Result<FrameFile> {
    let (d, d0) = (args.d, args.d0);
    if d == 0 || d0 == 0 {
        return Err(OvfError::InvalidParameter("dimensions must be positive".into()));
    }
    let mut rng = seeded_rng(args.seed);
    let fixed_count = |count: usize| -> Result<()> {
        match args.n {
            Some(n) if n != count => Err(OvfError::InvalidParameter(format!(
                "n = {n} but the index set has {count} elements"
            ))),
            _ => Ok(()),
        }
    };
    let need = |cond: bool, msg: &str| {
        if cond {
            Ok(())
        } else {
            Err(OvfError::InvalidParameter(msg.to_string()))
        }
    };
    match args.kind {
        Kind::Parseval => {
            let n = args.n.unwrap_or_else(|| d.div_ceil(d0) + 1);
            need(n > 0 && n * d0 >= d, "parseval needs n*d0 >= d")?;
            let theta = random_isometry_with(n * d0, d, &mut rng);
            let blocks: Vec<Op> = (0..n).map(|k| theta.block(k * d0, 0, d0, d)).collect();
            let f = WeakOvf::classic(blocks, tol)?;
            verified(f, |r| r.is_parseval, "parseval")
        }
        Kind::Weak => {
            let n = args.n.unwrap_or_else(|| d.div_ceil(d0) + 1);
            need(n > 0 && n * d0 >= d, "a weak frame needs n*d0 >= d")?;
            let a = (0..n).map(|_| random_op_with(d0, d, &mut rng)).collect();
            let psi = (0..n).map(|_| random_op_with(d0, d, &mut rng)).collect();
            verified(WeakOvf::new(a, psi, tol)?, |r| r.is_weak, "weak")
        }
        Kind::OperatorOnb => {
            let n = args.n.unwrap_or(d / d0);
            need(n > 0 && n * d0 == d, "operator-onb needs d = n*d0")?;
            let w = random_unitary_with(d, &mut rng);
            let f = (0..n)
                .map(|k| Ok(&embedding(k, n, d0)?.adjoint() * &w))
                .collect::<Result<Vec<_>>>()?;
            let onb = OperatorOnb::new(f, &tol)?;
            let frame = WeakOvf::classic(onb.f().to_vec(), tol)?;
            verified(frame, |r| r.is_orthonormal, "orthonormal")
        }
        Kind::Group => {
            let g = parse_group(&args.group)?;
            fixed_count(g.order())?;
            need(d % g.order() == 0, "group frames need d to be a multiple of |G|")?;
            let copies = d / g.order();
            need(d0 >= copies, "group frames need d0 >= d/|G|")?;
            let rep = left_regular(&g)
                .amplify(copies)
                .conjugate(&random_unitary_with(d, &mut rng));
            let a = random_op_with(d0, d, &mut rng);
            let psi = random_op_with(d0, d, &mut rng);
            let s_inv = generate_frame(&rep, &a, &psi, tol)?.frame_operator_inverse()?;
            let f = generate_frame(&rep, &(&a * &s_inv), &psi, tol)?;
            if !check_shift_conditions(&f, &g)?.passed {
                return Err(OvfError::TheoremViolated("generated frame fails the shift conditions".into()));
            }
            Ok(verified(f, |r| r.is_parseval, "parseval")?.with_group(&g))
        }
        Kind::Grouplike => {
            let sys = parse_system(&args.system)?;
            fixed_count(sys.size())?;
            need(d % sys.size() == 0, "group-like frames need d to be a multiple of the system size")?;
            let copies = d / sys.size();
            need(d0 >= copies, "group-like frames need d0 >= d/size")?;
            let rep = regular_representation(&sys)?
                .amplify(copies)
                .conjugate(&random_unitary_with(d, &mut rng));
            let a = random_op_with(d0, d, &mut rng);
            let psi = random_op_with(d0, d, &mut rng);
            let s_inv = generate_grouplike_frame(&rep, &a, &psi, tol)?.frame_operator_inverse()?;
            let f = generate_grouplike_frame(&rep, &(&a * &s_inv), &psi, tol)?;
            if !check_grouplike_conditions(&f, &sys)?.passed {
                return Err(OvfError::TheoremViolated("generated frame fails the group-like conditions".into()));
            }
            Ok(verified(f, |r| r.is_parseval, "parseval")?.with_grouplike(&sys))
        }
    }
}

fn verified(
    f: WeakOvf,
    class: impl Fn(&crate::frame::FrameReport) -> bool,
    name: &str,
) -> Result<FrameFile> {
    if !class(&f.classify()) {
        return Err(OvfError::TheoremViolated(format!("generated frame is not {name}")));
    }
    Ok(FrameFile::from_frame(&f))
}

fn cmd_gen(args: &GenArgs, ctx: &mut Context<'_>) -> CmdResult {
    let tol = crate::io::resolve_tolerance(None, ctx.env_tolerance.as_deref(), ctx.flag_tolerance)?;
    let file = generate(args, tol)?;
    emit(&file.to_json(), args.output.as_deref(), ctx)?;
    Ok(EXIT_PASS)
}

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub name: &'static str,
    pub statement: &'static str,
    pub value: f64,
    pub passed: bool,
}

fn line(name: &'static str, statement: &'static str, value: f64, passed: bool) -> CheckLine {
    CheckLine {
        name,
        statement,
        value,
        passed,
    }
}

fn cmd_verify(args: &VerifyArgs, ctx: &mut Context<'_>) -> CmdResult {
    let (file, f) = load(&args.file, ctx)?;
    let all = args.checks.contains(&Check::All);
    let wants = |c: Check| args.checks.contains(&c);
    let mut lines = Vec::new();
    let report = f.classify();
    let loose = f.tol().loose();

    if all || wants(Check::Factor) {
        lines.push(line(
            "factor",
            "factorization: S = θ_Ψ*θ_A",
            report.factorization_residual,
            report.factorization_residual <= loose,
        ));
    }
    if all {
        let (value, passed) = match f.idempotent() {
            Ok(p) => {
                let r = (&p * &p).dist(&p);
                (r, r <= loose)
            }
            Err(_) => (f64::INFINITY, false),
        };
        lines.push(line("idempotent", "P = θ_A S⁻¹ θ_Ψ* satisfies P² = P", value, passed));
        lines.push(line(
            "weak",
            "weak frame: S is invertible (value: lower frame bound)",
            report.lower_bound.unwrap_or(0.0),
            report.is_weak,
        ));
    }
    if wants(Check::Parseval) {
        lines.push(line("parseval", "Parseval: S = I", report.s.dist_identity(), report.is_parseval));
    }
    if wants(Check::Riesz) {
        let value = f.idempotent().map_or(f64::INFINITY, |p| p.dist_identity());
        lines.push(line("riesz", "Riesz: P = I", value, report.is_riesz));
    }
    if wants(Check::Dual) || (all && args.dual.is_some()) {
        let path = args
            .dual
            .as_ref()
            .ok_or_else(|| input("the dual check needs --dual FILE".into()))?;
        let (_, g) = load(path, ctx)?;
        let statement = "duality: Σ Ψ_n* B_n = Σ Φ_n* A_n = I";
        match is_dual(&f, &g) {
            Ok(pair) => lines.push(line("dual", statement, pair.duality_residual, true)),
            Err(OvfError::NotDual { residual }) => lines.push(line("dual", statement, residual, false)),
            Err(e) => return Err(e.into()),
        }
    }
    if wants(Check::Shift) || (all && file.group.is_some()) {
        let g = file
            .group
            .as_ref()
            .ok_or_else(|| input("the shift check needs a group block".into()))?
            .to_group()?;
        let r = check_shift_conditions(&f, &g)?;
        lines.push(line(
            "shift",
            "group shift conditions: A_{gp}A_{gq}* = A_pA_q* and the Ψ families",
            r.max_residual,
            r.passed,
        ));
    }
    if wants(Check::Grouplike) || (all && file.grouplike.is_some()) {
        let sys = file
            .grouplike
            .as_ref()
            .ok_or_else(|| input("the grouplike check needs a grouplike block".into()))?
            .to_system()?;
        let valid = sys.validate();
        if let crate::grouplike::Validation::Violated(v) = &valid {
            writeln!(ctx.stdout, "system violates its axioms: {v}")?;
        }
        let r = check_grouplike_conditions(&f, &sys)?;
        lines.push(line(
            "grouplike",
            "group-like conditions: A_σ(UV) A_σ(UW)* = f(UV) conj f(UW) A_V A_W*",
            r.max_residual,
            r.passed && valid.is_valid(),
        ));
    }
    if wants(Check::Perturb) || (all && args.perturbed.is_some()) {
        let path = args
            .perturbed
            .as_ref()
            .ok_or_else(|| input("the perturb check needs --perturbed FILE".into()))?;
        let (_, p) = load(path, ctx)?;
        let statement = "perturbation: ({B_n}, {Ψ_n}) is weak within the predicted bounds";
        match verify_perturbation(&f, p.a()) {
            Ok(r) => lines.push(line("perturb", statement, r.measured_lower - r.theoretical_lower, true)),
            Err(OvfError::HypothesisFailed) | Err(OvfError::TheoremViolated(_)) => {
                lines.push(line("perturb", statement, f64::NAN, false))
            }
            Err(e) => return Err(e.into()),
        }
    }

    for l in &lines {
        writeln!(
            ctx.stdout,
            "{:<11} {}  {:>12.3e}  {}",
            l.name,
            if l.passed { "PASS" } else { "FAIL" },
            l.value,
            l.statement
        )?;
    }
    Ok(if lines.iter().all(|l| l.passed) { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_dual(args: &TransformArgs, ctx: &mut Context<'_>) -> CmdResult {
    let (file, f) = load(&args.file, ctx)?;
    let mut out = FrameFile::from_frame(&canonical_dual(&f)?);
    out.tolerance = file.tolerance;
    emit(&out.to_json(), args.output.as_deref(), ctx)?;
    Ok(EXIT_PASS)
}

fn cmd_dilate(args: &TransformArgs, ctx: &mut Context<'_>) -> CmdResult {
    let (file, f) = load(&args.file, ctx)?;
    let dil = dilate(&f)?;
    let g = dil.as_frame(&f)?;
    if !g.classify().is_orthonormal {
        return Err(Failure::Theorem("dilation is not orthonormal".into()));
    }
    let mut out = FrameFile::from_frame(&g);
    out.tolerance = file.tolerance;
    emit(&out.to_json(), args.output.as_deref(), ctx)?;
    if args.output.is_some() {
        writeln!(
            ctx.stdout,
            "dilated from dimension {} to {}; restriction residual {:.3e}",
            f.d(),
            dil.extended_dim,
            dil.restriction_residual(&f)
        )?;
    }
    Ok(EXIT_PASS)
}

fn cmd_similar(args: &SimilarArgs, ctx: &mut Context<'_>) -> CmdResult {
    let (_, f) = load(&args.first, ctx)?;
    let (_, g) = load(&args.second, ctx)?;
    let w = similarity_witness(&f, &g)?;
    let out = WitnessFile {
        version: WITNESS_VERSION.into(),
        r_ab: op_to_rows(&w.r_ab),
        r_psi_phi: op_to_rows(&w.r_psi_phi),
        residual: w.residual,
        idempotent_residual: w.idempotent_residual,
    };
    let json = serde_json::to_string_pretty(&out).expect("witness serializes");
    emit(&json, args.output.as_deref(), ctx)?;
    Ok(EXIT_PASS)
}

fn cmd_reconstruct(args: &TransformArgs, ctx: &mut Context<'_>) -> CmdResult {
    let (file, f) = load(&args.file, ctx)?;
    let (kind, pi) = if let Some(block) = &file.group {
        let rep = reconstruct_representation(&f, &block.to_group()?)?;
        ("group", rep.pi().to_vec())
    } else if let Some(block) = &file.grouplike {
        let rep = reconstruct_grouplike_representation(&f, &block.to_system()?)?;
        ("grouplike", rep.pi().to_vec())
    } else {
        return Err(input("reconstruct needs a group or grouplike block".into()));
    };
    let out = RepresentationFile {
        version: REPRESENTATION_VERSION.into(),
        kind: kind.into(),
        dim: f.d(),
        pi: pi.iter().map(op_to_rows).collect(),
    };
    let json = serde_json::to_string_pretty(&out).expect("representation serializes");
    emit(&json, args.output.as_deref(), ctx)?;
    Ok(EXIT_PASS)
}

fn cmd_perturb(args: &PerturbArgs, ctx: &mut Context<'_>) -> CmdResult {
    let (_, f) = load(&args.file, ctx)?;
    let mut rows = Vec::new();
    let mut violations = 0;
    for &fraction in &args.fractions {
        for seed in args.first_seed..args.first_seed + args.seeds {
            match tightness_row(&f, fraction, seed) {
                Ok(row) => rows.push(row),
                Err(e @ OvfError::TheoremViolated(_)) => {
                    violations += 1;
                    writeln!(ctx.stderr, "seed {seed}, fraction {fraction}: {e}")?;
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    let mut csv = Vec::new();
    write_tightness_csv(&rows, &mut csv).map_err(|e| input(e.to_string()))?;
    let text = String::from_utf8(csv).expect("csv output is UTF-8");
    match &args.output {
        Some(path) => write_text(path, &text)?,
        None => write!(ctx.stdout, "{text}")?,
    }
    if violations > 0 {
        return Err(Failure::Theorem(format!("{violations} perturbations broke the predicted bounds")));
    }
    Ok(EXIT_PASS)
}

fn cmd_report(args: &ReportArgs, ctx: &mut Context<'_>) -> CmdResult {
    let (file, f) = load(&args.file, ctx)?;
    let r = f.classify();
    let out = &mut ctx.stdout;
    writeln!(out, "dimensions: d = {}, d0 = {}, N = {}", f.d(), f.d0(), f.len())?;
    writeln!(out, "factorization residual ‖S − θ_Ψ*θ_A‖: {:.3e}", r.factorization_residual)?;
    writeln!(out, "weak: {}", r.is_weak)?;
    if let (Some(a), Some(b)) = (r.lower_bound, r.upper_bound) {
        writeln!(out, "optimal bounds: a = {a:.12e}, b = {b:.12e}")?;
    }
    writeln!(out, "parseval: {}", r.is_parseval)?;
    writeln!(out, "riesz: {}", r.is_riesz)?;
    writeln!(out, "orthonormal: {}", r.is_orthonormal)?;
    if let Some(g) = &file.group {
        writeln!(out, "group of order {}", g.order)?;
    }
    if let Some(s) = &file.grouplike {
        writeln!(out, "group-like system of size {} with phase order {}", s.size, s.phase_order)?;
    }
    writeln!(out, "truncated ‖θ_A‖² by number of terms:")?;
    for (m, v) in f.truncated_analysis_norms_sq().iter().enumerate() {
        writeln!(out, "  {:>4}  {v:.12e}", m + 1)?;
    }
    Ok(EXIT_PASS)
}
