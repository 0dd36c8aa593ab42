//! The `lhv-bell` command line.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage or parse error,
//! 3 output truncated at a cap, 4 size guard.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::builtins::{Builtin, Subject};
use crate::conversion::{verify_rank_formula, ConstraintMatrix, ConversionMatrix};
use crate::enumeration::{enumerate_binary, search_bounded, Catalog, SearchConfig};
use crate::error::{Error, Result};
use crate::expression::BellExpression;
use crate::lhv::EqualityPair;
use crate::manifest::RunManifest;
use crate::proof::replay_appendix_proof;
use crate::quantum::{apply_noise, joint_table, ReducedAngles};
use crate::scenario::Scenario;
use crate::violation::{optimize, report_at, Objective, Tolerance, ViolationReport};

pub const EXIT_OK: u8 = 0;
pub const EXIT_IO: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_TRUNCATED: u8 = 3;
pub const EXIT_SIZE: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "lhv-bell",
    version,
    about = "Bell equalities and inequalities from local hidden variable models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank of the conversion matrix against the closed-form count.
    Rank(RankArgs),
    /// Search for Bell expressions with small integer q-coefficients.
    Enumerate(EnumerateArgs),
    /// Evaluate an expression or equality on the singlet-like state.
    Evaluate(EvaluateArgs),
    /// Search measurement angles for the strongest violation.
    Optimize(OptimizeArgs),
    /// Print the step-by-step local proof for a builtin.
    Prove(ProveArgs),
}

#[derive(Debug, Args)]
pub struct RankArgs {
    /// Outcome counts m,mp,n,np.
    #[arg(long)]
    pub scenario: Scenario,
    /// Write the conversion matrix as CSV.
    #[arg(long, value_name = "PATH")]
    pub emit_matrix: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SearchMode {
    /// Every 0/1 target (needs c = 1, d = 0).
    Binary,
    /// Targets in [-d, c] attaining both ends.
    Bounded,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long, default_value = "2,2,2,2")]
    pub scenario: Scenario,
    #[arg(long = "c")]
    pub c: u32,
    #[arg(long = "d")]
    pub d: u32,
    /// Maximum number of catalog entries.
    #[arg(long, default_value_t = 100_000)]
    pub cap: usize,
    /// Keep one representative per relabeling orbit.
    #[arg(long)]
    pub dedup: bool,
    /// Defaults to binary for c = 1, d = 0 and bounded otherwise.
    #[arg(long, value_enum)]
    pub mode: Option<SearchMode>,
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long, conflicts_with = "expr", required_unless_present = "expr")]
    pub builtin: Option<Builtin>,
    /// Expression JSON file; give it twice for a complementary pair.
    #[arg(long, value_name = "FILE", num_args = 1, action = clap::ArgAction::Append)]
    pub expr: Vec<PathBuf>,
    /// Reduced angles x,y,z.
    #[arg(long, allow_hyphen_values = true, value_name = "X,Y,Z")]
    pub angles: String,
    /// Read the angles as radians instead of degrees.
    #[arg(long)]
    pub radians: bool,
    /// White-noise fraction.
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    #[arg(long)]
    pub json: bool,
    /// Write the joint probability table as CSV.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub builtin: Builtin,
    /// maximize_upper, minimize_lower or maximize_equality_gap.
    #[arg(long)]
    pub objective: Option<Objective>,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ProveArgs {
    #[arg(long)]
    pub builtin: Builtin,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

/// Result of a successful command.
enum Outcome {
    Done,
    Truncated,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Size(_) => EXIT_SIZE,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

/// Parses `std::env::args` and runs the command.
pub fn run() -> ExitCode {
    ExitCode::from(run_from(std::env::args_os()))
}

pub fn run_from<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code() as u8;
        }
    };
    match dispatch(cli.command) {
        Ok(Outcome::Done) => EXIT_OK,
        Ok(Outcome::Truncated) => EXIT_TRUNCATED,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Rank(a) => cmd_rank(a),
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Optimize(a) => cmd_optimize(a),
        Command::Prove(a) => cmd_prove(a),
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Debug, Serialize)]
struct RankOutput {
    scenario: Scenario,
    n_q: usize,
    n_p: usize,
    rank: usize,
    predicted_n_i: usize,
    agrees: bool,
    constraint_rank: usize,
    constraint_linear_rank: usize,
    n_c: usize,
}

fn cmd_rank(a: RankArgs) -> Result<Outcome> {
    let start = Instant::now();
    let report = verify_rank_formula(a.scenario)?;
    let constraints = ConstraintMatrix::build(a.scenario);
    let out = RankOutput {
        scenario: a.scenario,
        n_q: a.scenario.n_q(),
        n_p: a.scenario.n_p(),
        rank: report.computed_rank,
        predicted_n_i: report.predicted_n_i,
        agrees: report.agrees,
        constraint_rank: constraints.rank(),
        constraint_linear_rank: constraints.linear_rank(),
        n_c: a.scenario.n_c(),
    };
    if let Some(path) = &a.emit_matrix {
        write_file(path, &ConversionMatrix::build(a.scenario).to_csv())?;
        RunManifest::new("rank", json!({ "scenario": a.scenario.to_string() }))
            .output(path)
            .finish(start.elapsed())
            .write_beside(path)?;
    }
    if a.json {
        print!("{}", to_json(&out)?);
    } else {
        println!("scenario {}", out.scenario);
        println!("conversion matrix: {} x {}", out.n_p, out.n_q);
        println!("rank = {}", out.rank);
        println!("predicted N_I = {}", out.predicted_n_i);
        println!("agree: {}", if out.agrees { "yes" } else { "no" });
        println!(
            "constraint rank = {} (N_C = {}, linear rank {})",
            out.constraint_rank, out.n_c, out.constraint_linear_rank
        );
    }
    Ok(Outcome::Done)
}

fn cmd_enumerate(a: EnumerateArgs) -> Result<Outcome> {
    let start = Instant::now();
    let config = SearchConfig::new(a.scenario, a.c, a.d, a.cap, a.dedup)?;
    let mode = a.mode.unwrap_or(if (a.c, a.d) == (1, 0) {
        SearchMode::Binary
    } else {
        SearchMode::Bounded
    });
    let catalog: Catalog = match mode {
        SearchMode::Binary => enumerate_binary(&config)?,
        SearchMode::Bounded => search_bounded(&config)?,
    };
    write_file(&a.out, &to_json(&catalog)?)?;
    let mode_name = match mode {
        SearchMode::Binary => "binary",
        SearchMode::Bounded => "bounded",
    };
    RunManifest::new(
        "enumerate",
        json!({
            "scenario": a.scenario.to_string(),
            "c": a.c,
            "d": a.d,
            "cap": a.cap,
            "dedup": a.dedup,
            "mode": mode_name,
        }),
    )
    .output(&a.out)
    .finish(start.elapsed())
    .write_beside(&a.out)?;

    println!(
        "{} entries, {} complementary pairs{}",
        catalog.entries.len(),
        catalog.pairs.len(),
        if catalog.truncated {
            ", truncated at cap"
        } else {
            ""
        }
    );
    println!("wrote {}", a.out.display());
    Ok(if catalog.truncated {
        Outcome::Truncated
    } else {
        Outcome::Done
    })
}

/// Parses `x,y,z`.
pub fn parse_angles(text: &str, radians: bool) -> Result<ReducedAngles> {
    let parts = text
        .split(',')
        .map(|p| {
            p.trim()
                .trim_end_matches("deg")
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("angle {p:?}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let &[x, y, z] = parts.as_slice() else {
        return Err(Error::Parse(format!(
            "expected three angles x,y,z, got {text:?}"
        )));
    };
    if !(x.is_finite() && y.is_finite() && z.is_finite()) {
        return Err(Error::Domain("angles must be finite".into()));
    }
    Ok(if radians {
        ReducedAngles::new(x, y, z)
    } else {
        ReducedAngles::from_degrees(x, y, z)
    })
}

fn read_expression(path: &Path) -> Result<BellExpression> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn evaluate_subject(a: &EvaluateArgs) -> Result<(String, Subject)> {
    if let Some(b) = a.builtin {
        return Ok((b.id().to_string(), b.subject()));
    }
    let exprs = a
        .expr
        .iter()
        .map(|p| read_expression(p))
        .collect::<Result<Vec<_>>>()?;
    let label = a
        .expr
        .iter()
        .map(|p| p.display().to_string())
        .collect::<Vec<_>>()
        .join(" + ");
    match <[BellExpression; 2]>::try_from(exprs) {
        Ok([first, second]) => Ok((label, Subject::Pair(EqualityPair::new(first, second)?))),
        Err(mut exprs) if exprs.len() == 1 => Ok((label, Subject::Expression(exprs.remove(0)))),
        Err(_) => Err(Error::Parse(
            "--expr takes one file, or two for a pair".into(),
        )),
    }
}

fn fmt_tolerance(t: &Tolerance) -> String {
    match t {
        Tolerance::Tolerates { gamma } => format!("{gamma:.6}"),
        Tolerance::NoViolation => "none (no violation)".into(),
        Tolerance::Degenerate => "undefined (value equals noise value)".into(),
    }
}

/// Human-readable summary of a report.
pub fn render_report(label: &str, r: &ViolationReport) -> String {
    let mut s = String::new();
    let a = &r.angles;
    let _ = writeln!(s, "subject: {label}");
    if let Some(o) = r.objective {
        let _ = writeln!(s, "objective: {o}");
    }
    let _ = writeln!(
        s,
        "angles (deg): x = {}, y = {}, z = {}, w = {}",
        a.x_deg, a.y_deg, a.z_deg, a.w_deg
    );
    let _ = writeln!(s, "gamma: {}", r.gamma);
    for v in &r.values {
        let _ = writeln!(s, "{} = {:.6}", v.name, v.value);
    }
    if let Some(eq) = &r.equality {
        let names: Vec<&str> = r.values.iter().map(|v| v.name.as_str()).collect();
        let _ = writeln!(
            s,
            "|{}| = {:.6}, |{}| = {:.6}, sum = {:.6} (local value 1)",
            names[0], eq.lhs_first, names[1], eq.lhs_second, eq.sum
        );
        let _ = writeln!(
            s,
            "local prediction for the larger term: {:.6}",
            r.local_bound.unwrap_or(f64::NAN)
        );
    } else if let (Some(lo), Some(hi)) = (&r.local_lower, &r.local_upper) {
        let _ = writeln!(s, "local range: [{lo}, {hi}]");
    }
    let _ = writeln!(s, "violated: {}", if r.violated { "yes" } else { "no" });
    if let Some(f) = r.violation_factor {
        let _ = writeln!(s, "violation factor: {f:.6}");
    }
    let _ = writeln!(s, "noise value: {}", r.noise_value_exact);
    let _ = writeln!(
        s,
        "noise tolerance (fixed bound): {}",
        fmt_tolerance(&r.tolerance_paper)
    );
    let _ = writeln!(
        s,
        "noise tolerance (self-consistent): {}",
        fmt_tolerance(&r.tolerance_self_consistent)
    );
    if let Some(info) = &r.search {
        let _ = writeln!(
            s,
            "search: {} restarts, seed {}, {} local searches, {} evaluations",
            info.restarts, info.seed, info.local_searches, info.evaluations
        );
    }
    s
}

fn cmd_evaluate(a: EvaluateArgs) -> Result<Outcome> {
    let start = Instant::now();
    let angles = parse_angles(&a.angles, a.radians)?;
    let (label, subject) = evaluate_subject(&a)?;
    let report = report_at(&subject, angles, a.gamma, None)?;
    if let Some(path) = &a.csv {
        let table = apply_noise(&joint_table(angles.to_full()), a.gamma)?;
        write_file(path, &table.to_csv())?;
        let mut manifest = RunManifest::new(
            "evaluate",
            json!({
                "subject": label,
                "angles": a.angles,
                "radians": a.radians,
                "gamma": a.gamma,
            }),
        );
        for p in &a.expr {
            manifest = manifest.input(p);
        }
        manifest
            .output(path)
            .finish(start.elapsed())
            .write_beside(path)?;
    }
    if a.json {
        print!("{}", to_json(&report)?);
    } else {
        print!("{}", render_report(&label, &report));
    }
    Ok(Outcome::Done)
}

fn default_objective(b: Builtin) -> Objective {
    match b {
        Builtin::Equality => Objective::MaximizeEqualityGap,
        Builtin::Ch => Objective::MaximizeUpper,
        Builtin::Eq33 | Builtin::Eq34 => Objective::MinimizeLower,
    }
}

fn cmd_optimize(a: OptimizeArgs) -> Result<Outcome> {
    let start = Instant::now();
    let objective = a.objective.unwrap_or_else(|| default_objective(a.builtin));
    let report = optimize(&a.builtin.subject(), objective, a.restarts, a.seed)?;
    let text = to_json(&report)?;
    if let Some(path) = &a.out {
        write_file(path, &text)?;
        RunManifest::new(
            "optimize",
            json!({
                "builtin": a.builtin.id(),
                "objective": objective.to_string(),
                "restarts": a.restarts,
            }),
        )
        .with_seed(a.seed)
        .output(path)
        .finish(start.elapsed())
        .write_beside(path)?;
    }
    if a.json {
        print!("{text}");
    } else {
        print!("{}", render_report(a.builtin.id(), &report));
    }
    Ok(Outcome::Done)
}

fn cmd_prove(a: ProveArgs) -> Result<Outcome> {
    let start = Instant::now();
    let transcript = replay_appendix_proof(&a.builtin.subject())?;
    match &a.out {
        Some(path) => {
            write_file(path, &transcript.text())?;
            RunManifest::new("prove", json!({ "builtin": a.builtin.id() }))
                .output(path)
                .finish(start.elapsed())
                .write_beside(path)?;
            println!("{}", transcript.conclusion);
            println!("wrote {}", path.display());
        }
        None => print!("{transcript}"),
    }
    Ok(Outcome::Done)
}
