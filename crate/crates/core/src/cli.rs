//! The `eef` command line.
//!
//! Exit codes: 0 decided (or property holds for `verify`), 1 `verify`
//! found a violation, 2 input error, 3 a resource limit was hit.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::engine::{solve_eef, verify, EngineConfig, DEFAULT_ITERATION_LIMIT};
use crate::error::{Error, InputError};
use crate::generate::{generate, GenConfig};
use crate::instance::{
    parse_instance, serialize_instance, Allocation, Fairness, Instance, UtilityProfile,
};
use crate::oracle::{brute_eef, DEFAULT_ENUM_CAP};
use crate::pilp::export_system;
use crate::solver::{SolverLimits, DEFAULT_NODE_LIMIT, DEFAULT_PIVOT_LIMIT};
use crate::verdict::Verdict;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "eef",
    version,
    about = "Envy-free Pareto-efficient allocations, decided exactly"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether a fair Pareto-efficient allocation exists.
    Solve(SolveArgs),
    /// Check fairness and efficiency of a given allocation.
    Verify(VerifyArgs),
    /// Decide by exhaustive enumeration (tiny instances only).
    Brute(BruteArgs),
    /// Print a seeded random instance.
    Gen(GenArgs),
    /// Write the A and Q systems of an EF instance.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
struct SolverFlags {
    #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
    node_limit: u64,
    #[arg(long, default_value_t = DEFAULT_PIVOT_LIMIT)]
    pivot_limit: u64,
}

impl SolverFlags {
    fn limits(&self) -> SolverLimits {
        SolverLimits {
            node_limit: self.node_limit,
            pivot_limit: self.pivot_limit,
        }
    }
}

#[derive(Debug, Args)]
struct SolveArgs {
    instance: PathBuf,
    /// Overrides the fairness field of the document.
    #[arg(long)]
    fairness: Option<Fairness>,
    #[arg(long, default_value_t = DEFAULT_ITERATION_LIMIT)]
    iterations: u64,
    #[command(flatten)]
    solver: SolverFlags,
    #[arg(long)]
    out: Option<PathBuf>,
    /// No diagnostics on stderr.
    #[arg(long)]
    quiet: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    instance: PathBuf,
    /// Allocation document: a matrix, or an object with an "allocation" key
    /// (so verdicts can be replayed directly).
    allocation: PathBuf,
    #[arg(long)]
    fairness: Option<Fairness>,
    #[command(flatten)]
    solver: SolverFlags,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    quiet: bool,
}

#[derive(Debug, Args)]
struct BruteArgs {
    instance: PathBuf,
    #[arg(long)]
    fairness: Option<Fairness>,
    #[arg(long, env = "EEF_ENUM_CAP", default_value_t = DEFAULT_ENUM_CAP)]
    enum_cap: u64,
    /// Worker threads for enumeration.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    quiet: bool,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, short = 'n')]
    agents: usize,
    #[arg(long, short = 'm')]
    items: usize,
    /// Inclusive multiplicity range, LO..HI.
    #[arg(long, default_value = "1..3", value_parser = parse_mult_range)]
    mult: (u64, u64),
    /// Inclusive utility range, LO..HI.
    #[arg(long, default_value = "0..3", value_parser = parse_util_range, allow_hyphen_values = true)]
    util: (i64, i64),
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "EF")]
    fairness: Fairness,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExportArgs {
    instance: PathBuf,
    /// Directory receiving a.model, q.model and manifest.json.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long)]
    fairness: Option<Fairness>,
}

fn split_range(s: &str) -> Result<(&str, &str), String> {
    s.split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got {s:?}"))
}

fn parse_mult_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = split_range(s)?;
    let lo = lo.trim().parse::<u64>().map_err(|e| e.to_string())?;
    let hi = hi.trim().parse::<u64>().map_err(|e| e.to_string())?;
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok((lo, hi))
}

fn parse_util_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = split_range(s)?;
    let lo = lo.trim().parse::<i64>().map_err(|e| e.to_string())?;
    let hi = hi.trim().parse::<i64>().map_err(|e| e.to_string())?;
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok((lo, hi))
}

/// A failed command: exit code plus a message for stderr.
struct Failure {
    code: i32,
    message: String,
    /// Document still printed on stdout (partial traces).
    document: Option<Value>,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
            document: None,
        }
    }
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match e {
            Error::Input(e) => e.into(),
            Error::Limit {
                kind,
                limit,
                iterations,
                blocked_profiles,
            } => Failure {
                code: EXIT_LIMIT,
                message,
                document: Some(json!({
                    "status": "limit",
                    "limit_kind": kind.to_string(),
                    "limit": limit,
                    "iterations": iterations,
                    "blocked_profiles": blocked_profiles.iter().map(UtilityProfile::to_value).collect::<Vec<_>>(),
                })),
            },
            Error::EnumerationCap { count, cap } => Failure {
                code: EXIT_LIMIT,
                message,
                document: Some(json!({
                    "status": "limit",
                    "limit_kind": "enumeration",
                    "limit": cap,
                    "count": count.to_string(),
                })),
            },
            Error::Unbounded => Failure {
                code: EXIT_LIMIT,
                message,
                document: None,
            },
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn load_instance(path: &Path, fairness: Option<Fairness>) -> Result<Instance, Failure> {
    let inst = parse_instance(&read(path)?)?;
    Ok(match fairness {
        Some(f) => inst.with_fairness(f)?,
        None => inst,
    })
}

fn document(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn emit(text: &str, out_path: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    match out_path {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::input(format!("cannot write output: {e}"))),
    }
}

fn summary(v: &Verdict) -> String {
    format!(
        "{} (welfare {}, {} iterations, {} solver calls)",
        v.answer().as_str(),
        v.profile.welfare(),
        v.iterations,
        v.stats.ilp_calls
    )
}

fn cmd_solve(args: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let inst = load_instance(&args.instance, args.fairness)?;
    let config = EngineConfig {
        iteration_limit: args.iterations,
        solver: args.solver.limits(),
        ..EngineConfig::default()
    };
    let v = solve_eef(&inst, &config)?;
    emit(
        &crate::verdict::serialize_verdict(&v),
        args.out.as_deref(),
        out,
    )?;
    if !args.quiet {
        let _ = writeln!(err, "{}", summary(&v));
    }
    Ok(EXIT_OK)
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let inst = load_instance(&args.instance, args.fairness)?;
    let alloc = Allocation::parse(&read(&args.allocation)?)?;
    let report = verify(&inst, &alloc, &args.solver.limits())?;
    emit(&document(&report.to_value()), args.out.as_deref(), out)?;
    if !args.quiet {
        let _ = writeln!(
            err,
            "{}: {}, efficiency: {}",
            report.fairness.as_str(),
            if report.fair { "pass" } else { "fail" },
            if report.efficient { "pass" } else { "fail" },
        );
    }
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

fn cmd_brute(args: &BruteArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let inst = load_instance(&args.instance, args.fairness)?;
    let result = brute_eef(&inst, args.enum_cap, args.jobs)?;
    let mut doc = result.verdict.to_value();
    doc["census"] = result.census.to_value();
    emit(&document(&doc), args.out.as_deref(), out)?;
    if !args.quiet {
        let c = result.census;
        let _ = writeln!(
            err,
            "{}; {} allocations, {} fair, {} Pareto-efficient, {} both",
            result.verdict.answer().as_str(),
            c.allocations,
            c.fair,
            c.pareto,
            c.intersection
        );
    }
    Ok(EXIT_OK)
}

fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let inst = generate(&GenConfig {
        agents: args.agents,
        items: args.items,
        multiplicity: args.mult,
        utility: args.util,
        seed: args.seed,
        fairness: args.fairness,
    })?;
    emit(&serialize_instance(&inst), args.out.as_deref(), out)?;
    Ok(EXIT_OK)
}

fn cmd_export(args: &ExportArgs, err: &mut dyn Write) -> Result<i32, Failure> {
    let inst = load_instance(&args.instance, args.fairness)?;
    let export = export_system(&inst)?;
    fs::create_dir_all(&args.out_dir)
        .map_err(|e| Failure::input(format!("cannot create {}: {e}", args.out_dir.display())))?;
    for (name, text) in [
        ("a.model", &export.a_system),
        ("q.model", &export.q_system),
        ("manifest.json", &export.manifest),
    ] {
        let path = args.out_dir.join(name);
        fs::write(&path, text)
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
        let _ = writeln!(err, "wrote {}", path.display());
    }
    Ok(EXIT_OK)
}

/// Runs the command line `args` (program name first) and returns the exit
/// code. Documents go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a, out, err),
        Command::Verify(a) => cmd_verify(a, out, err),
        Command::Brute(a) => cmd_brute(a, out, err),
        Command::Gen(a) => cmd_gen(a, out),
        Command::Export(a) => cmd_export(a, err),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            if let Some(doc) = &f.document {
                let _ = out.write_all(document(doc).as_bytes());
            }
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_util_range("-3..3"), Ok((-3, 3)));
        assert_eq!(parse_mult_range("1..1"), Ok((1, 1)));
        assert!(parse_mult_range("3..1").is_err());
        assert!(parse_util_range("3").is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["eef", "solve"], &mut out, &mut err), EXIT_INPUT);
        assert_eq!(run(["eef", "--help"], &mut out, &mut err), EXIT_OK);
    }
}
