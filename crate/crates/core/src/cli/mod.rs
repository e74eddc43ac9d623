//! The `cocycle` command line: verify laws, run instances, check
//! confluence and emit demo instance files.
//!
//! Exit codes: 0 success, 1 a law or confluence violation, 2 an input
//! error, 3 a run that hit its cap, deadlocked or ran out of script.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::algebra::{
    check_action, check_cocycle, check_monoid_laws, CheckConfig, ViolationReport,
};
use crate::canon::to_canonical_string;
use crate::error::{Error, Result};
use crate::fabric::{Edge, Graph, Instance, MessageMode, TropicalMatrix};
use crate::instances::{
    bellman_ford_file, carry_file, confluence_check, maxmax_file, registry, standard_policies,
    verified, ConfluenceOptions,
};
use crate::scheduler::{
    run, Caps, RunStatus, SchedulePolicy, DEFAULT_ENUMERATION_BOUND, DEFAULT_EVENT_CAP,
};
use crate::value::Value;

pub use crate::instances::InstanceFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "cocycle",
    version,
    about = "Check monoid-action laws and run asynchronous message-passing instances"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the laws of an instance's algebras and message functions.
    Verify {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::All)]
        kind: Kind,
        /// Also write the report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run an instance under one schedule and print the decoded final states.
    Run {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Policy::Fifo)]
        policy: Policy,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Round count for the synchronous policy; runs to a fixed point if absent.
        #[arg(long)]
        rounds: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_EVENT_CAP)]
        cap: u64,
        /// Write the trace as JSON lines.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Where to write the report of a run that does not terminate.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Skip law verification and treat every message function as a homomorphism.
        #[arg(long)]
        no_verify: bool,
    },
    /// Run fifo, synchronous and N seeded schedules and compare final states.
    Confluence {
        path: PathBuf,
        #[arg(long, default_value_t = 50)]
        seeds: u64,
        /// Also explore every interleaving.
        #[arg(long)]
        enumerate: bool,
        #[arg(long, default_value_t = DEFAULT_EVENT_CAP)]
        cap: u64,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BOUND)]
        bound: u64,
    },
    /// Print a bundled instance file.
    Demo {
        #[arg(value_enum)]
        which: Demo,
        /// Write to this path instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Monoid,
    Action,
    Cocycle,
    Homomorphism,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    Fifo,
    Random,
    Synchronous,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Demo {
    BellmanFord,
    Carry,
    Maxmax,
}

/// Parses `args` (program name first) and runs the command.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli, out, err),
        Err(e) => {
            let _ = write!(err, "{e}");
            if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_OK
            }
        }
    }
}

pub fn main() -> i32 {
    main_with_args(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Verify { path, kind, report } => cmd_verify(path, *kind, report.as_deref(), out),
        Command::Run {
            path,
            policy,
            seed,
            rounds,
            cap,
            trace,
            report,
            no_verify,
        } => {
            let policy = match policy {
                Policy::Fifo => SchedulePolicy::Fifo,
                Policy::Random => SchedulePolicy::Random { seed: *seed },
                Policy::Synchronous => SchedulePolicy::Synchronous { rounds: *rounds },
            };
            cmd_run(
                path,
                &policy,
                *cap,
                trace.as_deref(),
                report.as_deref(),
                *no_verify,
                out,
                err,
            )
        }
        Command::Confluence {
            path,
            seeds,
            enumerate,
            cap,
            bound,
        } => cmd_confluence(
            path,
            *seeds,
            *enumerate,
            Caps {
                event_cap: *cap,
                enumeration_bound: *bound,
            },
            out,
        ),
        Command::Demo { which, out: dest } => cmd_demo(*which, dest.as_deref(), out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Verification(_) | Error::TypeFault { .. } => EXIT_VIOLATION,
        _ => EXIT_INPUT,
    }
}

fn emit(out: &mut dyn Write, value: &serde_json::Value) -> Result<()> {
    writeln!(out, "{}", to_canonical_string(value))?;
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)?;
    Ok(())
}

pub fn load(path: &Path) -> Result<InstanceFile> {
    let text = std::fs::read_to_string(path)?;
    InstanceFile::parse(&text)
}

/// The law reports of `kind` for every algebra and incremental message
/// function of `inst`, trusted ones included.
pub fn law_reports(inst: &Instance, kind: Kind, cfg: &CheckConfig) -> Result<Vec<ViolationReport>> {
    let mut reports = Vec::new();
    let wants = |k: Kind| kind == Kind::All || kind == k;
    for alg in &inst.algebras {
        if wants(Kind::Monoid) {
            reports.push(check_monoid_laws(alg.messages(), cfg)?);
            reports.push(check_monoid_laws(&alg.args, cfg)?);
        }
        if wants(Kind::Action) {
            reports.push(check_action(&alg.action, cfg));
        }
        if wants(Kind::Cocycle) {
            reports.push(check_cocycle(alg, cfg));
        }
    }
    if wants(Kind::Homomorphism) {
        for (pos, f) in inst.psi.iter().enumerate() {
            if f.mode != MessageMode::Incremental {
                continue;
            }
            let e = inst.graph.edge(pos);
            let args = &inst.algebra(e.src).args;
            let msgs = inst.algebra(e.dst).messages();
            reports.push(f.clone().verify_homomorphism(args, msgs, cfg)?);
        }
    }
    Ok(reports)
}

fn cmd_verify(path: &Path, kind: Kind, report: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    let file = load(path)?;
    let inst = registry::build(&file)?;
    let reports = law_reports(&inst, kind, &CheckConfig::default())?;
    let passed = reports.iter().all(|r| r.passed);
    let doc = json!({
        "instance": file.name,
        "kind": format!("{kind:?}").to_lowercase(),
        "passed": passed,
        "reports": reports,
    });
    if let Some(p) = report {
        write_file(p, &to_canonical_string(&doc))?;
    }
    emit(out, &doc)?;
    Ok(if passed { EXIT_OK } else { EXIT_VIOLATION })
}

fn prepare(file: &InstanceFile, no_verify: bool) -> Result<Instance> {
    if !no_verify {
        return verified(file);
    }
    let mut inst = registry::build(file)?;
    for f in &mut inst.psi {
        *f = f.clone().assume_homomorphism();
    }
    Ok(inst)
}

fn default_report_path(inst: &Instance) -> PathBuf {
    std::env::temp_dir().join(format!(
        "cocycle-nontermination-{}.json",
        &inst.fingerprint()[..16]
    ))
}

#[allow(clippy::too_many_arguments)]
fn cmd_run(
    path: &Path,
    policy: &SchedulePolicy,
    cap: u64,
    trace: Option<&Path>,
    report: Option<&Path>,
    no_verify: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let file = load(path)?;
    let inst = prepare(&file, no_verify)?;
    let caps = Caps {
        event_cap: cap,
        ..Caps::default()
    };
    let outcome = run(&inst, policy, &caps)?;
    if let Some(p) = trace {
        write_file(p, &outcome.trace.to_jsonl())?;
    }
    if !outcome.status.is_ok() {
        let doc = json!({
            "instance": file.name,
            "policy": outcome.trace.header,
            "status": outcome.status,
            "events": outcome.trace.records.len(),
            "states": outcome.final_states,
            "digest": outcome.trace.digest(),
        });
        let dest = report.map_or_else(|| default_report_path(&inst), Path::to_path_buf);
        write_file(&dest, &to_canonical_string(&doc))?;
        let reason = match outcome.status {
            RunStatus::CapExceeded => "event cap exceeded",
            RunStatus::Deadlock => "deadlock",
            _ => "script exhausted",
        };
        writeln!(err, "{reason}; report written to {}", dest.display())?;
        return Ok(EXIT_RESOURCE);
    }
    emit(out, &registry::decode(&file, &outcome.final_states)?)?;
    Ok(EXIT_OK)
}

fn cmd_confluence(
    path: &Path,
    seeds: u64,
    enumerate: bool,
    caps: Caps,
    out: &mut dyn Write,
) -> Result<i32> {
    let file = load(path)?;
    let inst = verified(&file)?;
    let oracle = registry::oracle(&file)?;
    let options = ConfluenceOptions {
        caps,
        parallel: true,
        enumerate,
    };
    let report = confluence_check(
        &inst,
        &standard_policies(seeds),
        oracle.as_deref(),
        &options,
    )?;
    emit(out, &serde_json::to_value(&report)?)?;
    let complete = report.incomplete == 0 && report.enumeration.as_ref().is_none_or(|e| e.complete);
    Ok(if report.passed {
        EXIT_OK
    } else if report.distinct_finals.len() > 1 || report.oracle_match == Some(false) {
        EXIT_VIOLATION
    } else if !complete {
        EXIT_RESOURCE
    } else {
        EXIT_VIOLATION
    })
}

fn weighted(n: usize, edges: &[(usize, usize, i64)]) -> Result<Graph> {
    Graph::new(
        n,
        edges
            .iter()
            .enumerate()
            .map(|(i, &(src, dst, w))| Edge {
                id: i as u32,
                src,
                dst,
                payload: Value::Int(w),
            })
            .collect(),
    )
}

/// The bundled instance files.
pub fn demo_file(which: Demo) -> Result<InstanceFile> {
    match which {
        Demo::BellmanFord => {
            let g = weighted(
                4,
                &[
                    (0, 1, 1),
                    (0, 2, 4),
                    (1, 2, 1),
                    (2, 3, 2),
                    (1, 3, 6),
                    (3, 0, 1),
                ],
            )?;
            bellman_ford_file("bf_demo", &g, 0, false)
        }
        Demo::Carry => carry_file(&[9, 9], &[1]),
        Demo::Maxmax => {
            let g = weighted(3, &[(0, 1, 0), (1, 2, 0), (2, 0, 0)])?;
            let m = |rows: [[Option<i64>; 2]; 2]| {
                TropicalMatrix::new(
                    2,
                    2,
                    rows.iter().flatten().map(|x| Value::from_opt(*x)).collect(),
                )
            };
            let mats = vec![
                m([[Some(-1), None], [Some(0), Some(-2)]])?,
                m([[Some(0), Some(-3)], [None, Some(-1)]])?,
                m([[Some(-2), None], [None, Some(-2)]])?,
            ];
            let feats = vec![
                vec![Value::Int(0), Value::Bot],
                vec![Value::Bot, Value::Int(2)],
                vec![Value::Bot, Value::Bot],
            ];
            maxmax_file(&g, &feats, &mats)
        }
    }
}

fn cmd_demo(which: Demo, dest: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    let text = demo_file(which)?.to_canonical();
    match dest {
        Some(p) => write_file(p, &text)?,
        None => writeln!(out, "{text}")?,
    }
    Ok(EXIT_OK)
}
