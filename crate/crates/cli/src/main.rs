//! `kset`: simulate runs, check the 2-source predicate, generate scenarios,
//! verify traces and export graphs as DOT.
//!
//! Exit codes: 0 pass, 1 property violation, 2 usage, I/O or parse error.

mod scenario;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use kset_core::dot::{digraph_to_dot, labeled_to_dot, DotOptions};
use kset_core::predicate::{gen_complete, gen_random_psrcs, gen_theorem2, min_k, p_srcs_holds};
use kset_core::sim::{execute, SimError, Trace};
use kset_core::verify::verify_trace;
use kset_core::{ProcessId, Round, Value};

use scenario::{emit, read_trace, to_compact_json, to_json, Input, ScenarioFile};

#[derive(Parser)]
#[command(
    name = "kset",
    version,
    about = "k-set agreement over stable skeleton graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the algorithm on a scenario and record a trace.
    Simulate {
        scenario: PathBuf,
        /// Comma-separated proposal per process, in id order.
        #[arg(long, value_delimiter = ',')]
        proposals: Option<Vec<Value>>,
        #[arg(long)]
        horizon: Option<Round>,
        /// Trace output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the 2-source predicate for `k`, or report the smallest `k`.
    CheckPredicate {
        scenario: PathBuf,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Write a scenario file.
    Generate {
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Rounds before the run becomes constant (random scenarios only).
        #[arg(long, default_value_t = 0)]
        prefix_len: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a trace against ground truth recomputed from its run.
    Verify {
        trace: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        /// JSON report output path.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Render a skeleton or a process's approximation as DOT.
    #[command(group(ArgGroup::new("what").required(true).args(["round", "stable", "approx"])))]
    ExportDot {
        /// Scenario or trace file.
        input: PathBuf,
        /// Skeleton after this round.
        #[arg(long)]
        round: Option<Round>,
        /// Stable skeleton.
        #[arg(long)]
        stable: bool,
        /// Approximation of process `p` after round `r`, written `p@r`; needs a trace.
        #[arg(long, value_parser = parse_approx)]
        approx: Option<(usize, Round)>,
        #[arg(long)]
        self_loops: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Theorem2,
    Complete,
    Random,
}

fn parse_approx(s: &str) -> Result<(usize, Round), String> {
    let (p, r) = s
        .split_once('@')
        .ok_or_else(|| format!("expected p@r, got {s:?}"))?;
    let p = p.trim_start_matches('p');
    let p = p.parse().map_err(|_| format!("bad process {p:?}"))?;
    let r = r.parse().map_err(|_| format!("bad round {r:?}"))?;
    Ok((p, r))
}

enum Verdict {
    Pass,
    Violation,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<Verdict> {
    match command {
        Command::Simulate {
            scenario,
            proposals,
            horizon,
            out,
        } => simulate(&scenario, proposals.as_deref(), horizon, out.as_deref()),
        Command::CheckPredicate { scenario, k } => check_predicate(&scenario, k),
        Command::Generate {
            kind,
            n,
            k,
            seed,
            prefix_len,
            out,
        } => generate(kind, n, k, seed, prefix_len, out.as_deref()),
        Command::Verify { trace, k, report } => verify(&trace, k, report.as_deref()),
        Command::ExportDot {
            input,
            round,
            stable,
            approx,
            self_loops,
            out,
        } => {
            let target = match (round, stable, approx) {
                (Some(r), _, _) => DotTarget::Round(r),
                (_, true, _) => DotTarget::Stable,
                (_, _, Some((p, r))) => DotTarget::Approx(ProcessId(p), r),
                _ => unreachable!("clap requires one target"),
            };
            let opts = DotOptions {
                include_self_loops: self_loops,
            };
            export_dot(&input, target, opts, out.as_deref())
        }
    }
}

fn simulate(
    path: &Path,
    listed: Option<&[Value]>,
    horizon: Option<Round>,
    out: Option<&Path>,
) -> Result<Verdict> {
    let scenario = ScenarioFile::read(path)?;
    let proposals = scenario.proposals(listed)?;
    match execute(&scenario.run, &proposals, horizon) {
        Ok(trace) => {
            if let Some(out) = out {
                emit(Some(out), &to_compact_json(&trace)?)?;
            }
            print!("{}", summary(&trace));
            Ok(Verdict::Pass)
        }
        Err(SimError::HorizonExceeded { undecided, trace }) => {
            if let Some(out) = out {
                emit(Some(out), &to_compact_json(&trace)?)?;
            }
            print!("{}", summary(&trace));
            println!(
                "horizon {} reached; undecided: {undecided}",
                trace.last_round()
            );
            Ok(Verdict::Violation)
        }
        Err(e) => Err(e.into()),
    }
}

fn summary(trace: &Trace) -> String {
    let values = trace.distinct_decision_values();
    let listed: Vec<String> = values.iter().map(Value::to_string).collect();
    let mut text = format!(
        "{} distinct value{}: {}",
        values.len(),
        if values.len() == 1 { "" } else { "s" },
        listed.join(", ")
    );
    let rounds: Vec<Round> = trace.decisions.values().map(|d| d.round).collect();
    match (rounds.iter().min(), rounds.iter().max()) {
        (Some(lo), Some(hi)) if lo == hi && trace.all_decided() => {
            text += &format!(", all decided round {lo}")
        }
        (Some(lo), Some(hi)) => text += &format!(", decisions in rounds {lo}..={hi}"),
        _ => {}
    }
    text.push('\n');
    for (p, d) in &trace.decisions {
        let rule = serde_json::to_value(d.rule).ok();
        let rule = rule.as_ref().and_then(|v| v.as_str()).unwrap_or("?");
        text += &format!("{p}: {} in round {} ({rule})\n", d.value, d.round);
    }
    text
}

fn check_predicate(path: &Path, k: Option<usize>) -> Result<Verdict> {
    let scenario = ScenarioFile::read(path)?;
    match k {
        Some(k) => {
            if k == 0 {
                bail!("k must be at least 1");
            }
            let report = p_srcs_holds(&scenario.run, k);
            print!("{}", to_json(&report)?);
            Ok(if report.holds {
                Verdict::Pass
            } else {
                Verdict::Violation
            })
        }
        None => {
            print!(
                "{}",
                to_json(&serde_json::json!({ "min_k": min_k(&scenario.run) }))?
            );
            Ok(Verdict::Pass)
        }
    }
}

fn generate(
    kind: Kind,
    n: usize,
    k: Option<usize>,
    seed: u64,
    prefix_len: usize,
    out: Option<&Path>,
) -> Result<Verdict> {
    let (run, k) = match kind {
        Kind::Theorem2 => {
            let k = k.context("theorem2 needs --k")?;
            (gen_theorem2(n, k, None, None)?, k)
        }
        Kind::Complete => (gen_complete(n)?, 1),
        Kind::Random => {
            let k = k.context("random needs --k")?;
            (gen_random_psrcs(n, k, seed, prefix_len)?, k)
        }
    };
    let scenario = ScenarioFile {
        run,
        proposals: None,
        k: Some(k),
    };
    emit(out, &to_json(&scenario)?)?;
    Ok(Verdict::Pass)
}

fn verify(path: &Path, k: Option<usize>, report_path: Option<&Path>) -> Result<Verdict> {
    let trace = read_trace(path)?;
    let report = verify_trace(&trace, k);
    for check in &report.checks {
        println!("{check}");
    }
    for skipped in &report.skipped {
        println!("SKIP {skipped}");
    }
    println!(
        "{}",
        if report.passed {
            "all checks passed"
        } else {
            "violations found"
        }
    );
    if let Some(report_path) = report_path {
        emit(Some(report_path), &to_json(&report)?)?;
    }
    Ok(if report.passed {
        Verdict::Pass
    } else {
        Verdict::Violation
    })
}

enum DotTarget {
    Round(Round),
    Stable,
    Approx(ProcessId, Round),
}

#[derive(Debug, thiserror::Error)]
enum DotError {
    #[error("round {round} out of range {}", match last { Some(l) => format!("1..={l}"), None => "(rounds start at 1)".into() })]
    RoundOutOfRange { round: Round, last: Option<Round> },
    #[error("unknown process {0}")]
    UnknownProcess(ProcessId),
    #[error("approximations are only recorded in traces")]
    NeedsTrace,
}

fn export_dot(
    path: &Path,
    target: DotTarget,
    opts: DotOptions,
    out: Option<&Path>,
) -> Result<Verdict> {
    let input = Input::read(path)?;
    let run = input.run();
    let text = match target {
        DotTarget::Round(r) => {
            if r == 0 {
                return Err(DotError::RoundOutOfRange {
                    round: r,
                    last: None,
                }
                .into());
            }
            let skeleton = run.skeleton_at(r)?;
            digraph_to_dot(&format!("skeleton_{r}"), skeleton.as_digraph(), opts)
        }
        DotTarget::Stable => {
            let (stable, _) = run.stable_skeleton();
            digraph_to_dot("stable_skeleton", stable.as_digraph(), opts)
        }
        DotTarget::Approx(p, r) => {
            let Input::Trace(trace) = &input else {
                return Err(DotError::NeedsTrace.into());
            };
            if p.index() >= trace.n() {
                return Err(DotError::UnknownProcess(p).into());
            }
            let last = trace.last_round();
            if r == 0 || r > last {
                return Err(DotError::RoundOutOfRange {
                    round: r,
                    last: Some(last),
                }
                .into());
            }
            let state = trace.state(p, r).context("missing state")?;
            labeled_to_dot(
                &format!("{p}_round_{r}"),
                state.graph.vertices(),
                state.graph.edges(),
                opts,
            )
        }
    };
    emit(out, &text)?;
    Ok(Verdict::Pass)
}
