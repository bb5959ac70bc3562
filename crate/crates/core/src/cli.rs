//! Command-line front end. Every command validates its inputs first; exit
//! status is 0 on success, 1 on invalid input and 2 when the simulator
//! breaks one of its own invariants.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::aggregation::distance_based_rule;
use crate::error::Error;
use crate::formula::Framework;
use crate::graph::{AgendaGraph, GraphKind, HullMode};
use crate::harness::{check_trace, run_experiment_in, CheckKind, ExperimentConfig};
use crate::iteration::{self, Algorithm, IterationConfig, MoveSemantics, Outcome};
use crate::judgment::{Judgment, Profile};
use crate::voting::{
    build_preference_agenda, condorcet_winner, infer_options, is_majority_consistent, parse_votes, OptionSet,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "iterja", version, about = "Iterative judgment aggregation on agenda graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the rational judgments of an agenda.
    Models {
        #[arg(long)]
        agenda: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Export an agenda graph.
    Graph {
        #[command(flatten)]
        setup: GraphArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Convex hull and classification of a profile.
    Hull {
        #[command(flatten)]
        setup: GraphArgs,
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, default_value = "union")]
        hull: HullMode,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the iteration on a profile and print its trace.
    Iterate {
        #[command(flatten)]
        setup: GraphArgs,
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, default_value = "union")]
        hull: HullMode,
        #[arg(long, default_value = "argmin")]
        moves: MoveSemantics,
        #[arg(long, default_value = "1")]
        algorithm: Algorithm,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        max_rounds: Option<u32>,
        /// With algorithm 2, stop at the first repeated judgment set
        /// instead of resolving it.
        #[arg(long)]
        detect_loops: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Score every rational judgment by summed path distance.
    Aggregate {
        #[command(flatten)]
        setup: GraphArgs,
        #[arg(long)]
        profile: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Encode ranked votes as judgments over the preference agenda.
    Voting {
        #[arg(long)]
        votes: PathBuf,
        /// Comma-separated option order; inferred from the votes if absent.
        #[arg(long, value_delimiter = ',')]
        options: Option<Vec<String>>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run an experiment campaign from a JSON config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[arg(long)]
    pub agenda: PathBuf,
    #[arg(long)]
    pub graph: GraphKind,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Invalid(m) | CliError::Internal(m) => m,
        }
    }
}

fn invalid(context: impl std::fmt::Display, e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(format!("{context}: {e}"))
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| invalid(path.display(), e))
}

fn load_framework(path: &Path) -> CliResult<Framework> {
    let fw = Framework::parse(&read(path)?).map_err(|e| invalid(path.display(), e))?;
    fw.models().map_err(|e| invalid(path.display(), e))?;
    Ok(fw)
}

fn load_graph(args: &GraphArgs) -> CliResult<(Framework, AgendaGraph)> {
    let fw = load_framework(&args.agenda)?;
    let g = AgendaGraph::build(args.graph, &fw).map_err(|e| invalid(args.agenda.display(), e))?;
    Ok((fw, g))
}

fn load_profile(path: &Path, fw: &Framework) -> CliResult<Profile> {
    Profile::load(&read(path)?, fw.agenda.len(), &fw.constraint).map_err(|e| invalid(path.display(), e))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serialisable output") + "\n"
}

fn emit(output: &OutputArgs, text: impl FnOnce() -> String, json: impl FnOnce() -> String) -> CliResult<String> {
    let body = match output.format {
        Format::Text => text(),
        Format::Json => json(),
    };
    match &output.out {
        Some(path) => {
            std::fs::write(path, &body).map_err(|e| invalid(path.display(), e))?;
            Ok(String::new())
        }
        None => Ok(body),
    }
}

fn joined<'a>(js: impl IntoIterator<Item = &'a Judgment>) -> String {
    js.into_iter().map(Judgment::to_string).collect::<Vec<_>>().join(" ")
}

/// Executes a parsed command and returns what it prints on stdout.
pub fn execute(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Models { agenda, output } => {
            let fw = load_framework(&agenda)?;
            let models = fw.models().map_err(|e| invalid(agenda.display(), e))?;
            emit(
                &output,
                || models.iter().map(|m| format!("{m}\n")).collect(),
                || to_json(&json!({ "issues": fw.agenda.issues(), "models": models })),
            )
        }
        Command::Graph { setup, output } => {
            let (fw, g) = load_graph(&setup)?;
            emit(&output, || g.to_adjacency_text(), || to_json(&g.export(fw.agenda.issues())))
        }
        Command::Hull {
            setup,
            profile,
            hull,
            output,
        } => {
            let (fw, g) = load_graph(&setup)?;
            let p = load_profile(&profile, &fw)?;
            let c = g.classify_profile(&p, hull).map_err(|e| invalid(profile.display(), e))?;
            emit(
                &output,
                || {
                    let mut s = String::new();
                    let _ = writeln!(s, "hull: {}", joined(&c.hull));
                    let _ = writeln!(s, "hull_size: {}", c.hull_size);
                    let _ = writeln!(s, "diameter: {}", c.diameter);
                    let _ = writeln!(s, "connectivity: {}", c.connectivity);
                    let _ = writeln!(s, "one_connected: {}", c.one_connected);
                    let _ = writeln!(s, "equidistant: {}", c.equidistant);
                    let _ = writeln!(s, "class_a: {}", c.class_a);
                    let _ = writeln!(s, "class_b: {}", c.class_b);
                    let _ = writeln!(s, "hull_max_degree: {}", c.hull_max_degree);
                    let cycles: Vec<String> = c.hull_cycles.iter().map(usize::to_string).collect();
                    let _ = writeln!(
                        s,
                        "hull_cycles: [{}]{}",
                        cycles.join(" "),
                        if c.hull_cycles_exhaustive { "" } else { " (search budget hit)" }
                    );
                    s
                },
                || to_json(&json!({ "graph": g.kind(), "hull_mode": hull, "profile": p, "classification": c })),
            )
        }
        Command::Iterate {
            setup,
            profile,
            hull,
            moves,
            algorithm,
            seed,
            max_rounds,
            detect_loops,
            output,
        } => {
            let (fw, g) = load_graph(&setup)?;
            let p = load_profile(&profile, &fw)?;
            let config = IterationConfig {
                hull_mode: hull,
                max_rounds,
                master_seed: seed,
                move_semantics: moves,
                algorithm,
                resolve_loops: !detect_loops,
            };
            let trace = iteration::run(&g, &p, &config).map_err(|e| invalid("iterate", e))?;
            let class = g.classify_profile(&p, hull).map_err(|e| invalid(profile.display(), e))?;
            let broken: Vec<String> = check_trace(&g, &trace, &config, &class)
                .map_err(|e| CliError::Internal(e.to_string()))?
                .into_iter()
                .filter(|v| v.kind == CheckKind::Engine)
                .map(|v| format!("{}: {}", v.invariant, v.detail))
                .collect();
            if !broken.is_empty() {
                return Err(CliError::Internal(broken.join("; ")));
            }
            emit(&output, || trace_text(&trace), || to_json(&trace))
        }
        Command::Aggregate {
            setup,
            profile,
            output,
        } => {
            let (fw, g) = load_graph(&setup)?;
            let p = load_profile(&profile, &fw)?;
            let r = distance_based_rule(&g, &p).map_err(|e| invalid(profile.display(), e))?;
            emit(
                &output,
                || {
                    let mut s = String::new();
                    let _ = writeln!(s, "winners: {}", joined(&r.winners));
                    let scores: Vec<String> = r.winners.iter().map(|w| r.scores[w].to_string()).collect();
                    let _ = writeln!(s, "winner scores: {}", scores.join(" "));
                    for (j, score) in &r.scores {
                        let _ = writeln!(s, "{j} {score}");
                    }
                    s
                },
                || to_json(&json!({ "graph": g.kind(), "winners": r.winners, "scores": r.scores })),
            )
        }
        Command::Voting { votes, options, output } => {
            let text = read(&votes)?;
            let opts = match options {
                Some(names) => OptionSet::new(names),
                None => infer_options(&text),
            }
            .map_err(|e| invalid(votes.display(), e))?;
            let ballots = parse_votes(&text, &opts).map_err(|e| invalid(votes.display(), e))?;
            if ballots.is_empty() {
                return Err(invalid(votes.display(), "no votes"));
            }
            let pa = build_preference_agenda(&opts).map_err(|e| invalid("voting", e))?;
            let profile = pa.votes_to_profile(&ballots).map_err(|e| invalid("voting", e))?;
            let consistent = match is_majority_consistent(&profile, &pa.framework.constraint) {
                Ok(b) => Some(b),
                Err(Error::MajorityTie { .. }) => None,
                Err(e) => return Err(invalid("voting", e)),
            };
            let winner = condorcet_winner(&ballots).map(|w| opts.name(w).to_string());
            emit(
                &output,
                || {
                    let mut s = pa.framework.to_text();
                    for (b, j) in ballots.iter().zip(profile.iter()) {
                        let _ = writeln!(s, "{} -> {j}", b.display(&opts));
                    }
                    let consistent = consistent.map_or("tied".to_string(), |b| b.to_string());
                    let _ = writeln!(s, "majority consistent: {consistent}");
                    let _ = writeln!(s, "condorcet winner: {}", winner.as_deref().unwrap_or("none"));
                    s
                },
                || {
                    to_json(&json!({
                        "options": opts.names(),
                        "issues": pa.framework.agenda.issues(),
                        "constraint": pa.framework.constraint.display(&pa.framework.agenda).to_string(),
                        "profile": profile,
                        "majority_consistent": consistent,
                        "condorcet_winner": winner,
                    }))
                },
            )
        }
        Command::Experiment { config, output } => {
            let cfg = ExperimentConfig::from_json(&read(&config)?).map_err(|e| invalid(config.display(), e))?;
            let base = config.parent().map(Path::to_path_buf);
            let report = run_experiment_in(&cfg, base.as_deref()).map_err(|e| invalid(config.display(), e))?;
            if let Some(path) = output.out.as_ref().or(cfg.output.as_ref()) {
                report.write(path).map_err(|e| invalid(path.display(), e))?;
            }
            if report.engine_violations() > 0 {
                return Err(CliError::Internal(format!(
                    "{} engine invariant violations\n{}",
                    report.engine_violations(),
                    report.summary()
                )));
            }
            Ok(match output.format {
                Format::Text => report.summary(),
                Format::Json => to_json(&report),
            })
        }
    }
}

fn trace_text(trace: &iteration::Trace) -> String {
    let mut s = String::new();
    let c = &trace.config;
    let _ = writeln!(
        s,
        "graph={} hull={} moves={} algorithm={} seed={} max_rounds={}",
        c.graph,
        match c.hull {
            HullMode::Closure => "closure",
            HullMode::IntervalUnion => "union",
        },
        c.moves,
        c.algorithm,
        c.seed,
        c.max_rounds
    );
    let _ = writeln!(s, "start: {}", trace.initial);
    for r in &trace.rounds {
        let _ = writeln!(s, "round {}: {} -> {}", r.round, r.profile_before, r.profile_after);
    }
    let _ = match &trace.outcome {
        Outcome::Consensus { judgment, rounds } => writeln!(s, "outcome: Consensus {judgment} after {rounds} round(s)"),
        Outcome::FixpointNoConsensus { profile, rounds } => {
            writeln!(s, "outcome: FixpointNoConsensus {profile} at round {rounds}")
        }
        Outcome::RoundLimit { profile, rounds } => writeln!(s, "outcome: RoundLimit {profile} after {rounds} round(s)"),
        Outcome::LoopDetected {
            profile_set,
            first_seen_round,
            rounds,
        } => writeln!(
            s,
            "outcome: LoopDetected {{{}}} first seen at round {first_seen_round}, repeated at round {rounds}",
            joined(profile_set)
        ),
        Outcome::Algorithm2Consensus {
            judgment,
            rounds,
            resolved_from_loop,
        } => writeln!(
            s,
            "outcome: Algorithm2Consensus {judgment} after {rounds} round(s){}",
            if *resolved_from_loop { " (loop resolved)" } else { "" }
        ),
    };
    s
}

/// Parses `args` (including the program name) and runs the command,
/// writing stdout and stderr. Returns the process exit status.
pub fn run<I, T>(args: I, stdout: &mut impl std::io::Write, stderr: &mut impl std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(cli) {
        Ok(out) => {
            let _ = stdout.write_all(out.as_bytes());
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("iterja").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn unknown_flags_are_validation_errors() {
        let (code, _, err) = run_args(&["models", "--bogus"]);
        assert_eq!(code, EXIT_INVALID);
        assert!(err.contains("--bogus"));
        let (code, _, _) = run_args(&["graph", "--agenda", "x", "--graph", "cube"]);
        assert_eq!(code, EXIT_INVALID);
    }

    #[test]
    fn missing_file_names_the_input() {
        let (code, _, err) = run_args(&["models", "--agenda", "/nonexistent/agenda.txt"]);
        assert_eq!(code, EXIT_INVALID);
        assert!(err.contains("/nonexistent/agenda.txt"));
    }

    #[test]
    fn help_exits_cleanly() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_OK);
        for cmd in ["models", "graph", "hull", "iterate", "aggregate", "voting", "experiment"] {
            assert!(out.contains(cmd), "{cmd}");
        }
    }
}
