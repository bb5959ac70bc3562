//! Seeded profile generation, agenda generators and experiment campaigns.
//!
//! An experiment sweeps graph kinds and agent counts, draws profiles
//! (filtered on their classification before anything runs), iterates each
//! accepted profile under a range of seeds and checks the per-round and
//! per-run invariants of the iteration on every trial.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::aggregation::{check_propositional_unanimity, distance_based_rule, UnanimityStrength};
use crate::error::{Error, Result};
use crate::formula::{Agenda, Formula, Framework};
use crate::graph::{AgendaGraph, GraphKind, HullMode, ProfileClassification};
use crate::iteration::{self, distance_to_rest, Algorithm, IterationConfig, MoveSemantics, Outcome, Trace};
use crate::judgment::{Judgment, Profile};
use crate::voting::{build_preference_agenda, OptionSet};

/// `n` independent uniform draws from the rational vertices of `graph`.
pub fn generate_profile(graph: &AgendaGraph, n: usize, seed: u64) -> Result<Profile> {
    let rational = graph.rational_vertices();
    if rational.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Profile::new((0..n).map(|_| rational[rng.gen_range(0..rational.len())]).collect())
}

fn numbered_agenda(issues: usize) -> Result<Agenda> {
    Agenda::new((1..=issues).map(|i| format!("p{i}")))
}

fn framework_from_models(issues: usize, models: &[Judgment]) -> Result<Framework> {
    Framework::new(numbered_agenda(issues)?, Formula::from_models(issues, models)?)
}

/// A random constraint: each of the `2^issues` assignments is rational
/// with probability one half, redrawn until at least one is.
pub fn random_framework(issues: usize, seed: u64) -> Result<Framework> {
    if issues == 0 || issues > 12 {
        return Err(Error::Capacity {
            what: "random agenda issues",
            actual: issues,
            limit: 12,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let models: Vec<Judgment> = (0..1u64 << issues)
            .filter(|_| rng.gen_bool(0.5))
            .map(|i| Judgment::from_index(i, issues))
            .collect();
        if !models.is_empty() {
            return framework_from_models(issues, &models);
        }
    }
}

/// Rational judgments are the `2·issues` cyclic runs `0..0, 10..0, 110..0,
/// .., 1..1, 01..1, .., 0..01`. Both the Hamming restriction and the model
/// graph are a simple cycle of length `2·issues`.
pub fn run_cycle_framework(issues: usize) -> Result<Framework> {
    if issues < 2 {
        return Err(Error::invalid("a run cycle needs at least two issues"));
    }
    let mut models = Vec::with_capacity(2 * issues);
    for ones in 0..issues {
        models.push(Judgment::from_values(&(0..issues).map(|i| i < ones).collect::<Vec<_>>())?);
    }
    for zeros in 0..issues {
        models.push(Judgment::from_values(&(0..issues).map(|i| i >= zeros).collect::<Vec<_>>())?);
    }
    framework_from_models(issues, &models)
}

/// Rational judgments are the prefixes `0..0, 10..0, .., 1..1`: the model
/// graph is a path.
pub fn chain_framework(issues: usize) -> Result<Framework> {
    let models: Vec<Judgment> = (0..=issues)
        .map(|ones| Judgment::from_values(&(0..issues).map(|i| i < ones).collect::<Vec<_>>()))
        .collect::<Result<_>>()?;
    framework_from_models(issues, &models)
}

/// Rational judgments have an even number of accepted issues.
pub fn parity_framework(issues: usize) -> Result<Framework> {
    let models: Vec<Judgment> = (0..1u64 << issues)
        .filter(|i| i.count_ones() % 2 == 0)
        .map(|i| Judgment::from_index(i, issues))
        .collect();
    framework_from_models(issues, &models)
}

/// Every 3-agent profile of distinct rational judgments (in vertex order)
/// whose pairwise distances are all equal.
pub fn equidistant_triples(graph: &AgendaGraph) -> Result<Vec<Profile>> {
    let rational = graph.rational_vertices();
    let mut out = Vec::new();
    for (x, a) in rational.iter().enumerate() {
        for (y, b) in rational.iter().enumerate().skip(x + 1) {
            let d = graph.path_distance(a, b)?;
            for c in &rational[y + 1..] {
                if graph.path_distance(a, c)? == d && graph.path_distance(b, c)? == d {
                    out.push(Profile::new(vec![*a, *b, *c])?);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AgendaSource {
    Doctrinal,
    /// Agenda file, relative paths resolved against the config's directory.
    File {
        path: PathBuf,
    },
    Text {
        text: String,
    },
    Preference {
        options: usize,
    },
    Random {
        issues: usize,
        seed: u64,
    },
    RunCycle {
        issues: usize,
    },
    Chain {
        issues: usize,
    },
    Parity {
        issues: usize,
    },
    Models {
        issues: usize,
        models: Vec<Judgment>,
    },
}

impl AgendaSource {
    pub fn load(&self, base: Option<&Path>) -> Result<Framework> {
        match self {
            AgendaSource::Doctrinal => Ok(Framework::doctrinal_paradox()),
            AgendaSource::File { path } => {
                let full = match base {
                    Some(dir) if path.is_relative() => dir.join(path),
                    _ => path.clone(),
                };
                let text = std::fs::read_to_string(&full)
                    .map_err(|e| Error::invalid(format!("cannot read agenda {}: {e}", full.display())))?;
                Framework::parse(&text)
            }
            AgendaSource::Text { text } => Framework::parse(text),
            AgendaSource::Preference { options } => {
                Ok(build_preference_agenda(&OptionSet::numbered(*options)?)?.framework)
            }
            AgendaSource::Random { issues, seed } => random_framework(*issues, *seed),
            AgendaSource::RunCycle { issues } => run_cycle_framework(*issues),
            AgendaSource::Chain { issues } => chain_framework(*issues),
            AgendaSource::Parity { issues } => parity_framework(*issues),
            AgendaSource::Models { issues, models } => framework_from_models(*issues, models),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfileSource {
    /// Uniform draws until `per_cell` profiles pass the filter or
    /// `max_draws` draws have been made.
    Random { per_cell: usize, max_draws: usize },
    /// The given profiles; the sweep's agent counts are ignored.
    Fixed { profiles: Vec<Vec<Judgment>> },
    /// Every equidistant triple of the graph; agent counts are ignored.
    EquidistantTriples,
}

/// Predicate over a profile and its classification. Lists combine with
/// [`Filter::All`] and [`Filter::Any`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Filter {
    OneConnected,
    Equidistant,
    ClassA,
    ClassB,
    ClassAOrB,
    HullIsCycle,
    UniquePlurality,
    Unanimous,
    OddAgents,
    DiameterAtLeast(u32),
    Not(Box<Filter>),
    All(Vec<Filter>),
    Any(Vec<Filter>),
}

impl Filter {
    pub fn accepts(&self, profile: &Profile, class: &ProfileClassification) -> bool {
        match self {
            Filter::OneConnected => class.one_connected,
            Filter::Equidistant => class.equidistant,
            Filter::ClassA => class.class_a,
            Filter::ClassB => class.class_b,
            Filter::ClassAOrB => class.class_a || class.class_b,
            Filter::HullIsCycle => class.hull_is_cycle,
            Filter::UniquePlurality => profile.unique_plurality().is_some(),
            Filter::Unanimous => profile.is_unanimous(),
            Filter::OddAgents => profile.agents() % 2 == 1,
            Filter::DiameterAtLeast(d) => class.diameter >= *d,
            Filter::Not(f) => !f.accepts(profile, class),
            Filter::All(fs) => fs.iter().all(|f| f.accepts(profile, class)),
            Filter::Any(fs) => fs.iter().any(|f| f.accepts(profile, class)),
        }
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, fs: &[Filter], sep: &str| {
            f.write_str("(")?;
            for (k, x) in fs.iter().enumerate() {
                if k > 0 {
                    f.write_str(sep)?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")
        };
        match self {
            Filter::OneConnected => f.write_str("one_connected"),
            Filter::Equidistant => f.write_str("equidistant"),
            Filter::ClassA => f.write_str("class_a"),
            Filter::ClassB => f.write_str("class_b"),
            Filter::ClassAOrB => f.write_str("class_a_or_b"),
            Filter::HullIsCycle => f.write_str("hull_is_cycle"),
            Filter::UniquePlurality => f.write_str("unique_plurality"),
            Filter::Unanimous => f.write_str("unanimous"),
            Filter::OddAgents => f.write_str("odd_agents"),
            Filter::DiameterAtLeast(d) => write!(f, "diameter>={d}"),
            Filter::Not(x) => write!(f, "!{x}"),
            Filter::All(fs) => join(f, fs, " & "),
            Filter::Any(fs) => join(f, fs, " | "),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRange {
    pub start: u64,
    pub count: u64,
}

impl SeedRange {
    pub fn iter(&self) -> impl Iterator<Item = u64> {
        self.start..self.start + self.count
    }
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub name: String,
    pub agenda: AgendaSource,
    pub graphs: Vec<GraphKind>,
    #[serde(default)]
    pub agents: Vec<usize>,
    pub profiles: ProfileSource,
    /// Seed for profile draws; each cell derives its own stream from it.
    #[serde(default)]
    pub profile_seed: u64,
    /// Iteration seeds run on every accepted profile.
    pub seeds: SeedRange,
    #[serde(default)]
    pub max_rounds: Option<u32>,
    #[serde(default)]
    pub hull: HullMode,
    #[serde(default)]
    pub moves: MoveSemantics,
    #[serde(default)]
    pub algorithm: Algorithm,
    #[serde(default = "default_true")]
    pub resolve_loops: bool,
    #[serde(default)]
    pub filter: Option<Filter>,
    /// Keep every trace in the report (large).
    #[serde(default)]
    pub keep_traces: bool,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("experiment config: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        if self.graphs.is_empty() {
            return Err(Error::invalid("experiment config: `graphs` is empty"));
        }
        if self.seeds.count == 0 {
            return Err(Error::invalid("experiment config: `seeds.count` is zero"));
        }
        if let ProfileSource::Random { per_cell, max_draws } = self.profiles {
            if self.agents.is_empty() || self.agents.contains(&0) {
                return Err(Error::invalid("experiment config: `agents` must list positive counts"));
            }
            if per_cell == 0 || max_draws == 0 {
                return Err(Error::invalid("experiment config: `per_cell` and `max_draws` must be positive"));
            }
        }
        if self.max_rounds == Some(0) {
            return Err(Error::invalid("experiment config: `max_rounds` must be at least 1"));
        }
        Ok(())
    }

    fn iteration_config(&self, seed: u64) -> IterationConfig {
        IterationConfig {
            hull_mode: self.hull,
            max_rounds: self.max_rounds,
            master_seed: seed,
            move_semantics: self.moves,
            algorithm: self.algorithm,
            resolve_loops: self.resolve_loops,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RoundStats {
    pub min: u32,
    pub mean: f64,
    pub max: u32,
}

impl RoundStats {
    fn of(values: &[u32]) -> Option<Self> {
        let min = *values.iter().min()?;
        let max = *values.iter().max()?;
        let mean = values.iter().map(|&v| f64::from(v)).sum::<f64>() / values.len() as f64;
        Some(RoundStats { min, mean, max })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub graph: GraphKind,
    pub agents: usize,
    pub filter: String,
    pub draws: usize,
    pub profiles: usize,
    pub trials: usize,
    pub outcomes: BTreeMap<String, usize>,
    pub rounds: Option<RoundStats>,
    /// Among consensus trials, the share whose consensus is one of the
    /// one-shot rule's winners.
    pub oracle_agreement: Option<f64>,
    /// Largest `rounds / (issues · agents)` over the cell's trials.
    pub fitted_c: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRow {
    pub graph: GraphKind,
    pub agents: usize,
    pub profile_seed: Option<u64>,
    pub seed: u64,
    pub profile: Profile,
    pub one_connected: bool,
    pub equidistant: bool,
    pub class_a: bool,
    pub class_b: bool,
    pub outcome: String,
    pub rounds: u32,
    pub consensus: Option<Judgment>,
    pub oracle_winners: Vec<Judgment>,
    pub agreement: Option<bool>,
}

/// Engine checks guard the simulator itself; claim checks compare runs
/// against the theory's predictions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Engine,
    Claim,
}

/// The check names with their kinds.
pub const CHECKS: &[(&str, CheckKind)] = &[
    ("record", CheckKind::Engine),
    ("simultaneity", CheckKind::Engine),
    ("hull_confinement", CheckKind::Engine),
    ("rationality", CheckKind::Engine),
    ("adjacency", CheckKind::Engine),
    ("strict_improvement", CheckKind::Engine),
    ("outcome", CheckKind::Engine),
    ("hull_diameter", CheckKind::Claim),
    ("nonempty_moves", CheckKind::Claim),
    ("consensus_requires_one_connected", CheckKind::Claim),
    ("strong_unanimity", CheckKind::Claim),
    ("unique_mode_one_round", CheckKind::Claim),
    ("equidistant_cycle_stuck", CheckKind::Claim),
];

fn check_kind(name: &str) -> CheckKind {
    CHECKS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, k)| *k)
        .expect("registered check")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceViolation {
    pub invariant: String,
    pub kind: CheckKind,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub graph: GraphKind,
    pub profile: Profile,
    pub seed: u64,
    pub invariant: String,
    pub kind: CheckKind,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub issues: usize,
    pub config: ExperimentConfig,
    pub cells: Vec<CellReport>,
    pub violations: Vec<Violation>,
    pub passed: bool,
    pub rows: Vec<TrialRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub traces: Vec<Trace>,
}

impl ExperimentReport {
    pub fn engine_violations(&self) -> usize {
        self.violations.iter().filter(|v| v.kind == CheckKind::Engine).count()
    }

    /// Violation counts per check name.
    pub fn violation_counts(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        for v in &self.violations {
            *counts.entry(v.invariant.clone()).or_default() += 1;
        }
        counts
    }

    pub fn trials(&self) -> usize {
        self.cells.iter().map(|c| c.trials).sum()
    }

    /// Largest fitted `c` over all cells.
    pub fn fitted_c(&self) -> Option<f64> {
        self.cells.iter().filter_map(|c| c.fitted_c).reduce(f64::max)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub const CSV_HEADER: &'static str = "graph,agents,profile_seed,seed,profile,one_connected,equidistant,class_a,class_b,outcome,rounds,consensus,oracle_winners,agreement";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        let opt = |b: Option<bool>| b.map(|b| b.to_string()).unwrap_or_default();
        for r in &self.rows {
            let winners: Vec<String> = r.oracle_winners.iter().map(Judgment::to_string).collect();
            let profile: Vec<String> = r.profile.iter().map(Judgment::to_string).collect();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.graph,
                r.agents,
                r.profile_seed.map(|s| s.to_string()).unwrap_or_default(),
                r.seed,
                profile.join(" "),
                r.one_connected,
                r.equidistant,
                r.class_a,
                r.class_b,
                r.outcome,
                r.rounds,
                r.consensus.map(|j| j.to_string()).unwrap_or_default(),
                winners.join(" "),
                opt(r.agreement),
            );
        }
        out
    }

    /// Human-readable per-cell summary.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "experiment {} ({} trials)", self.name, self.trials());
        for c in &self.cells {
            let outcomes: Vec<String> = c.outcomes.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = write!(
                out,
                "  {} n={} filter={} profiles={}/{} trials={} [{}]",
                c.graph,
                c.agents,
                c.filter,
                c.profiles,
                c.draws,
                c.trials,
                outcomes.join(" ")
            );
            if let Some(r) = &c.rounds {
                let _ = write!(out, " rounds={}/{:.2}/{}", r.min, r.mean, r.max);
            }
            if let Some(a) = c.oracle_agreement {
                let _ = write!(out, " agreement={a:.3}");
            }
            if let Some(fc) = c.fitted_c {
                let _ = write!(out, " c={fc:.3}");
            }
            out.push('\n');
        }
        let counts: Vec<String> = self.violation_counts().iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "violations: {} [{}]", self.violations.len(), counts.join(" "));
        for v in self.violations.iter().take(20) {
            let _ = writeln!(out, "  [{}] {} {} seed={}: {}", v.invariant, v.graph, v.profile, v.seed, v.detail);
        }
        out
    }

    /// Writes the JSON report to `path` and the trial table next to it
    /// with a `.csv` extension.
    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json())?;
        std::fs::write(path.with_extension("csv"), self.to_csv())
    }
}

/// Checks every invariant the iteration promises on one finished trace,
/// appending a message per violation.
pub fn check_trace(
    graph: &AgendaGraph,
    trace: &Trace,
    config: &IterationConfig,
    class: &ProfileClassification,
) -> Result<Vec<TraceViolation>> {
    let mut out = Vec::new();
    let mut flag = |name: &str, detail: String| {
        out.push(TraceViolation {
            invariant: name.to_string(),
            kind: check_kind(name),
            detail,
        })
    };
    let p0 = &trace.initial;
    let n = p0.agents();

    for rec in &trace.rounds {
        let before = &rec.profile_before;
        let hull = graph.profile_hull(before, config.hull_mode)?;
        for i in 0..n {
            let recomputed = iteration::moves(graph, before, i, config.hull_mode, config.move_semantics)?;
            if recomputed != rec.moves[i] {
                flag("simultaneity", format!("round {} agent {i}: recorded moves differ", rec.round));
            }
            let expected = rec.choices[i].unwrap_or(*before.get(i));
            if *rec.profile_after.get(i) != expected {
                flag("record", format!("round {} agent {i}: profile_after disagrees with choice", rec.round));
            }
            let Some(choice) = rec.choices[i] else {
                if !rec.moves[i].is_empty() {
                    flag("record", format!("round {} agent {i}: stayed despite moves", rec.round));
                }
                continue;
            };
            if !rec.moves[i].contains(&choice) {
                flag("record", format!("round {} agent {i}: choice outside moves", rec.round));
            }
            if !hull.contains(&choice) {
                flag("hull_confinement", format!("round {} agent {i}: {choice} outside the hull", rec.round));
            }
            if !graph.is_rational(&choice) {
                flag("rationality", format!("round {} agent {i}: {choice} irrational", rec.round));
            }
            if graph.path_distance(before.get(i), &choice)? != 1 {
                flag("adjacency", format!("round {} agent {i}: non-adjacent move", rec.round));
            }
            let d_before = distance_to_rest(graph, before, i, before.get(i))?;
            let d_after = distance_to_rest(graph, before, i, &choice)?;
            if d_after >= d_before {
                flag(
                    "strict_improvement",
                    format!("round {} agent {i}: D {d_before} -> {d_after}", rec.round),
                );
            }
        }
        if config.hull_mode == HullMode::Closure {
            let after_hull = graph.profile_hull(&rec.profile_after, HullMode::Closure)?;
            let (db, da) = (graph.diameter(&hull)?, graph.diameter(&after_hull)?);
            if da > db {
                flag("hull_diameter", format!("round {}: hull diameter {db} -> {da}", rec.round));
            }
        }
        // A 1-connected profile of more than three agents with a hull of
        // maximum degree two and diameter above one always has a mover.
        if n > 3 && rec.moves.iter().all(Vec::is_empty) {
            let seeds = before.distinct();
            if graph.diameter(&seeds)? > 1
                && graph.induced_subgraph(&hull)?.max_degree() <= 2
                && graph.profile_epsilon_connected(before, 1)?
            {
                flag("nonempty_moves", format!("round {}: no agent can move", rec.round));
            }
        }
    }

    let outcome = &trace.outcome;
    let last = trace.rounds.last().map(|r| &r.profile_after);
    match outcome {
        Outcome::Consensus { judgment, .. } => {
            if !last.is_some_and(|p| p.is_unanimous() && p.get(0) == judgment) {
                flag("outcome", "consensus without a unanimous final profile".into());
            }
        }
        Outcome::FixpointNoConsensus { profile, .. } => {
            let repeated = trace.rounds.last().is_some_and(|r| r.profile_before == r.profile_after);
            if profile.is_unanimous() || !repeated {
                flag("outcome", "fixpoint without two equal profiles".into());
            }
        }
        _ => {}
    }

    // Loop resolution imposes a consensus; only organic ones are checked
    // against the start profile's connectivity.
    let organic = !matches!(
        outcome,
        Outcome::Algorithm2Consensus {
            resolved_from_loop: true,
            ..
        }
    );
    if let Some(j) = outcome.consensus() {
        if organic && !class.one_connected && !p0.is_unanimous() {
            flag(
                "consensus_requires_one_connected",
                format!("consensus {j} from a {}-connected start", class.connectivity),
            );
        }
        let strong = check_propositional_unanimity(p0, &[j].into(), UnanimityStrength::Strong)?;
        if graph.kind() == GraphKind::Hamming && !strong {
            flag("strong_unanimity", format!("consensus {j} drops a unanimous issue"));
        }
    }

    if graph.kind() == GraphKind::Complete && trace.config.algorithm == Algorithm::One {
        if let Some(mode) = p0.unique_plurality() {
            let expected = Outcome::Consensus {
                judgment: mode,
                rounds: 1,
            };
            if *outcome != expected {
                flag("unique_mode_one_round", format!("expected consensus {mode} in one round"));
            }
        }
    }

    // Three equidistant agents on a hull that is a single cycle of length
    // at least four are stuck from the start.
    if n == 3 && class.equidistant && class.hull_is_cycle && class.hull_size >= 4 && !p0.is_unanimous() {
        let stuck = trace.rounds.first().is_some_and(|r| r.moves.iter().all(Vec::is_empty));
        let fixpoint = matches!(outcome, Outcome::FixpointNoConsensus { rounds: 1, .. })
            || (trace.config.algorithm == Algorithm::Two && outcome.rounds() <= 2);
        if !stuck || !fixpoint {
            flag("equidistant_cycle_stuck", format!("outcome {}", outcome.tag()));
        }
    }
    Ok(out)
}

struct Cell {
    agents: usize,
    draws: usize,
    profiles: Vec<(Option<u64>, Profile, ProfileClassification)>,
}

fn cell_stream(base: u64, kind: GraphKind, agents: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    let kind_id = GraphKind::ALL.iter().position(|k| *k == kind).expect("known kind") as u64;
    rng.set_stream((agents as u64) << 2 | kind_id);
    rng
}

fn collect_cells(cfg: &ExperimentConfig, graph: &AgendaGraph) -> Result<Vec<Cell>> {
    let accept = |p: &Profile, c: &ProfileClassification| cfg.filter.as_ref().is_none_or(|f| f.accepts(p, c));
    let mut cells = Vec::new();
    match &cfg.profiles {
        ProfileSource::Random { per_cell, max_draws } => {
            for &agents in &cfg.agents {
                let mut stream = cell_stream(cfg.profile_seed, graph.kind(), agents);
                let mut cell = Cell {
                    agents,
                    draws: 0,
                    profiles: Vec::new(),
                };
                while cell.profiles.len() < *per_cell && cell.draws < *max_draws {
                    cell.draws += 1;
                    let seed = stream.next_u64();
                    let p = generate_profile(graph, agents, seed)?;
                    let c = graph.classify_profile(&p, cfg.hull)?;
                    if accept(&p, &c) {
                        cell.profiles.push((Some(seed), p, c));
                    }
                }
                cells.push(cell);
            }
        }
        ProfileSource::Fixed { profiles } => {
            let mut by_agents: BTreeMap<usize, Cell> = BTreeMap::new();
            for entries in profiles {
                let p = Profile::new(entries.clone())?;
                let c = graph.classify_profile(&p, cfg.hull)?;
                let cell = by_agents.entry(p.agents()).or_insert_with(|| Cell {
                    agents: p.agents(),
                    draws: 0,
                    profiles: Vec::new(),
                });
                cell.draws += 1;
                if accept(&p, &c) {
                    cell.profiles.push((None, p, c));
                }
            }
            cells.extend(by_agents.into_values());
        }
        ProfileSource::EquidistantTriples => {
            let mut cell = Cell {
                agents: 3,
                draws: 0,
                profiles: Vec::new(),
            };
            for p in equidistant_triples(graph)? {
                cell.draws += 1;
                let c = graph.classify_profile(&p, cfg.hull)?;
                if accept(&p, &c) {
                    cell.profiles.push((None, p, c));
                }
            }
            cells.push(cell);
        }
    }
    Ok(cells)
}

/// Runs a campaign. Relative agenda paths resolve against `base`.
pub fn run_experiment_in(cfg: &ExperimentConfig, base: Option<&Path>) -> Result<ExperimentReport> {
    cfg.validate()?;
    let framework = cfg.agenda.load(base)?;
    let issues = framework.agenda.len();
    let filter_name = cfg.filter.as_ref().map_or_else(|| "none".to_string(), Filter::to_string);
    let mut report = ExperimentReport {
        name: cfg.name.clone(),
        issues,
        config: cfg.clone(),
        cells: Vec::new(),
        violations: Vec::new(),
        passed: true,
        rows: Vec::new(),
        traces: Vec::new(),
    };
    for &kind in &cfg.graphs {
        let graph = AgendaGraph::build(kind, &framework)?;
        for cell in collect_cells(cfg, &graph)? {
            let mut outcomes: BTreeMap<String, usize> = BTreeMap::new();
            let mut rounds = Vec::new();
            let (mut consensus, mut agreeing) = (0usize, 0usize);
            let mut fitted: Option<f64> = None;
            for (profile_seed, p0, class) in &cell.profiles {
                let oracle = distance_based_rule(&graph, p0)?;
                for seed in cfg.seeds.iter() {
                    let icfg = cfg.iteration_config(seed);
                    let trace = iteration::run(&graph, p0, &icfg)?;
                    for v in check_trace(&graph, &trace, &icfg, class)? {
                        report.violations.push(Violation {
                            graph: kind,
                            profile: p0.clone(),
                            seed,
                            invariant: v.invariant,
                            kind: v.kind,
                            detail: v.detail,
                        });
                    }
                    let outcome = &trace.outcome;
                    *outcomes.entry(outcome.tag().to_string()).or_default() += 1;
                    rounds.push(outcome.rounds());
                    let c = f64::from(outcome.rounds()) / (issues * cell.agents) as f64;
                    fitted = Some(fitted.map_or(c, |f| f.max(c)));
                    let agreement = outcome.consensus().map(|j| oracle.winners.contains(&j));
                    if let Some(a) = agreement {
                        consensus += 1;
                        agreeing += usize::from(a);
                    }
                    report.rows.push(TrialRow {
                        graph: kind,
                        agents: cell.agents,
                        profile_seed: *profile_seed,
                        seed,
                        profile: p0.clone(),
                        one_connected: class.one_connected,
                        equidistant: class.equidistant,
                        class_a: class.class_a,
                        class_b: class.class_b,
                        outcome: outcome.tag().to_string(),
                        rounds: outcome.rounds(),
                        consensus: outcome.consensus(),
                        oracle_winners: oracle.winners.iter().copied().collect(),
                        agreement,
                    });
                    if cfg.keep_traces {
                        report.traces.push(trace);
                    }
                }
            }
            report.cells.push(CellReport {
                graph: kind,
                agents: cell.agents,
                filter: filter_name.clone(),
                draws: cell.draws,
                profiles: cell.profiles.len(),
                trials: rounds.len(),
                outcomes,
                rounds: RoundStats::of(&rounds),
                oracle_agreement: (consensus > 0).then(|| agreeing as f64 / consensus as f64),
                fitted_c: fitted,
            });
        }
    }
    report.passed = report.violations.is_empty();
    Ok(report)
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    run_experiment_in(cfg, None)
}
