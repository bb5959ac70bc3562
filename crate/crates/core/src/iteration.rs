//! Round-based simulation of the decentralised iteration procedure and its
//! centralised loop-resolving variant.
//!
//! Each round every agent computes its move set from the same round-start
//! profile, picks one move uniformly at random from its own deterministic
//! stream (or stays put when the set is empty), and the new profile is
//! assembled in agent order. A run of the decentralised procedure stops on
//! unanimity, on two consecutive identical profiles, or at the round cap.
//! The centralised variant additionally stops at the first repeated set of
//! distinct judgments and resolves it with one seeded central choice.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{AgendaGraph, GraphKind, HullMode};
use crate::judgment::{Judgment, JudgmentSet, Profile};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveSemantics {
    /// Minimise the distance to the rest over the adjacent, strictly
    /// improving, rational hull members.
    #[default]
    #[serde(rename = "argmin")]
    ArgminAdjacent,
    /// Global minimisers over the rational hull, intersected with the
    /// adjacent strictly improving judgments. Can be empty even when an
    /// improving neighbour exists.
    #[serde(rename = "literal")]
    LiteralIntersection,
}

impl fmt::Display for MoveSemantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoveSemantics::ArgminAdjacent => "argmin",
            MoveSemantics::LiteralIntersection => "literal",
        })
    }
}

impl FromStr for MoveSemantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "argmin" => Ok(MoveSemantics::ArgminAdjacent),
            "literal" => Ok(MoveSemantics::LiteralIntersection),
            other => Err(Error::invalid(format!("unknown move semantics `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    /// Decentralised: stop on unanimity or an unchanged profile.
    #[default]
    #[serde(rename = "1")]
    One,
    /// Centralised: also stop when a set of distinct judgments repeats.
    #[serde(rename = "2")]
    Two,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::One => "1",
            Algorithm::Two => "2",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(Algorithm::One),
            "2" => Ok(Algorithm::Two),
            other => Err(Error::invalid(format!("unknown algorithm `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationConfig {
    pub hull_mode: HullMode,
    /// `None` selects `10 · n · diameter(P0) · |CH(P0)|` (at least 1).
    pub max_rounds: Option<u32>,
    pub master_seed: u64,
    pub move_semantics: MoveSemantics,
    pub algorithm: Algorithm,
    /// Centralised variant only: when false, stop with
    /// [`Outcome::LoopDetected`] instead of resolving the loop.
    pub resolve_loops: bool,
}

impl Default for IterationConfig {
    fn default() -> Self {
        IterationConfig {
            hull_mode: HullMode::default(),
            max_rounds: None,
            master_seed: 0,
            move_semantics: MoveSemantics::default(),
            algorithm: Algorithm::default(),
            resolve_loops: true,
        }
    }
}

impl IterationConfig {
    pub fn with_seed(seed: u64) -> Self {
        IterationConfig {
            master_seed: seed,
            ..Self::default()
        }
    }

    /// The round cap for a run from `p0`.
    pub fn resolved_max_rounds(&self, graph: &AgendaGraph, p0: &Profile) -> Result<u32> {
        if let Some(cap) = self.max_rounds {
            if cap == 0 {
                return Err(Error::invalid("max_rounds must be at least 1"));
            }
            return Ok(cap);
        }
        let distinct = p0.distinct();
        let diameter = graph.diameter(&distinct)? as u64;
        let hull = graph.convex_hull(&distinct, self.hull_mode)?.len() as u64;
        let cap = 10 * p0.agents() as u64 * diameter * hull;
        Ok(cap.clamp(1, u64::from(u32::MAX)) as u32)
    }
}

/// One agent's identity, current judgment and private random stream.
#[derive(Clone, Debug)]
pub struct AgentState {
    pub id: usize,
    pub current: Judgment,
    rng: ChaCha8Rng,
}

impl AgentState {
    /// Agent streams are derived from the master seed: agent `i` uses
    /// ChaCha stream `i + 1`, the central chooser uses stream 0.
    pub fn new(id: usize, current: Judgment, master_seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(id as u64 + 1);
        AgentState { id, current, rng }
    }

    fn choose(&mut self, moves: &[Judgment]) -> Option<Judgment> {
        if moves.is_empty() {
            None
        } else {
            Some(moves[self.rng.gen_range(0..moves.len())])
        }
    }
}

pub fn spawn_agents(p0: &Profile, master_seed: u64) -> Vec<AgentState> {
    p0.iter()
        .enumerate()
        .map(|(i, j)| AgentState::new(i, *j, master_seed))
        .collect()
}

fn central_stream(master_seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(0);
    rng
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    /// 1-based round number.
    pub round: u32,
    pub profile_before: Profile,
    pub moves: Vec<Vec<Judgment>>,
    pub choices: Vec<Option<Judgment>>,
    pub profile_after: Profile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum Outcome {
    Consensus {
        judgment: Judgment,
        rounds: u32,
    },
    FixpointNoConsensus {
        profile: Profile,
        rounds: u32,
    },
    RoundLimit {
        profile: Profile,
        rounds: u32,
    },
    LoopDetected {
        profile_set: Vec<Judgment>,
        first_seen_round: u32,
        rounds: u32,
    },
    Algorithm2Consensus {
        judgment: Judgment,
        rounds: u32,
        resolved_from_loop: bool,
    },
}

impl Outcome {
    pub fn rounds(&self) -> u32 {
        match self {
            Outcome::Consensus { rounds, .. }
            | Outcome::FixpointNoConsensus { rounds, .. }
            | Outcome::RoundLimit { rounds, .. }
            | Outcome::LoopDetected { rounds, .. }
            | Outcome::Algorithm2Consensus { rounds, .. } => *rounds,
        }
    }

    /// The agreed judgment for either consensus variant.
    pub fn consensus(&self) -> Option<Judgment> {
        match self {
            Outcome::Consensus { judgment, .. } | Outcome::Algorithm2Consensus { judgment, .. } => Some(*judgment),
            _ => None,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Outcome::Consensus { .. } => "Consensus",
            Outcome::FixpointNoConsensus { .. } => "FixpointNoConsensus",
            Outcome::RoundLimit { .. } => "RoundLimit",
            Outcome::LoopDetected { .. } => "LoopDetected",
            Outcome::Algorithm2Consensus { .. } => "Algorithm2Consensus",
        }
    }
}

/// Echo of the configuration a trace was produced with.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceConfig {
    pub graph: GraphKind,
    pub hull: HullMode,
    pub moves: MoveSemantics,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub max_rounds: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub config: TraceConfig,
    pub initial: Profile,
    pub rounds: Vec<RoundRecord>,
    pub outcome: Outcome,
}

impl Trace {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serialises")
    }
}

/// `D(i, J, P)`: summed path distance from `j` to every other agent.
pub fn distance_to_rest(graph: &AgendaGraph, profile: &Profile, agent: usize, j: &Judgment) -> Result<u32> {
    check_agent(profile, agent)?;
    let ji = graph.require(j)?;
    let idx = graph.require_all(profile.iter())?;
    Ok(rest_distance_idx(graph, &idx, agent, ji))
}

fn rest_distance_idx(graph: &AgendaGraph, profile: &[usize], agent: usize, j: usize) -> u32 {
    profile
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != agent)
        .map(|(_, &pk)| graph.dist_idx(j, pk))
        .sum()
}

fn check_agent(profile: &Profile, agent: usize) -> Result<()> {
    if agent >= profile.agents() {
        return Err(Error::invalid(format!(
            "agent {agent} out of range for a profile of {} agents",
            profile.agents()
        )));
    }
    Ok(())
}

/// The move set of `agent` in `profile`, sorted lexicographically.
pub fn moves(
    graph: &AgendaGraph,
    profile: &Profile,
    agent: usize,
    hull_mode: HullMode,
    semantics: MoveSemantics,
) -> Result<Vec<Judgment>> {
    check_agent(profile, agent)?;
    let idx = graph.require_all(profile.iter())?;
    let hull = graph.hull_mask(&idx, hull_mode);
    Ok(moves_idx(graph, &idx, agent, &hull, semantics)
        .into_iter()
        .map(|i| graph.vertex(i))
        .collect())
}

fn moves_idx(graph: &AgendaGraph, profile: &[usize], agent: usize, hull: &[bool], semantics: MoveSemantics) -> Vec<usize> {
    let here = profile[agent];
    let current = rest_distance_idx(graph, profile, agent, here);
    let improving: Vec<(usize, u32)> = graph
        .adjacency_idx(here)
        .iter()
        .copied()
        .filter(|&c| hull[c] && graph.rational_idx(c))
        .map(|c| (c, rest_distance_idx(graph, profile, agent, c)))
        .filter(|&(_, d)| d < current)
        .collect();
    let mut chosen: Vec<usize> = match semantics {
        MoveSemantics::ArgminAdjacent => {
            let Some(best) = improving.iter().map(|&(_, d)| d).min() else {
                return Vec::new();
            };
            improving.iter().filter(|&&(_, d)| d == best).map(|&(c, _)| c).collect()
        }
        MoveSemantics::LiteralIntersection => {
            let global = (0..hull.len())
                .filter(|&c| hull[c] && graph.rational_idx(c))
                .map(|c| rest_distance_idx(graph, profile, agent, c))
                .min()
                .expect("hull contains the profile");
            improving.iter().filter(|&&(_, d)| d == global).map(|&(c, _)| c).collect()
        }
    };
    chosen.sort_unstable();
    chosen
}

/// Executes one synchronous round: every agent's move set is computed from
/// `profile` before anyone moves.
pub fn step(
    graph: &AgendaGraph,
    profile: &Profile,
    config: &IterationConfig,
    agents: &mut [AgentState],
    round: u32,
) -> Result<(Profile, RoundRecord)> {
    if agents.len() != profile.agents() {
        return Err(Error::invalid("one agent state per profile entry required"));
    }
    let idx = graph.require_all(profile.iter())?;
    let hull = graph.hull_mask(&idx, config.hull_mode);
    let moves: Vec<Vec<Judgment>> = (0..idx.len())
        .map(|i| {
            moves_idx(graph, &idx, i, &hull, config.move_semantics)
                .into_iter()
                .map(|v| graph.vertex(v))
                .collect()
        })
        .collect();
    let mut choices = Vec::with_capacity(agents.len());
    for (agent, options) in agents.iter_mut().zip(&moves) {
        let choice = agent.choose(options);
        if let Some(j) = choice {
            agent.current = j;
        }
        choices.push(choice);
    }
    let after = Profile::new(agents.iter().map(|a| a.current).collect())?;
    let record = RoundRecord {
        round,
        profile_before: profile.clone(),
        moves,
        choices,
        profile_after: after.clone(),
    };
    Ok((after, record))
}

fn validate_start(graph: &AgendaGraph, p0: &Profile) -> Result<()> {
    for j in p0.iter() {
        graph.require(j)?;
        if !graph.is_rational(j) {
            return Err(Error::Irrational(j.to_string()));
        }
    }
    Ok(())
}

fn trace_config(graph: &AgendaGraph, config: &IterationConfig, algorithm: Algorithm, max_rounds: u32) -> TraceConfig {
    TraceConfig {
        graph: graph.kind(),
        hull: config.hull_mode,
        moves: config.move_semantics,
        algorithm,
        seed: config.master_seed,
        max_rounds,
    }
}

/// Runs whichever procedure `config.algorithm` selects.
pub fn run(graph: &AgendaGraph, p0: &Profile, config: &IterationConfig) -> Result<Trace> {
    match config.algorithm {
        Algorithm::One => run_algorithm1(graph, p0, config),
        Algorithm::Two => run_algorithm2(graph, p0, config),
    }
}

/// The decentralised procedure. The loop body always executes at least
/// once, so even a unanimous start reports one round.
pub fn run_algorithm1(graph: &AgendaGraph, p0: &Profile, config: &IterationConfig) -> Result<Trace> {
    validate_start(graph, p0)?;
    let max_rounds = config.resolved_max_rounds(graph, p0)?;
    let mut agents = spawn_agents(p0, config.master_seed);
    let mut profile = p0.clone();
    let mut rounds = Vec::new();
    let mut outcome = None;
    for t in 1..=max_rounds {
        let (next, record) = step(graph, &profile, config, &mut agents, t)?;
        rounds.push(record);
        if next.is_unanimous() {
            outcome = Some(Outcome::Consensus {
                judgment: *next.get(0),
                rounds: t,
            });
            break;
        }
        if next == profile {
            outcome = Some(Outcome::FixpointNoConsensus { profile: next, rounds: t });
            break;
        }
        profile = next;
    }
    let outcome = outcome.unwrap_or(Outcome::RoundLimit {
        profile,
        rounds: max_rounds,
    });
    Ok(Trace {
        config: trace_config(graph, config, Algorithm::One, max_rounds),
        initial: p0.clone(),
        rounds,
        outcome,
    })
}

/// The centralised variant: keys its loop detection on the set of distinct
/// judgments, ignoring which agent holds which.
pub fn run_algorithm2(graph: &AgendaGraph, p0: &Profile, config: &IterationConfig) -> Result<Trace> {
    validate_start(graph, p0)?;
    let max_rounds = config.resolved_max_rounds(graph, p0)?;
    let mut agents = spawn_agents(p0, config.master_seed);
    let mut central = central_stream(config.master_seed);
    let mut seen: HashMap<JudgmentSet, u32> = HashMap::from([(p0.distinct(), 0)]);
    let mut profile = p0.clone();
    let mut rounds = Vec::new();
    let mut outcome = None;
    for t in 1..=max_rounds {
        let (next, record) = step(graph, &profile, config, &mut agents, t)?;
        rounds.push(record);
        if next.is_unanimous() {
            outcome = Some(Outcome::Algorithm2Consensus {
                judgment: *next.get(0),
                rounds: t,
                resolved_from_loop: false,
            });
            break;
        }
        let set = next.distinct();
        if let Some(&first_seen_round) = seen.get(&set) {
            let members: Vec<Judgment> = set.into_iter().collect();
            outcome = Some(if config.resolve_loops {
                Outcome::Algorithm2Consensus {
                    judgment: members[central.gen_range(0..members.len())],
                    rounds: t + 1,
                    resolved_from_loop: true,
                }
            } else {
                Outcome::LoopDetected {
                    profile_set: members,
                    first_seen_round,
                    rounds: t,
                }
            });
            break;
        }
        seen.insert(set, t);
        profile = next;
    }
    let outcome = outcome.unwrap_or(Outcome::RoundLimit {
        profile,
        rounds: max_rounds,
    });
    Ok(Trace {
        config: trace_config(graph, config, Algorithm::Two, max_rounds),
        initial: p0.clone(),
        rounds,
        outcome,
    })
}
