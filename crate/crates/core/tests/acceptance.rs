//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`). Criteria listed in
//! `KNOWN_COUNTEREXAMPLES` are ones where the implementation finds a
//! concrete counterexample to the claimed behaviour; they print FAIL with
//! the witness and do not fail the run. Any other FAIL exits non-zero.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::time::{Duration, Instant};

use iterative_ja::aggregation::{check_propositional_unanimity, distance_based_rule, UnanimityStrength};
use iterative_ja::formula::{enumerate_models, Framework};
use iterative_ja::graph::{AgendaGraph, GraphKind, HullMode};
use iterative_ja::harness::{
    chain_framework, equidistant_triples, generate_profile, random_framework, run_cycle_framework, run_experiment,
    AgendaSource, ExperimentConfig, ExperimentReport, Filter, ProfileSource, SeedRange,
};
use iterative_ja::iteration::{run_algorithm1, run_algorithm2, Algorithm, IterationConfig, MoveSemantics, Outcome};
use iterative_ja::judgment::{Judgment, Profile};
use iterative_ja::voting::{build_preference_agenda, condorcet_winner, is_majority_consistent, parse_votes, OptionSet};

// Pinned tolerances and sweep sizes.
const ENUMERATION_LIMIT: Duration = Duration::from_millis(1);
const TRIANGLE_SEARCH_LIMIT: Duration = Duration::from_secs(5);
const UNIQUE_MODE_LIMIT: Duration = Duration::from_secs(1);
const VOTING_LIMIT: Duration = Duration::from_secs(1);
const RANDOM_AGENDAS: u64 = 24;
const MAX_RANDOM_ISSUES: usize = 6;
const DETERMINISTIC_SEEDS: u64 = 200;
const UNIQUE_MODE_PROFILES: usize = 200;
const UNIQUE_MODE_SEEDS: u64 = 5;
const ODD_AGENT_TRIALS: usize = 1000;
const ODD_AGENT_ROUND_CAP: u32 = 200;
const CLASS_TRIALS_PER_CELL: usize = 100;
const CLASS_SEEDS: u64 = 4;
const SWAP_ROUND_CAP: u32 = 100;
const ROUND_BOUND_C: f64 = 1.0;

const KNOWN_COUNTEREXAMPLES: &[u32] = &[5, 7, 10];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn j(s: &str) -> Judgment {
    s.parse().unwrap()
}

fn set(items: &[&str]) -> BTreeSet<Judgment> {
    items.iter().map(|s| j(s)).collect()
}

fn show<'a>(items: impl IntoIterator<Item = &'a Judgment>) -> String {
    let parts: Vec<String> = items.into_iter().map(Judgment::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

fn doctrinal_profile() -> Profile {
    Profile::parse("010\n100\n111").unwrap()
}

fn graph(kind: GraphKind, fw: &Framework) -> AgendaGraph {
    AgendaGraph::build(kind, fw).unwrap()
}

fn shortest_of<F: FnMut()>(runs: usize, mut f: F) -> Duration {
    (0..runs)
        .map(|_| {
            let t = Instant::now();
            f();
            t.elapsed()
        })
        .min()
        .unwrap()
}

/// Brute-force reference for the one-shot rule, sharing no code with the
/// library: rationality is a closure over raw bit patterns, distances are
/// popcounts, inequality, or a hand-rolled breadth-first search.
mod oracle {
    use std::collections::{BTreeMap, VecDeque};

    pub enum Metric {
        Hamming,
        Drastic,
        Model,
    }

    /// Bit `k` of `x` is issue `k`.
    pub fn rational(issues: usize, is_rational: impl Fn(u32) -> bool) -> Vec<u32> {
        (0..1u32 << issues).filter(|&x| is_rational(x)).collect()
    }

    fn model_distances(rational: &[u32]) -> BTreeMap<(u32, u32), u32> {
        let between = |c: u32, a: u32, b: u32| (c ^ a) & !(a ^ b) == 0;
        let adjacent = |a: u32, b: u32| a != b && !rational.iter().any(|&c| c != a && c != b && between(c, a, b));
        let mut out = BTreeMap::new();
        for &s in rational {
            let mut dist = BTreeMap::from([(s, 0u32)]);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in rational {
                    if adjacent(u, v) && !dist.contains_key(&v) {
                        dist.insert(v, dist[&u] + 1);
                        queue.push_back(v);
                    }
                }
            }
            for (v, d) in dist {
                out.insert((s, v), d);
            }
        }
        out
    }

    /// Winners and their score.
    pub fn rule(rational: &[u32], profile: &[u32], metric: Metric) -> (Vec<u32>, u32) {
        let model = model_distances(rational);
        let d = |a: u32, b: u32| match metric {
            Metric::Hamming => (a ^ b).count_ones(),
            Metric::Drastic => u32::from(a != b),
            Metric::Model => model[&(a, b)],
        };
        let scores: Vec<(u32, u32)> = rational
            .iter()
            .map(|&c| (c, profile.iter().map(|&p| d(c, p)).sum()))
            .collect();
        let best = scores.iter().map(|s| s.1).min().unwrap();
        (scores.iter().filter(|s| s.1 == best).map(|s| s.0).collect(), best)
    }
}

/// Library bitstrings put issue 0 first; the oracle uses bit k for issue k.
fn to_bits(j: &Judgment) -> u32 {
    (0..j.len()).filter(|&k| j.get(k)).map(|k| 1u32 << k).sum()
}

fn from_bits(x: u32, issues: usize) -> Judgment {
    Judgment::from_values(&(0..issues).map(|k| x >> k & 1 == 1).collect::<Vec<_>>()).unwrap()
}

fn c1() -> Verdict {
    let fw = Framework::doctrinal_paradox();
    let mut models = Vec::new();
    let elapsed = shortest_of(20, || models = enumerate_models(&fw.agenda, &fw.constraint).unwrap());
    let got: BTreeSet<Judgment> = models.into_iter().collect();
    let ok = got == set(&["000", "010", "100", "111"]) && elapsed < ENUMERATION_LIMIT;
    verdict(ok, format!("models {}, {elapsed:?} (limit {ENUMERATION_LIMIT:?})", show(&got)))
}

fn c2() -> Verdict {
    let fw = Framework::doctrinal_paradox();
    let m = doctrinal_profile().majority_judgment().unwrap();
    verdict(
        m == j("110") && !fw.is_rational(&m),
        format!("majority {m}, rational {}", fw.is_rational(&m)),
    )
}

fn c3() -> Verdict {
    let fw = Framework::doctrinal_paradox();
    let m = graph(GraphKind::Model, &fw);
    let edges: BTreeSet<(Judgment, Judgment)> = m.edges().into_iter().collect();
    let expected: BTreeSet<(Judgment, Judgment)> = [("000", "010"), ("000", "100"), ("010", "111"), ("100", "111")]
        .iter()
        .map(|(a, b)| (j(a), j(b)))
        .collect();
    let all: BTreeSet<Judgment> = m.rational_vertices().into_iter().collect();
    let four_cycle = m.is_k_cycle(&all, 4).unwrap() && edges == expected;

    let h = graph(GraphKind::Hamming, &fw);
    let hull = h.profile_hull(&doctrinal_profile(), HullMode::IntervalUnion).unwrap();
    let six = h.has_k_cycle(&hull, 6).unwrap();
    let excludes = !hull.contains(&j("001"));
    verdict(
        four_cycle && six && excludes,
        format!("model 4-cycle {four_cycle}, hull has 6-cycle {six}, hull excludes 001 {excludes}"),
    )
}

fn test_agendas() -> Vec<(String, Framework)> {
    let mut out = vec![
        ("doctrinal".to_string(), Framework::doctrinal_paradox()),
        (
            "preference3".to_string(),
            build_preference_agenda(&OptionSet::numbered(3).unwrap()).unwrap().framework,
        ),
        ("chain4".to_string(), chain_framework(4).unwrap()),
        ("runcycle4".to_string(), run_cycle_framework(4).unwrap()),
    ];
    for seed in 0..6 {
        out.push((format!("random{}#{seed}", 3 + seed % 3), random_framework(3 + seed as usize % 3, seed).unwrap()));
    }
    out
}

fn c4() -> Verdict {
    let fw = Framework::doctrinal_paradox();
    let h = graph(GraphKind::Hamming, &fw);
    let gap = h.interval_connectivity(&j("111"), &j("010")).unwrap();
    let mut bad = Vec::new();
    for (name, fw) in test_agendas() {
        for kind in [GraphKind::Complete, GraphKind::Model] {
            let g = graph(kind, &fw);
            let r = g.rational_vertices();
            for a in &r {
                for b in &r {
                    if g.interval_connectivity(a, b).unwrap() > 1 {
                        bad.push(format!("{name}/{kind} I[{a},{b}]"));
                    }
                }
            }
        }
    }
    verdict(
        gap == 2 && bad.is_empty(),
        format!("Hamming I[111,010] connectivity {gap}; non-1-connected complete/model intervals: {bad:?}"),
    )
}

fn c5() -> Verdict {
    let start = Instant::now();
    let mut hamming_hits = Vec::new();
    let mut model_hits = Vec::new();
    for seed in 0..RANDOM_AGENDAS {
        let issues = 2 + (seed as usize % (MAX_RANDOM_ISSUES - 1));
        let fw = random_framework(issues, 1000 + seed).unwrap();
        for kind in [GraphKind::Hamming, GraphKind::Model] {
            let g = graph(kind, &fw);
            let all: BTreeSet<Judgment> = g.vertices().iter().copied().collect();
            if g.induced_subgraph(&all).unwrap().has_triangle() {
                match kind {
                    GraphKind::Hamming => hamming_hits.push(format!("m={issues} seed={}", 1000 + seed)),
                    _ => model_hits.push(format!("m={issues} seed={}", 1000 + seed)),
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = hamming_hits.is_empty() && model_hits.is_empty() && elapsed < TRIANGLE_SEARCH_LIMIT;
    verdict(
        ok,
        format!(
            "{RANDOM_AGENDAS} random agendas, {elapsed:?}: Hamming triangles in {:?}; model-graph triangles in {} agendas, e.g. {:?}",
            hamming_hits,
            model_hits.len(),
            model_hits.first()
        ),
    )
}

fn c6() -> Verdict {
    let g = graph(GraphKind::Model, &Framework::doctrinal_paradox());
    let expected = Outcome::Consensus {
        judgment: j("111"),
        rounds: 1,
    };
    let bad: Vec<u64> = (0..DETERMINISTIC_SEEDS)
        .filter(|&s| run_algorithm1(&g, &doctrinal_profile(), &IterationConfig::with_seed(s)).unwrap().outcome != expected)
        .collect();
    verdict(bad.is_empty(), format!("{DETERMINISTIC_SEEDS} seeds, deviating seeds {bad:?}"))
}

fn base_config(name: &str, agenda: AgendaSource, graphs: Vec<GraphKind>, agents: Vec<usize>) -> ExperimentConfig {
    ExperimentConfig {
        name: name.into(),
        agenda,
        graphs,
        agents,
        profiles: ProfileSource::Random {
            per_cell: 15,
            max_draws: 15,
        },
        profile_seed: 11,
        seeds: SeedRange { start: 0, count: 3 },
        max_rounds: None,
        hull: HullMode::IntervalUnion,
        moves: MoveSemantics::ArgminAdjacent,
        algorithm: Algorithm::One,
        resolve_loops: true,
        filter: None,
        keep_traces: false,
        output: None,
    }
}

/// Unfiltered sweep over every graph, shared by the global checks.
fn broad_sweep() -> Vec<ExperimentReport> {
    let mut agendas = vec![
        AgendaSource::Doctrinal,
        AgendaSource::Preference { options: 3 },
        AgendaSource::Chain { issues: 4 },
        AgendaSource::RunCycle { issues: 4 },
        AgendaSource::Parity { issues: 3 },
    ];
    agendas.extend((1..=4).map(|seed| AgendaSource::Random { issues: 4, seed }));
    agendas.push(AgendaSource::Random { issues: 5, seed: 5 });
    agendas
        .into_iter()
        .map(|a| {
            let cfg = base_config("broad", a, GraphKind::ALL.to_vec(), vec![3, 4, 5, 7]);
            run_experiment(&cfg).unwrap()
        })
        .collect()
}

fn first_violation(reports: &[ExperimentReport], name: &str) -> Option<String> {
    reports
        .iter()
        .flat_map(|r| &r.violations)
        .find(|v| v.invariant == name)
        .map(|v| format!("{} {} seed {}: {}", v.graph, v.profile, v.seed, v.detail))
}

fn count_violations(reports: &[ExperimentReport], name: &str) -> usize {
    reports.iter().flat_map(|r| &r.violations).filter(|v| v.invariant == name).count()
}

fn c7(all: &[ExperimentReport]) -> Verdict {
    let g = graph(GraphKind::Hamming, &Framework::doctrinal_paradox());
    let p = doctrinal_profile();
    let stuck = (0..DETERMINISTIC_SEEDS).all(|s| {
        run_algorithm1(&g, &p, &IterationConfig::with_seed(s)).unwrap().outcome
            == Outcome::FixpointNoConsensus {
                profile: p.clone(),
                rounds: 1,
            }
    });
    let trials: usize = all.iter().map(ExperimentReport::trials).sum();
    let bad = count_violations(all, "consensus_requires_one_connected");
    verdict(
        stuck && bad == 0,
        format!(
            "Hamming doctrinal fixpoint at round 1: {stuck}; consensus from non-1-connected start in {bad} of {trials} trials, e.g. {:?}",
            first_violation(all, "consensus_requires_one_connected")
        ),
    )
}

fn c8() -> Verdict {
    let start = Instant::now();
    let agendas = test_agendas();
    let mut profiles = 0;
    let mut bad = Vec::new();
    let mut draw = 0u64;
    while profiles < UNIQUE_MODE_PROFILES {
        let (_, fw) = &agendas[draw as usize % agendas.len()];
        let g = graph(GraphKind::Complete, fw);
        let n = 3 + (draw as usize % 6);
        draw += 1;
        let p = generate_profile(&g, n, draw).unwrap();
        let Some(mode) = p.unique_plurality() else { continue };
        profiles += 1;
        for seed in 0..UNIQUE_MODE_SEEDS {
            let outcome = run_algorithm1(&g, &p, &IterationConfig::with_seed(seed)).unwrap().outcome;
            if outcome != (Outcome::Consensus { judgment: mode, rounds: 1 }) {
                bad.push(format!("{p} seed {seed}: {outcome:?}"));
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        bad.is_empty() && elapsed < UNIQUE_MODE_LIMIT,
        format!("{profiles} unique-mode profiles x {UNIQUE_MODE_SEEDS} seeds in {elapsed:?}; failures {bad:?}"),
    )
}

fn c9(all: &mut Vec<ExperimentReport>) -> Verdict {
    let mut cfg = base_config(
        "odd-complete",
        AgendaSource::Preference { options: 3 },
        vec![GraphKind::Complete],
        vec![5, 7],
    );
    let per_cell = ODD_AGENT_TRIALS / 10;
    cfg.profiles = ProfileSource::Random {
        per_cell,
        max_draws: per_cell,
    };
    cfg.seeds = SeedRange { start: 0, count: 10 };
    cfg.max_rounds = Some(ODD_AGENT_ROUND_CAP);
    let r = run_experiment(&cfg).unwrap();
    let mut detail = Vec::new();
    let mut ok = true;
    for c in &r.cells {
        let consensus = c.outcomes.get("Consensus").copied().unwrap_or(0);
        ok &= c.trials == ODD_AGENT_TRIALS && consensus == c.trials;
        detail.push(format!("n={}: {consensus}/{} consensus, max rounds {:?}", c.agents, c.trials, c.rounds.as_ref().map(|s| s.max)));
    }
    all.push(r);
    verdict(ok, detail.join("; "))
}

fn c10(all: &mut Vec<ExperimentReport>) -> Verdict {
    let agendas = [
        AgendaSource::Doctrinal,
        AgendaSource::Chain { issues: 4 },
        AgendaSource::Preference { options: 3 },
        AgendaSource::RunCycle { issues: 4 },
    ];
    let mut detail = Vec::new();
    let mut ok = true;
    let mut witness = None;
    for a in agendas {
        let mut cfg = base_config(
            "class-a-or-b",
            a.clone(),
            vec![GraphKind::Hamming, GraphKind::Model],
            vec![5, 7],
        );
        cfg.filter = Some(Filter::All(vec![Filter::OneConnected, Filter::ClassAOrB]));
        let per_cell = CLASS_TRIALS_PER_CELL.div_ceil(CLASS_SEEDS as usize);
        cfg.profiles = ProfileSource::Random {
            per_cell,
            max_draws: 4000,
        };
        cfg.seeds = SeedRange {
            start: 0,
            count: CLASS_SEEDS,
        };
        let r = run_experiment(&cfg).unwrap();
        for c in &r.cells {
            if c.trials == 0 {
                detail.push(format!("{a:?}/{} n={}: unsatisfiable", c.graph, c.agents));
                continue;
            }
            let consensus = c.outcomes.get("Consensus").copied().unwrap_or(0);
            ok &= consensus == c.trials;
            if consensus < c.trials {
                detail.push(format!("{a:?}/{} n={}: {consensus}/{}", c.graph, c.agents, c.trials));
                witness = witness.or_else(|| {
                    r.rows
                        .iter()
                        .find(|row| row.graph == c.graph && row.agents == c.agents && row.consensus.is_none())
                        .map(|row| format!("{} {} seed {} -> {}", row.graph, row.profile, row.seed, row.outcome))
                });
            }
        }
        all.push(r);
    }
    if ok {
        detail.push("all satisfiable cells reach consensus".into());
    }
    verdict(ok, format!("{}; witness {witness:?}", detail.join("; ")))
}

fn c11() -> Verdict {
    let mut detail = Vec::new();
    let mut ok = true;
    for issues in [3, 6, 9] {
        let g = graph(GraphKind::Model, &run_cycle_framework(issues).unwrap());
        let triples: Vec<Profile> = equidistant_triples(&g)
            .unwrap()
            .into_iter()
            .filter(|p| g.classify_profile(p, HullMode::IntervalUnion).unwrap().hull_is_cycle)
            .collect();
        let mut stuck = 0;
        for p in &triples {
            for seed in 0..5 {
                let t = run_algorithm1(&g, p, &IterationConfig::with_seed(seed)).unwrap();
                let empty = t.rounds[0].moves.iter().all(Vec::is_empty);
                if empty && matches!(t.outcome, Outcome::FixpointNoConsensus { rounds: 1, .. }) {
                    stuck += 1;
                }
            }
        }
        ok &= !triples.is_empty() && stuck == triples.len() * 5;
        detail.push(format!("{}-cycle: {stuck}/{} stuck", 2 * issues, triples.len() * 5));
    }
    verdict(ok, detail.join("; "))
}

fn c12(all: &[ExperimentReport]) -> Verdict {
    let hamming_consensus = all
        .iter()
        .flat_map(|r| &r.rows)
        .filter(|row| row.graph == GraphKind::Hamming && row.consensus.is_some())
        .count();
    let bad = count_violations(all, "strong_unanimity");

    let g = graph(GraphKind::Model, &Framework::doctrinal_paradox());
    let pair = Profile::parse("010\n100").unwrap();
    let violating = (0..50u64).find(|&seed| {
        let outcome = run_algorithm1(&g, &pair, &IterationConfig::with_seed(seed)).unwrap().outcome;
        outcome.consensus() == Some(j("111"))
    });
    let weak = check_propositional_unanimity(&pair, &set(&["111"]), UnanimityStrength::Weak).unwrap();
    verdict(
        bad == 0 && hamming_consensus > 0 && violating.is_some() && !weak,
        format!(
            "{hamming_consensus} Hamming consensuses, {bad} drop a unanimous issue; two-agent model run reaches 111 at seed {violating:?}, weak unanimity {weak}"
        ),
    )
}

fn c13() -> Verdict {
    let fw = Framework::doctrinal_paradox();
    let p = doctrinal_profile();
    let expected = [
        (GraphKind::Hamming, oracle::Metric::Hamming, set(&["010", "100", "111"]), 4),
        (GraphKind::Model, oracle::Metric::Model, set(&["111"]), 2),
        (GraphKind::Complete, oracle::Metric::Drastic, set(&["010", "100", "111"]), 2),
    ];
    let rational = oracle::rational(3, |x| (x & 1 == 1 && x & 2 == 2) == (x & 4 == 4));
    let bits: Vec<u32> = p.iter().map(to_bits).collect();
    let mut ok = true;
    let mut detail = Vec::new();
    for (kind, metric, winners, score) in expected {
        let (ow, os) = oracle::rule(&rational, &bits, metric);
        let oracle_set: BTreeSet<Judgment> = ow.iter().map(|&x| from_bits(x, 3)).collect();
        let lib = distance_based_rule(&graph(kind, &fw), &p).unwrap();
        let agree = oracle_set == winners && os == score && lib.winners == winners && lib.winning_score() == score;
        ok &= agree;
        detail.push(format!("{kind}: {} score {}", show(&lib.winners), lib.winning_score()));
    }

    // Wider cross-check on random agendas and profiles.
    let mut mismatches = 0;
    for seed in 0..12u64 {
        let issues = 3 + seed as usize % 3;
        let fw = random_framework(issues, 500 + seed).unwrap();
        let rational: Vec<u32> = fw.models().unwrap().iter().map(to_bits).collect();
        for (kind, metric) in [
            (GraphKind::Hamming, oracle::Metric::Hamming),
            (GraphKind::Model, oracle::Metric::Model),
            (GraphKind::Complete, oracle::Metric::Drastic),
        ] {
            let g = graph(kind, &fw);
            let p = generate_profile(&g, 5, seed).unwrap();
            let (ow, os) = oracle::rule(&rational, &p.iter().map(to_bits).collect::<Vec<_>>(), metric);
            let lib = distance_based_rule(&g, &p).unwrap();
            let oracle_set: BTreeSet<Judgment> = ow.iter().map(|&x| from_bits(x, issues)).collect();
            if oracle_set != lib.winners || os != lib.winning_score() {
                mismatches += 1;
            }
        }
    }
    ok &= mismatches == 0;
    detail.push(format!("random cross-check mismatches {mismatches}/36"));
    verdict(ok, detail.join("; "))
}

fn c14(all: &mut Vec<ExperimentReport>) -> Verdict {
    let g = graph(GraphKind::Complete, &Framework::doctrinal_paradox());
    let p = Profile::parse("000\n111").unwrap();
    let cfg = IterationConfig {
        max_rounds: Some(SWAP_ROUND_CAP),
        ..IterationConfig::with_seed(5)
    };
    let one = run_algorithm1(&g, &p, &cfg).unwrap().outcome;
    let two = run_algorithm2(&g, &p, &cfg).unwrap().outcome;
    let swap_ok = matches!(one, Outcome::RoundLimit { rounds, .. } if rounds == SWAP_ROUND_CAP)
        && matches!(
            two,
            Outcome::Algorithm2Consensus {
                rounds: 2,
                resolved_from_loop: true,
                ..
            }
        );

    let mut worst: f64 = 0.0;
    let mut within = true;
    let mut trials = 0;
    for a in [
        AgendaSource::Doctrinal,
        AgendaSource::Preference { options: 3 },
        AgendaSource::RunCycle { issues: 4 },
        AgendaSource::Random { issues: 4, seed: 1 },
        AgendaSource::Random { issues: 5, seed: 3 },
    ] {
        let mut cfg = base_config("algorithm-two", a, vec![GraphKind::Hamming], vec![5, 7]);
        cfg.algorithm = Algorithm::Two;
        cfg.filter = Some(Filter::All(vec![
            Filter::OneConnected,
            Filter::Not(Box::new(Filter::Equidistant)),
        ]));
        cfg.profiles = ProfileSource::Random {
            per_cell: 20,
            max_draws: 4000,
        };
        let r = run_experiment(&cfg).unwrap();
        for row in &r.rows {
            let c = f64::from(row.rounds) / (r.issues * row.agents) as f64;
            within &= c <= ROUND_BOUND_C && row.consensus.is_some();
        }
        trials += r.rows.len();
        worst = worst.max(r.fitted_c().unwrap_or(0.0));
        all.push(r);
    }
    verdict(
        swap_ok && within && trials > 0,
        format!(
            "swap: algorithm 1 {}, algorithm 2 {} on {:?} after {} rounds; {trials} Hamming runs, fitted c = {worst:.3} (bound {ROUND_BOUND_C})",
            one.tag(),
            two.tag(),
            two.consensus().map(|j| j.to_string()),
            two.rounds()
        ),
    )
}

fn bfs_hamming_among(rational: &[Judgment], s: Judgment) -> BTreeMap<Judgment, u32> {
    let mut dist = BTreeMap::from([(s, 0)]);
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for v in rational {
            let d = (to_bits(&u) ^ to_bits(v)).count_ones();
            if d == 1 && !dist.contains_key(v) {
                dist.insert(*v, dist[&u] + 1);
                q.push_back(*v);
            }
        }
    }
    dist
}

fn c15() -> Verdict {
    let start = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for m in [3usize, 4] {
        let pa = build_preference_agenda(&OptionSet::numbered(m).unwrap()).unwrap();
        let models = pa.framework.models().unwrap();
        let fact: usize = (1..=m).product();
        let h = graph(GraphKind::Hamming, &pa.framework);
        let mg = graph(GraphKind::Model, &pa.framework);
        let mut equal = true;
        let mut degrees = BTreeSet::new();
        for a in &models {
            let among = bfs_hamming_among(&models, *a);
            degrees.insert(models.iter().filter(|b| among.get(b) == Some(&1)).count());
            for b in &models {
                let dh = h.path_distance(a, b).unwrap();
                equal &= dh == mg.path_distance(a, b).unwrap() && among.get(b) == Some(&dh);
            }
        }
        let cycle = m != 3 || h.is_k_cycle(&models.iter().copied().collect(), 6).unwrap();
        let good = models.len() == fact && equal && degrees == BTreeSet::from([m - 1]) && cycle;
        ok &= good;
        detail.push(format!("m={m}: {} models, dh=dm {equal}, degrees {degrees:?}, 6-cycle {cycle}", models.len()));
    }
    let dp = Framework::doctrinal_paradox();
    let dp_consistent = is_majority_consistent(&doctrinal_profile(), &dp.constraint).unwrap();
    let options = OptionSet::numbered(3).unwrap();
    let pa = build_preference_agenda(&options).unwrap();
    let votes = parse_votes("x1>x2>x3\nx2>x3>x1\nx3>x1>x2", &options).unwrap();
    let cyc = pa.votes_to_profile(&votes).unwrap();
    let cyc_consistent = is_majority_consistent(&cyc, &pa.framework.constraint).unwrap();
    let elapsed = start.elapsed();
    ok &= !dp_consistent && !cyc_consistent && condorcet_winner(&votes).is_none() && elapsed < VOTING_LIMIT;
    detail.push(format!(
        "doctrinal majority-consistent {dp_consistent}; cycle profile {cyc} majority-consistent {cyc_consistent}; {elapsed:?}"
    ));
    verdict(ok, detail.join("; "))
}

fn c16() -> Verdict {
    let g = graph(GraphKind::Complete, &Framework::doctrinal_paradox());
    let p = Profile::parse("000\n010\n100\n111\n000\n010\n111").unwrap();
    let cfg = IterationConfig::with_seed(99);
    let traces_equal = run_algorithm1(&g, &p, &cfg).unwrap().to_json() == run_algorithm1(&g, &p, &cfg).unwrap().to_json();
    let mut ecfg = base_config(
        "determinism",
        AgendaSource::Random { issues: 4, seed: 2 },
        GraphKind::ALL.to_vec(),
        vec![4, 5],
    );
    ecfg.algorithm = Algorithm::Two;
    let a = run_experiment(&ecfg).unwrap();
    let b = run_experiment(&ecfg).unwrap();
    let reports_equal = a.to_json() == b.to_json() && a.to_csv() == b.to_csv();
    verdict(
        traces_equal && reports_equal,
        format!("trace bytes equal {traces_equal}, report bytes equal {reports_equal}"),
    )
}

fn main() {
    let mut reports = broad_sweep();
    let mut results: Vec<(u32, &str, Verdict)> = vec![
        (1, "doctrinal enumeration", c1()),
        (2, "majority failure", c2()),
        (3, "graph shapes", c3()),
        (4, "interval connectivity", c4()),
        (5, "no triangles in Hamming or model graphs", c5()),
        (6, "model-graph doctrinal consensus", c6()),
    ];
    let c8v = c8();
    let c9v = c9(&mut reports);
    let c10v = c10(&mut reports);
    let c11v = c11();
    let c13v = c13();
    let c14v = c14(&mut reports);
    let c15v = c15();
    let c16v = c16();
    // The global checks see every sweep above.
    results.push((7, "consensus only from 1-connected starts", c7(&reports)));
    results.extend([
        (8, "unique mode on the complete graph", c8v),
        (9, "odd agents on the complete graph", c9v),
        (10, "tree / max-degree-two hulls", c10v),
        (11, "equidistant three-agent cycles", c11v),
        (12, "propositional unanimity", c12(&reports)),
        (13, "one-shot rule oracle", c13v),
        (14, "centralised loop resolution", c14v),
        (15, "voting embedding", c15v),
        (16, "determinism", c16v),
    ]);
    results.sort_by_key(|r| r.0);

    let mut unexpected = Vec::new();
    for (id, name, v) in &results {
        let status = if v.pass { "PASS" } else { "FAIL" };
        println!("{status} {id:>2} {name}: {}", v.detail);
        if !v.pass && !KNOWN_COUNTEREXAMPLES.contains(id) {
            unexpected.push(*id);
        }
        if v.pass && KNOWN_COUNTEREXAMPLES.contains(id) {
            println!("     note: criterion {id} is listed as a known counterexample but passed");
        }
    }
    let passed = results.iter().filter(|r| r.2.pass).count();
    println!("acceptance: {passed}/{} PASS", results.len());
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
