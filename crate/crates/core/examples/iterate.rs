//! Runs the decentralised iteration on the doctrinal profile over every
//! graph and prints the round-by-round trace.

use iterative_ja::formula::Framework;
use iterative_ja::graph::{AgendaGraph, GraphKind};
use iterative_ja::iteration::{moves, run_algorithm1, IterationConfig};
use iterative_ja::judgment::Profile;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(7);
    let fw = Framework::doctrinal_paradox();
    let profile = Profile::parse("010\n100\n111")?;
    let config = IterationConfig::with_seed(seed);

    for kind in GraphKind::ALL {
        let g = AgendaGraph::build(kind, &fw)?;
        println!("== {kind}");
        for i in 0..profile.agents() {
            let m = moves(&g, &profile, i, config.hull_mode, config.move_semantics)?;
            let m: Vec<String> = m.iter().map(ToString::to_string).collect();
            println!("  agent {i} at {} may move to {{{}}}", profile.get(i), m.join(", "));
        }
        let trace = run_algorithm1(&g, &profile, &config)?;
        for r in &trace.rounds {
            println!("  round {}: {} -> {}", r.round, r.profile_before, r.profile_after);
        }
        println!("  outcome: {:?}", trace.outcome);
    }
    Ok(())
}
