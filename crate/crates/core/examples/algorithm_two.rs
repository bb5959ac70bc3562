//! Two agents on the complete graph swap judgments forever; the
//! centralised variant notices the repeated judgment set and resolves it.

use iterative_ja::formula::Framework;
use iterative_ja::graph::{AgendaGraph, GraphKind};
use iterative_ja::iteration::{run_algorithm1, run_algorithm2, IterationConfig};
use iterative_ja::judgment::Profile;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = AgendaGraph::build(GraphKind::Complete, &Framework::doctrinal_paradox())?;
    let profile = Profile::parse("000\n111")?;
    let config = IterationConfig {
        max_rounds: Some(20),
        ..IterationConfig::with_seed(3)
    };

    let one = run_algorithm1(&g, &profile, &config)?;
    println!("decentralised: {:?}", one.outcome);
    for r in one.rounds.iter().take(4) {
        println!("  round {}: {} -> {}", r.round, r.profile_before, r.profile_after);
    }

    let two = run_algorithm2(&g, &profile, &config)?;
    println!("centralised: {:?}", two.outcome);

    let detect = IterationConfig {
        resolve_loops: false,
        ..config
    };
    println!("detection only: {:?}", run_algorithm2(&g, &profile, &detect)?.outcome);
    Ok(())
}
