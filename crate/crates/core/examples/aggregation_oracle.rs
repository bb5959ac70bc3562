//! The one-shot distance-based rule next to the iteration's consensus,
//! and propositional unanimity of the results.

use iterative_ja::aggregation::{check_propositional_unanimity, distance_based_rule, UnanimityStrength};
use iterative_ja::formula::Framework;
use iterative_ja::graph::{AgendaGraph, GraphKind};
use iterative_ja::iteration::{run_algorithm1, IterationConfig};
use iterative_ja::judgment::Profile;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fw = Framework::doctrinal_paradox();
    let profile = Profile::parse("010\n100\n111")?;
    for kind in GraphKind::ALL {
        let g = AgendaGraph::build(kind, &fw)?;
        let r = distance_based_rule(&g, &profile)?;
        let scores: Vec<String> = r.scores.iter().map(|(j, s)| format!("{j}:{s}")).collect();
        let winners: Vec<String> = r.winners.iter().map(ToString::to_string).collect();
        println!("{kind}: winners {{{}}} scores {}", winners.join(", "), scores.join(" "));
    }

    // Two agents sharing a rejected conclusion still end at 111 on the
    // model graph, which accepts it.
    let pair = Profile::parse("010\n100")?;
    let g = AgendaGraph::build(GraphKind::Model, &fw)?;
    for seed in 0..4 {
        let outcome = run_algorithm1(&g, &pair, &IterationConfig::with_seed(seed))?.outcome;
        if let Some(j) = outcome.consensus() {
            let weak = check_propositional_unanimity(&pair, &[j].into(), UnanimityStrength::Weak)?;
            println!("seed {seed}: consensus {j}, weak unanimity {weak}");
        } else {
            println!("seed {seed}: {}", outcome.tag());
        }
    }
    Ok(())
}
