//! Ranked votes as judgments over the preference agenda.

use iterative_ja::graph::{AgendaGraph, GraphKind};
use iterative_ja::voting::{
    build_preference_agenda, condorcet_winner, is_majority_consistent, parse_votes, OptionSet,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let options = OptionSet::numbered(3)?;
    let pa = build_preference_agenda(&options)?;
    print!("{}", pa.framework.to_text());

    let h = AgendaGraph::build(GraphKind::Hamming, &pa.framework)?;
    let rational = h.rational_vertices().into_iter().collect();
    println!(
        "{} linear orders, Hamming restriction is a 6-cycle: {}",
        pa.framework.models()?.len(),
        h.is_k_cycle(&rational, 6)?
    );

    for file in [include_str!("data/condorcet_cycle.txt"), "x2>x1>x3\nx2>x3>x1\nx1>x2>x3"] {
        let votes = parse_votes(file, &options)?;
        let profile = pa.votes_to_profile(&votes)?;
        let winner = condorcet_winner(&votes).map(|w| options.name(w).to_string());
        println!(
            "profile {profile}: majority consistent {}, Condorcet winner {}",
            is_majority_consistent(&profile, &pa.framework.constraint)?,
            winner.as_deref().unwrap_or("none")
        );
    }
    Ok(())
}
