//! Intervals, convex hulls, connectivity and the tree / max-degree-two
//! classes of a profile.

use iterative_ja::formula::Framework;
use iterative_ja::graph::{AgendaGraph, GraphKind, HullMode};
use iterative_ja::judgment::{Judgment, Profile};

fn show(js: impl IntoIterator<Item = Judgment>) -> String {
    js.into_iter().map(|j| j.to_string()).collect::<Vec<_>>().join(" ")
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fw = Framework::doctrinal_paradox();
    let profile = Profile::parse("010\n100\n111")?;
    let (a, b): (Judgment, Judgment) = ("111".parse()?, "010".parse()?);

    let h = AgendaGraph::build(GraphKind::Hamming, &fw)?;
    println!("Hamming I[{a},{b}] = {}", show(h.interval(&a, &b)?));
    println!("  connectivity {} (strict reading {})", h.interval_connectivity(&a, &b)?, h.interval_max_gap(&a, &b)?);

    for kind in [GraphKind::Hamming, GraphKind::Model] {
        let g = AgendaGraph::build(kind, &fw)?;
        for mode in [HullMode::IntervalUnion, HullMode::Closure] {
            let c = g.classify_profile(&profile, mode)?;
            println!(
                "{kind} {mode:?}: hull [{}] one_connected={} class_a={} class_b={} cycles={:?}",
                show(c.hull.iter().copied()),
                c.one_connected,
                c.class_a,
                c.class_b,
                c.hull_cycles
            );
        }
        let distinct = profile.distinct();
        println!("  diameter {} peripherals [{}]", g.diameter(&distinct)?, show(g.peripherals(&distinct)?));
    }
    Ok(())
}
