//! The complete, Hamming and model graphs of one agenda, with their
//! adjacency and path distances.

use iterative_ja::formula::Framework;
use iterative_ja::graph::{AgendaGraph, GraphKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fw = Framework::doctrinal_paradox();
    for kind in GraphKind::ALL {
        let g = AgendaGraph::build(kind, &fw)?;
        println!("== {kind}: {} vertices, {} edges", g.vertex_count(), g.edge_count());
        print!("{}", g.to_adjacency_text());
        let rational = g.rational_vertices();
        for a in &rational {
            let row: Vec<String> = rational
                .iter()
                .map(|b| g.path_distance(a, b).map(|d| d.to_string()))
                .collect::<Result<_, _>>()?;
            println!("  d({a}, .) = {}", row.join(" "));
        }
    }
    Ok(())
}
