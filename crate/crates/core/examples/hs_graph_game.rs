// The graph game: the Presenter builds a graph vertex by vertex and forces a First-Fit
// Algorithm to use many colors while it colors the same graph with few.

use online_coloring::algorithms::GraphFirstFit;
use online_coloring::game::Cardinality;
use online_coloring::hs_graph::{self, play_hs_graph};

pub fn run_example() -> online_coloring::Result<()> {
    for k in [Cardinality::Finite(2), Cardinality::Unbounded] {
        let out = play_hs_graph(k, 64, &mut GraphFirstFit)?;
        println!(
            "n=64 k={k}: b={} algorithm colors {} (at least {}), presenter colors {} (at most {}), proven bound {}",
            out.hs.b(),
            out.algorithm_colors,
            out.guarantee,
            out.presenter_colors,
            out.presenter_bound,
            hs_graph::paper_bound_hs(64),
        );
        // column patterns of the progress matrix after the game
        let patterns: Vec<_> = out
            .hs
            .matrix()
            .column_patterns()
            .take(5)
            .map(|(c, p)| (c, p.rows().to_vec()))
            .collect();
        println!("  first columns: {patterns:?}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> online_coloring::Result<()> {
    run_example()
}
