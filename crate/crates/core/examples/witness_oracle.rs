// Off-line colorings: the palette witness of a whole game, and the exact optimum of short
// prefixes by brute force.

use online_coloring::algorithms::AlgorithmKind;
use online_coloring::game::{Cardinality, Move};
use online_coloring::harness::{self, PlayConfig, StrategyKind};

pub fn run_example() -> online_coloring::Result<()> {
    let cfg = PlayConfig::new(StrategyKind::Unit, AlgorithmKind::FirstFit)
        .m(2)
        .d(4)
        .k(Cardinality::Finite(2));
    let res = harness::play(&cfg)?;
    let w = &res.witness;
    println!(
        "algorithm used {} colors; witness uses {} with {:?} palettes (bound {}, colorability bound {:?})",
        res.transcript.summary.algorithm_colors, w.witness_colors, w.palette_count, w.bound, w.paper_colorability_bound
    );

    let t = &res.transcript;
    for len in [4, 8, 12] {
        let prefix = t.moves[..len]
            .iter()
            .map(Move::weighted_interval)
            .collect::<online_coloring::Result<Vec<_>>>()?;
        let r = harness::oracle_on(&prefix, &t.constraints, &w.colors[..len], 12)?;
        println!(
            "first {len} rounds: clique {} <= optimum {} <= witness {}",
            r.point_clique_bound, r.brute_force, r.witness_colors
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> online_coloring::Result<()> {
    run_example()
}
