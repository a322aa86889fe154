// Transcripts are plain JSON. Verification replays them; edits are caught.

use online_coloring::algorithms::AlgorithmKind;
use online_coloring::game::{Cardinality, Transcript};
use online_coloring::harness::{self, PlayConfig, StrategyKind};
use online_coloring::verify::verify_str;

pub fn run_example() -> online_coloring::Result<()> {
    let cfg = PlayConfig::new(StrategyKind::Sm, AlgorithmKind::RandomFit(7))
        .m(2)
        .d(4)
        .k(Cardinality::Unbounded);
    let json = harness::play(&cfg)?.transcript.to_json();
    println!("clean: {}", verify_str(&json).to_json());

    let mut t = Transcript::from_json(&json)?;
    t.summary.algorithm_colors += 1;
    println!("overstated summary: {}", verify_str(&t.to_json()).to_json());

    let mut t = Transcript::from_json(&json)?;
    t.moves[1].algorithm_color = t.moves[0].algorithm_color;
    println!("copied color: {}", verify_str(&t.to_json()).to_json());
    Ok(())
}

#[allow(dead_code)]
fn main() -> online_coloring::Result<()> {
    run_example()
}
