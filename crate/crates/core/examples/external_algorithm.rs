// An Algorithm living in another process. This one is a shell loop that answers every
// request with a new color.

use online_coloring::algorithms::AlgorithmKind;
use online_coloring::harness::{self, PlayConfig, StrategyKind};

const FRESH: &str = r#"read header; n=0; while read req; do n=$((n+1)); echo "{\"color\":$n}"; done"#;

pub fn run_example() -> online_coloring::Result<()> {
    let cfg = PlayConfig::new(StrategyKind::HsCall, AlgorithmKind::External(FRESH.into())).d(8);
    let res = harness::play(&cfg)?;
    println!("{}", res.summary_line());
    Ok(())
}

#[allow(dead_code)]
fn main() -> online_coloring::Result<()> {
    run_example()
}
