// A small sweep over d, m and algorithms, printed as CSV.

use online_coloring::algorithms::AlgorithmKind;
use online_coloring::game::Cardinality;
use online_coloring::harness::{table, table_csv, StrategyKind, TableSpec};
use online_coloring::strategy_sm::DEFAULT_REGION_CAP;

pub fn run_example() -> online_coloring::Result<()> {
    let spec = TableSpec {
        strategy: StrategyKind::Sm,
        ds: vec![4, 8, 16],
        ms: vec![1, 2],
        ks: vec![Cardinality::Unbounded, Cardinality::Finite(4)],
        algorithms: vec![AlgorithmKind::FirstFit, AlgorithmKind::RandomFit(1)],
        region_cap: DEFAULT_REGION_CAP,
    };
    print!("{}", table_csv(&table(&spec))?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> online_coloring::Result<()> {
    run_example()
}
