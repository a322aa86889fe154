// S_2 with d = 16, k = 4 against First-Fit: nested regions, the repeated color set and the
// closing calls.

use online_coloring::algorithms::FirstFit;
use online_coloring::game::{Cardinality, GameConstraints, Referee};
use online_coloring::strategy_sm::{self, run_sm, SmConfig};

pub fn run_example() -> online_coloring::Result<()> {
    let (m, d, k) = (2, 16, Cardinality::Finite(4));
    let mut alg = FirstFit;
    let mut referee = Referee::new(GameConstraints::new(d, k), &mut alg);
    let out = run_sm(&SmConfig::new(m, d, k), &mut referee)?;
    println!("rounds {}, sub-regions used {}", referee.round(), out.regions_used());
    if let Some(q) = &out.quadruple {
        println!(
            "repeated color set {:?} in regions {:?}, {:?}",
            q.colors, q.regions, out.case_taken
        );
    }
    for (role, call) in &out.k_calls {
        println!(
            "  {role:?}: eps index {}, region {}, {} algorithm colors",
            call.eps_index,
            call.region,
            call.distinct_algorithm_colors()
        );
    }
    println!(
        "distinct colors {} >= guarantee {} (proven bound {})",
        out.distinct_colors,
        out.guarantee,
        strategy_sm::paper_bound_sm(m, d)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> online_coloring::Result<()> {
    run_example()
}
