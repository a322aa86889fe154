// The unit-interval strategy for m = 2, d = 8, k = 2: separation by binary search and the
// final calls left of P.

use online_coloring::algorithms::FirstFit;
use online_coloring::game::{Cardinality, GameConstraints, Referee};
use online_coloring::rational;
use online_coloring::strategy_unit::run_unit;

pub fn run_example() -> online_coloring::Result<()> {
    let mut alg = FirstFit;
    let mut referee = Referee::new(GameConstraints::new(8, Cardinality::Finite(2)), &mut alg);
    let out = run_unit(2, &mut referee)?;
    println!("C_init = {:?}", out.c_init);
    for s in &out.subphases {
        println!(
            "subphase {}: window ({}, {}), colors outside C_init {:?}, marked {}",
            s.index,
            rational::format(&s.window.0),
            rational::format(&s.window.1),
            s.colors_outside,
            s.marked
        );
    }
    println!("P = {}, C_sep = {:?}", rational::format(&out.p), out.c_sep);
    println!("distinct colors {} >= guarantee {}", out.distinct_colors, out.guarantee);
    Ok(())
}

#[allow(dead_code)]
fn main() -> online_coloring::Result<()> {
    run_example()
}
