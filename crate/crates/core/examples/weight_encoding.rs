// Encoding a graph as weighted copies of one interval: a color class is feasible exactly
// when its vertices are independent.

use online_coloring::game::{Cardinality, ColoringState, GameConstraints, Interval, WeightedInterval};
use online_coloring::hs_interval::{encode_weights, EncoderParams};
use online_coloring::rational;

pub fn run_example() -> online_coloring::Result<()> {
    // path 1 - 2 - 3 plus an isolated vertex 4, neighbors listed for earlier vertices only
    let earlier: [&[usize]; 4] = [&[], &[1], &[2], &[]];
    let d = earlier.len();
    let region = Interval::new(rational::zero(), rational::one())?;
    let params = EncoderParams::at_level(d, 1, region.clone())?;
    println!(
        "d={d} eps={} alpha={} delta={}",
        rational::format(&params.eps),
        rational::format(&params.alpha),
        rational::format(&params.delta)
    );
    let intervals: Vec<WeightedInterval> = earlier
        .iter()
        .enumerate()
        .map(|(i, nb)| WeightedInterval::new(i + 1, region.clone(), Some(encode_weights(i + 1, nb, &params))))
        .collect();
    for w in &intervals {
        let ws: Vec<String> = w
            .weights
            .as_ref()
            .unwrap()
            .coords()
            .iter()
            .map(rational::format)
            .collect();
        println!("vertex {}: {ws:?}", w.id);
    }

    let constraints = GameConstraints::new(d, Cardinality::Unbounded);
    for (a, b) in [(1, 2), (1, 3), (2, 3), (3, 4)] {
        let mut state = ColoringState::new(constraints);
        let mut first = intervals[a - 1].clone();
        first.id = 1;
        state.assign(first, 0)?;
        let mut second = intervals[b - 1].clone();
        second.id = 2;
        println!("vertices {a},{b} share a color: {}", state.can_assign(&second, 0)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> online_coloring::Result<()> {
    run_example()
}
