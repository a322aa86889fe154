#![allow(dead_code)]

use online_coloring::game::{ColoringState, Transcript};

/// Recolors the first round that can be made illegal by copying an earlier color.
/// Returns the corrupted round.
pub fn corrupt_color(t: &mut Transcript) -> usize {
    let mut state = ColoringState::new(t.constraints);
    for i in 0..t.moves.len() {
        let w = t.moves[i].weighted_interval().unwrap();
        let used: Vec<usize> = state.used_colors().collect();
        if let Some(&c) = used.iter().find(|&&c| state.check(&w, c).unwrap().is_some()) {
            t.moves[i].algorithm_color = c;
            return t.moves[i].round;
        }
        state.assign(w, t.moves[i].algorithm_color).unwrap();
    }
    panic!("no move can be made illegal");
}

/// Gives one move the eps index of an overlapping move from another call.
pub fn corrupt_eps(t: &mut Transcript) -> usize {
    for i in 0..t.moves.len() {
        for j in 0..i {
            let (a, b) = (&t.moves[j], &t.moves[i]);
            if a.call != b.call
                && a.eps_index != b.eps_index
                && a.interval.as_ref().unwrap().intersects(b.interval.as_ref().unwrap())
            {
                t.moves[i].eps_index = a.eps_index;
                return t.moves[i].round;
            }
        }
    }
    panic!("no two calls overlap");
}

pub fn overstate(t: &mut Transcript) {
    t.summary.algorithm_colors += 3;
}
