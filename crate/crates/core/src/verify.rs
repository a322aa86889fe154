//! Independent re-checking of transcripts.
//!
//! Order of checks: legality of every Algorithm move, call geometry, a replay of the
//! strategy against the recorded colors (which re-runs its assertions), the summary and the
//! witness coloring. The first failing stage decides the exit code.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algorithms::Replay;
use crate::error::{Error, Result};
use crate::game::{Cardinality, ColoringState, StrategySpec, Transcript};
use crate::harness::{run_strategy, summarize, Player};
use crate::witness;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub exit_code: i32,
    pub stage: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub round: Option<usize>,
    pub mismatches: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub algorithm_colors: usize,
    pub witness_colors: Option<usize>,
    pub palette_count: Option<usize>,
    pub paper_colorability_bound: Option<usize>,
    pub witness_valid: bool,
}

impl VerifyReport {
    fn fail(mut self, stage: &'static str, err: Error) -> Self {
        self.ok = false;
        self.stage = stage;
        self.exit_code = err.exit_code();
        self.round = match &err {
            Error::IllegalMove { round, .. }
            | Error::IllegalAlgorithmMove { round, .. }
            | Error::WitnessInvalid { round, .. } => Some(*round),
            _ => None,
        };
        self.error = Some(err.to_string());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Parses and verifies a transcript file's contents.
pub fn verify_str(s: &str) -> VerifyReport {
    match Transcript::from_json(s) {
        Ok(t) => verify_transcript(&t),
        Err(e) => blank().fail("parse", e),
    }
}

fn blank() -> VerifyReport {
    VerifyReport {
        ok: true,
        exit_code: 0,
        stage: "done",
        round: None,
        mismatches: Vec::new(),
        error: None,
        algorithm_colors: 0,
        witness_colors: None,
        palette_count: None,
        paper_colorability_bound: None,
        witness_valid: false,
    }
}

pub fn verify_transcript(t: &Transcript) -> VerifyReport {
    let mut report = blank();
    let graph = matches!(t.strategy, StrategySpec::HsGraph { .. });

    match check_legality(t, graph) {
        Ok(n) => report.algorithm_colors = n,
        Err(e) => return report.fail("legality", e),
    }
    if !graph {
        if let Err(e) = witness::build_call_graph(t) {
            return report.fail("calls", e);
        }
    }

    let mut replay = Replay::new(&t.moves);
    let player = if graph {
        Player::Graph(&mut replay)
    } else {
        Player::Interval(&mut replay)
    };
    let played = match run_strategy(t.constraints, &t.strategy, player) {
        Ok(p) => p,
        Err(e) => {
            let mut r = report.fail("replay", e);
            r.exit_code = 1;
            return r;
        }
    };
    if played.moves != t.moves {
        let first = played
            .moves
            .iter()
            .zip(&t.moves)
            .find(|(a, b)| a != b)
            .map_or(played.moves.len().min(t.moves.len()) + 1, |(a, _)| a.round);
        report
            .mismatches
            .push(format!("strategy replay diverges at round {first}"));
    }
    if played.calls != t.calls {
        report.mismatches.push("call table differs from the strategy's".into());
    }

    let w = match witness::witness_coloring(t) {
        Ok(w) => w,
        Err(e) => return report.fail("witness", e),
    };
    report.witness_colors = Some(w.witness_colors);
    report.palette_count = w.palette_count;
    report.paper_colorability_bound = w.paper_colorability_bound;
    report.witness_valid = true;

    let expected = summarize(&played, &w);
    let got = &t.summary;
    let fields = [
        (
            "algorithm_colors",
            Some(expected.algorithm_colors),
            Some(got.algorithm_colors),
        ),
        ("guarantee", Some(expected.guarantee), Some(got.guarantee)),
        ("paper_bound", Some(expected.paper_bound), Some(got.paper_bound)),
        (
            "witness_colors",
            Some(expected.witness_colors),
            Some(got.witness_colors),
        ),
        ("witness_valid", Some(1), Some(usize::from(got.witness_valid))),
        ("palette_count", expected.palette_count, got.palette_count),
        (
            "paper_colorability_bound",
            expected.paper_colorability_bound,
            got.paper_colorability_bound,
        ),
    ];
    for (name, want, have) in fields {
        if want != have {
            report
                .mismatches
                .push(format!("summary {name}: recorded {have:?}, recomputed {want:?}"));
        }
    }

    if !report.mismatches.is_empty() {
        report.ok = false;
        report.exit_code = 1;
        report.stage = "compare";
    }
    report
}

/// Replays every Algorithm color through the rules; returns the distinct color count.
fn check_legality(t: &Transcript, graph: bool) -> Result<usize> {
    if graph {
        let k = t.constraints.k;
        let mut colors: Vec<usize> = Vec::with_capacity(t.moves.len());
        let mut uses: BTreeMap<usize, u32> = BTreeMap::new();
        for mv in &t.moves {
            let c = mv.algorithm_color;
            let adj = mv.adjacent_to.as_deref().unwrap_or(&[]);
            if let Some(&u) = adj.iter().find(|&&u| u == 0 || u >= mv.round || colors[u - 1] == c) {
                return Err(Error::IllegalAlgorithmMove {
                    round: mv.round,
                    reason: format!("color {c} clashes with vertex {u}"),
                });
            }
            let count = uses.entry(c).or_default();
            *count += 1;
            if let Cardinality::Finite(k) = k {
                if *count > k {
                    return Err(Error::IllegalAlgorithmMove {
                        round: mv.round,
                        reason: format!("color {c} used more than {k} times"),
                    });
                }
            }
            colors.push(c);
        }
        return Ok(uses.len());
    }
    let mut state = ColoringState::new(t.constraints);
    for mv in &t.moves {
        let w = mv.weighted_interval()?;
        w.check_dimension(&t.constraints)?;
        state.assign(w, mv.algorithm_color)?;
    }
    Ok(state.distinct_colors())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::AlgorithmKind;
    use crate::harness::{play, PlayConfig, StrategyKind};

    fn unit_transcript() -> Transcript {
        let cfg = PlayConfig::new(StrategyKind::Unit, AlgorithmKind::FirstFit).m(2).d(4);
        play(&cfg).unwrap().transcript
    }

    #[test]
    fn clean_transcript_passes() {
        let r = verify_transcript(&unit_transcript());
        assert!(r.ok, "{r:?}");
        assert_eq!(r.exit_code, 0);
        assert!(r.witness_valid);
    }

    #[test]
    fn overstated_summary_fails() {
        let mut t = unit_transcript();
        t.summary.algorithm_colors += 5;
        let r = verify_transcript(&t);
        assert_eq!(r.exit_code, 1);
        assert_eq!(r.stage, "compare");
    }

    #[test]
    fn malformed_is_three() {
        assert_eq!(verify_str("{").exit_code, 3);
    }

    #[test]
    fn graph_illegal_color() {
        let cfg = PlayConfig::new(StrategyKind::HsGraph, AlgorithmKind::GraphFirstFit).n(8);
        let mut t = play(&cfg).unwrap().transcript;
        assert!(verify_transcript(&t).ok);
        let (round, nb) = t
            .moves
            .iter()
            .find_map(|m| m.adjacent_to.as_ref().and_then(|a| a.first()).map(|&u| (m.round, u)))
            .unwrap();
        t.moves[round - 1].algorithm_color = t.moves[nb - 1].algorithm_color;
        let r = verify_transcript(&t);
        assert_eq!((r.exit_code, r.round), (2, Some(round)));
    }
}
