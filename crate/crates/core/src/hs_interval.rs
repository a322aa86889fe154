//! HS_{k,d}(eps, L, R): the graph strategy with n = d, each vertex shown as an interval
//! carrying a d-dimensional weight vector.
//!
//! Vertex t gets `alpha = 1 - eps/2` in coordinate t, `eps` in the coordinates of its earlier
//! neighbors and `delta = eps/(2d)` everywhere else. Two same-call intervals can then share a
//! color exactly when their vertices are non-adjacent, and any interval from a finer call
//! (larger eps index) conflicts with every intersecting interval of a coarser one.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::game::{CallTag, Cardinality, Interval, MoveRequest, Phase, Referee, WeightVector};
use crate::hs_graph::{self, HsGraph};
use crate::rational::{self, Rational};

/// `(2d)^-i`, the i-th rung of the eps ladder.
pub fn epsilon(d: usize, i: u32) -> Rational {
    rational::inverse_power(2 * d as u64, i)
}

/// Active rows of the inner graph game: `floor(log2 d) + 3`.
pub fn rows_for(d: usize) -> usize {
    hs_graph::active_row_count(d)
}

/// G(d) = `ceil(d / floor(b(d)/2))`: colors one call forces.
pub fn per_call_guarantee(d: usize) -> usize {
    hs_graph::guarantee_hs_columns(d, rows_for(d))
}

/// Transparent colors one call may use: `floor(d/k) + b(d)`.
pub fn presenter_bound(d: usize, k: Cardinality) -> usize {
    k.div_floor(d) + rows_for(d)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncoderParams {
    pub d: usize,
    pub eps: Rational,
    pub alpha: Rational,
    pub delta: Rational,
    pub region: Interval,
}

impl EncoderParams {
    pub fn new(d: usize, eps: Rational, region: Interval) -> Result<Self> {
        if d < 2 {
            return Err(Error::BadParameter(format!("encoding needs d >= 2, got {d}")));
        }
        if eps <= rational::zero() || eps >= rational::ratio(1, d as i64) {
            return Err(Error::BadParameter(format!(
                "eps {} outside (0, 1/d)",
                rational::format(&eps)
            )));
        }
        let alpha = rational::one() - rational::half(&eps);
        let delta = &eps / rational::int(2 * d as i64);
        Ok(Self {
            d,
            eps,
            alpha,
            delta,
            region,
        })
    }

    pub fn at_level(d: usize, eps_index: u32, region: Interval) -> Result<Self> {
        Self::new(d, epsilon(d, eps_index), region)
    }
}

/// Weight vector for the t-th vertex (1-based) of a call whose earlier neighbors are `neighbors`.
pub fn encode_weights(t: usize, neighbors: &[usize], params: &EncoderParams) -> WeightVector {
    let coords = (1..=params.d)
        .map(|i| {
            if i == t {
                params.alpha.clone()
            } else if neighbors.contains(&i) {
                params.eps.clone()
            } else {
                params.delta.clone()
            }
        })
        .collect();
    WeightVector::new(coords).expect("encoded weights lie in [0,1]")
}

/// Record of one HS call: the node of the call-conflict graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallDescriptor {
    pub call_id: usize,
    pub eps_index: u32,
    pub region: Interval,
    /// Transcript rounds of the produced intervals.
    pub ids: Vec<usize>,
    pub intervals: Vec<Interval>,
    pub presenter_colors: Vec<usize>,
    pub algorithm_colors: Vec<usize>,
}

impl CallDescriptor {
    pub fn new(call_id: usize, eps_index: u32, region: Interval) -> Self {
        Self {
            call_id,
            eps_index,
            region,
            ids: Vec::new(),
            intervals: Vec::new(),
            presenter_colors: Vec::new(),
            algorithm_colors: Vec::new(),
        }
    }

    pub fn distinct_algorithm_colors(&self) -> usize {
        self.algorithm_colors.iter().collect::<BTreeSet<_>>().len()
    }

    pub fn distinct_presenter_colors(&self) -> usize {
        self.presenter_colors.iter().collect::<BTreeSet<_>>().len()
    }

    /// Smallest interval holding every produced interval.
    pub fn span(&self) -> Option<Interval> {
        let left = self.intervals.iter().map(Interval::left).min()?;
        let right = self.intervals.iter().map(Interval::right).max()?;
        Interval::new(left.clone(), right.clone()).ok()
    }
}

/// True iff some interval of `a` meets some interval of `b`.
pub fn calls_conflict(a: &CallDescriptor, b: &CallDescriptor) -> Result<bool> {
    let hit = a.intervals.iter().any(|x| b.intervals.iter().any(|y| x.intersects(y)));
    if hit && a.call_id != b.call_id && a.eps_index == b.eps_index {
        return Err(Error::SameEpsOverlap {
            a: a.call_id.min(b.call_id),
            b: a.call_id.max(b.call_id),
            eps: a.eps_index,
        });
    }
    Ok(hit)
}

/// One running HS_{k,d}(eps_i, L, R) call.
#[derive(Debug, Clone)]
pub struct HsCall {
    descriptor: CallDescriptor,
    params: EncoderParams,
    graph: HsGraph,
    pending: Option<usize>,
}

impl HsCall {
    pub fn new(call_id: usize, eps_index: u32, d: usize, k: Cardinality, region: Interval) -> Result<Self> {
        let params = EncoderParams::at_level(d, eps_index, region.clone())?;
        Ok(Self {
            descriptor: CallDescriptor::new(call_id, eps_index, region),
            params,
            graph: HsGraph::new(k, d)?,
            pending: None,
        })
    }

    pub fn descriptor(&self) -> &CallDescriptor {
        &self.descriptor
    }

    pub fn into_descriptor(self) -> CallDescriptor {
        self.descriptor
    }

    pub fn params(&self) -> &EncoderParams {
        &self.params
    }

    pub fn graph(&self) -> &HsGraph {
        &self.graph
    }

    pub fn rounds_played(&self) -> usize {
        self.descriptor.ids.len()
    }

    pub fn is_complete(&self) -> bool {
        self.rounds_played() == self.params.d
    }

    /// Weights of the next vertex; the caller decides where the interval goes.
    pub fn next_weights(&mut self) -> Result<WeightVector> {
        if self.pending.is_some() {
            return Err(Error::InternalInvariantBroken(
                "call already has a pending vertex".into(),
            ));
        }
        if self.is_complete() {
            return Err(Error::CallExhausted {
                call: self.descriptor.call_id,
                d: self.params.d,
            });
        }
        let (vertex, adj) = self.graph.next_vertex()?;
        self.pending = Some(vertex);
        Ok(encode_weights(vertex, &adj, &self.params))
    }

    /// Next interval (the whole region) and its weights.
    pub fn call_next(&mut self) -> Result<(Interval, WeightVector)> {
        let w = self.next_weights()?;
        Ok((self.params.region.clone(), w))
    }

    /// Forwards the Algorithm color of the pending interval to the inner graph game and
    /// returns (and records) its transparent color.
    pub fn call_feed(&mut self, round: usize, interval: Interval, gamma: usize) -> Result<usize> {
        if self.pending.take().is_none() {
            return Err(Error::InternalInvariantBroken("no pending vertex in call".into()));
        }
        let rho = self.graph.respond(gamma)?;
        let d = &mut self.descriptor;
        d.ids.push(round);
        d.intervals.push(interval);
        d.presenter_colors.push(rho);
        d.algorithm_colors.push(gamma);
        Ok(rho)
    }

    /// Checks the per-call color guarantee once all d rounds are in.
    pub fn finish(self) -> Result<CallDescriptor> {
        let guarantee = per_call_guarantee(self.params.d);
        let got = self.descriptor.distinct_algorithm_colors();
        if !self.is_complete() || got < guarantee {
            return Err(Error::BoundViolated {
                what: format!("HS call {}", self.descriptor.call_id),
                colors: got,
                guarantee,
            });
        }
        Ok(self.descriptor)
    }
}

/// Plays a full call over `region` at `eps_index` through the referee.
pub fn run_call(referee: &mut Referee<'_>, eps_index: u32, region: &Interval, tag: CallTag) -> Result<CallDescriptor> {
    let c = *referee.constraints();
    let (phase, subphase) = match &tag {
        CallTag::Unit { phase, index, .. } => (Some(*phase), (*phase == Phase::Sep).then_some(*index)),
        _ => (None, None),
    };
    let call_id = referee.open_call(tag);
    let mut call = HsCall::new(call_id, eps_index, c.d, c.k, region.clone())?;
    while !call.is_complete() {
        let (interval, weights) = call.call_next()?;
        let gamma = referee.present(MoveRequest {
            interval: interval.clone(),
            weights: Some(weights),
            call: Some(call_id),
            eps_index: Some(eps_index),
            phase,
            subphase,
        })?;
        let round = referee.round();
        let rho = call.call_feed(round, interval, gamma)?;
        referee.set_presenter_color(round, rho)?;
    }
    call.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{FirstFit, FreshColor};
    use crate::game::{ColoringState, GameConstraints, WeightedInterval};
    use crate::rational::{int, ratio};

    fn unit() -> Interval {
        Interval::new(int(0), int(1)).unwrap()
    }

    #[test]
    fn eps_ladder() {
        assert_eq!(epsilon(2, 1), ratio(1, 4));
        assert_eq!(epsilon(2, 2), ratio(1, 16));
        assert_eq!(epsilon(16, 1), ratio(1, 32));
        let p = EncoderParams::at_level(2, 1, unit()).unwrap();
        assert_eq!(p.alpha, ratio(7, 8));
        assert_eq!(p.delta, ratio(1, 16));
        assert_eq!(p.delta, epsilon(2, 2));
    }

    #[test]
    fn encoder_rejects_bad_params() {
        assert!(EncoderParams::new(1, ratio(1, 4), unit()).is_err());
        assert!(EncoderParams::new(4, ratio(1, 4), unit()).is_err());
        assert!(EncoderParams::new(4, int(0), unit()).is_err());
    }

    #[test]
    fn encoding_of_v6() {
        let p = EncoderParams::at_level(8, 1, unit()).unwrap();
        let (a, e, dl) = (p.alpha.clone(), p.eps.clone(), p.delta.clone());
        let w = encode_weights(6, &[2, 5], &p);
        assert_eq!(
            w.coords(),
            &[dl.clone(), e.clone(), dl.clone(), dl.clone(), e, a, dl.clone(), dl]
        );
    }

    #[test]
    fn example_graph_rows() {
        let p = EncoderParams::at_level(6, 1, unit()).unwrap();
        let (a, e, dl) = (p.alpha.clone(), p.eps.clone(), p.delta.clone());
        assert_eq!(
            encode_weights(4, &[1, 3], &p).coords(),
            &[e.clone(), dl.clone(), e, a.clone(), dl.clone(), dl.clone()]
        );
        assert_eq!(
            encode_weights(1, &[], &p).coords(),
            &[a, dl.clone(), dl.clone(), dl.clone(), dl.clone(), dl]
        );
    }

    #[test]
    fn call_rounds() {
        let mut call = HsCall::new(0, 1, 2, Cardinality::Unbounded, unit()).unwrap();
        let (iv, w) = call.call_next().unwrap();
        assert_eq!(iv, unit());
        assert_eq!(w.coords(), &[ratio(7, 8), ratio(1, 16)]);
        // a fresh color for vertex 1 gives rho = smallest active row
        assert_eq!(call.call_feed(1, iv, 0).unwrap(), 1);
        // second vertex: pattern {2} is chosen, adjacent to v1 (presenter color 1 not in {2})
        let (_, w) = call.call_next().unwrap();
        assert_eq!(w.coords(), &[ratio(1, 4), ratio(7, 8)]);
        call.call_feed(2, unit(), 1).unwrap();
        assert!(matches!(call.call_next(), Err(Error::CallExhausted { .. })));
        let desc = call.finish().unwrap();
        assert_eq!(desc.presenter_colors.len(), 2);
    }

    #[test]
    fn reused_color_on_adjacent_pair_is_rejected() {
        let c = GameConstraints::new(2, Cardinality::Unbounded);
        let mut call = HsCall::new(0, 1, 2, c.k, unit()).unwrap();
        let mut state = ColoringState::new(c);
        let (iv, w) = call.call_next().unwrap();
        state.assign(WeightedInterval::new(1, iv.clone(), Some(w)), 0).unwrap();
        call.call_feed(1, iv, 0).unwrap();
        let (iv, w) = call.call_next().unwrap();
        // the referee rejects it first
        assert!(state.assign(WeightedInterval::new(2, iv, Some(w)), 0).is_err());
        // and the inner game agrees
        assert!(matches!(
            call.call_feed(2, unit(), 0),
            Err(Error::IllegalAlgorithmMove { .. })
        ));
    }

    #[test]
    fn full_call_via_referee() {
        for d in [2, 3, 4, 8, 16] {
            let mut alg = FirstFit;
            let mut r = Referee::new(GameConstraints::new(d, Cardinality::Finite(2)), &mut alg);
            let desc = run_call(&mut r, 1, &unit(), CallTag::Single).unwrap();
            assert_eq!(desc.ids.len(), d);
            assert_eq!(desc.presenter_colors.len(), d);
            assert!(desc.distinct_algorithm_colors() >= per_call_guarantee(d));
            assert!(desc.distinct_presenter_colors() <= presenter_bound(d, Cardinality::Finite(2)));
        }
    }

    #[test]
    fn fresh_color_call() {
        let mut alg = FreshColor;
        let mut r = Referee::new(GameConstraints::new(8, Cardinality::Unbounded), &mut alg);
        let desc = run_call(&mut r, 1, &unit(), CallTag::Single).unwrap();
        assert_eq!(desc.distinct_algorithm_colors(), 8);
    }

    #[test]
    fn guarantees() {
        assert_eq!(per_call_guarantee(2), 1);
        assert_eq!(per_call_guarantee(4), 2);
        assert_eq!(per_call_guarantee(8), 3);
        assert_eq!(per_call_guarantee(16), 6);
        assert_eq!(presenter_bound(16, Cardinality::Finite(4)), 11);
        assert_eq!(presenter_bound(8, Cardinality::Unbounded), 6);
    }

    fn desc(id: usize, eps: u32, ivs: &[(i64, i64)]) -> CallDescriptor {
        let mut d = CallDescriptor::new(id, eps, unit());
        d.intervals = ivs
            .iter()
            .map(|&(l, r)| Interval::new(int(l), int(r)).unwrap())
            .collect();
        d
    }

    #[test]
    fn conflict_examples() {
        assert!(calls_conflict(&desc(0, 1, &[(0, 1)]), &desc(1, 2, &[(0, 1)])).unwrap());
        assert!(!calls_conflict(&desc(0, 1, &[(0, 1)]), &desc(1, 1, &[(2, 3)])).unwrap());
        assert!(matches!(
            calls_conflict(&desc(0, 1, &[(0, 1)]), &desc(1, 1, &[(1, 3)])),
            Err(Error::SameEpsOverlap { eps: 1, .. })
        ));
        // unit intervals with left endpoints in (3/2, 2) all contain 2
        let mut a = CallDescriptor::new(0, 1, unit());
        a.intervals = vec![Interval::new(ratio(7, 4), ratio(11, 4)).unwrap()];
        let mut b = CallDescriptor::new(1, 2, unit());
        b.intervals = vec![Interval::new(ratio(31, 16), ratio(47, 16)).unwrap()];
        assert!(calls_conflict(&a, &b).unwrap());
    }
}
