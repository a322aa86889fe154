//! Off-line colorings that certify how few colors the presented instances need.
//!
//! A witness color is a pair (palette, transparent Presenter color of the call). Calls whose
//! intervals meet get different palettes; inside one call the Presenter coloring is legal by
//! construction. Both facts are re-checked by replaying the flattened coloring.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::game::{
    full_sweep, CallTag, ColoringState, GameConstraints, Phase, SmRole, StrategySpec, Transcript, WeightedInterval,
};
use crate::hs_graph::check_graph_coloring;
use crate::hs_interval::{calls_conflict, presenter_bound, CallDescriptor};
use crate::strategy_sm::paper_colorability_bound;

pub const DEFAULT_ORACLE_LIMIT: usize = 12;

#[derive(Debug, Clone)]
pub struct CallNode {
    pub desc: CallDescriptor,
    pub tag: CallTag,
}

/// Calls of a transcript and which of them meet.
#[derive(Debug, Clone)]
pub struct CallGraph {
    /// Keyed by call id.
    pub nodes: BTreeMap<usize, CallNode>,
    /// Pairs `(a, b)` with `a < b`.
    pub edges: BTreeSet<(usize, usize)>,
}

impl CallGraph {
    pub fn conflict(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn neighbors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(x, y)| {
            if x == a {
                Some(y)
            } else if y == a {
                Some(x)
            } else {
                None
            }
        })
    }
}

/// Groups moves by call and links calls with intersecting intervals.
///
/// Geometry is checked per (call, eps index) group first, so a single move whose eps index
/// collides with an overlapping call is reported as such.
pub fn build_call_graph(t: &Transcript) -> Result<CallGraph> {
    let mut groups: BTreeMap<(usize, u32), CallDescriptor> = BTreeMap::new();
    for mv in &t.moves {
        let (call, eps) = match (mv.call, mv.eps_index) {
            (Some(c), Some(e)) => (c, e),
            _ => {
                return Err(Error::MalformedTranscript(format!(
                    "round {} carries no call and eps index",
                    mv.round
                )))
            }
        };
        let iv = mv
            .interval
            .clone()
            .ok_or_else(|| Error::MalformedTranscript(format!("round {} has no interval", mv.round)))?;
        let desc = groups
            .entry((call, eps))
            .or_insert_with(|| CallDescriptor::new(call, eps, iv.clone()));
        desc.ids.push(mv.round);
        desc.intervals.push(iv);
        desc.presenter_colors.push(mv.presenter_color.unwrap_or(0));
        desc.algorithm_colors.push(mv.algorithm_color);
    }
    for desc in groups.values_mut() {
        if let Some(span) = desc.span() {
            desc.region = span;
        }
    }

    let keys: Vec<(usize, u32)> = groups.keys().copied().collect();
    let mut edges = BTreeSet::new();
    for (i, a) in keys.iter().enumerate() {
        for b in &keys[i + 1..] {
            if a.0 == b.0 {
                continue;
            }
            let (x, y) = (&groups[a], &groups[b]);
            if x.region.intersects(&y.region) && calls_conflict(x, y)? {
                edges.insert((a.0.min(b.0), a.0.max(b.0)));
            }
        }
    }

    let mut nodes: BTreeMap<usize, CallNode> = BTreeMap::new();
    for ((call, eps), desc) in groups {
        if let Some(prev) = nodes.get(&call) {
            return Err(Error::InvariantViolated(format!(
                "call {call} mixes eps indices {} and {eps}",
                prev.desc.eps_index
            )));
        }
        let tag = t.tag_of(call).cloned().unwrap_or(CallTag::Single);
        nodes.insert(call, CallNode { desc, tag });
    }
    Ok(CallGraph { nodes, edges })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaletteAssignment {
    /// 1-based palette per call id.
    pub palette: BTreeMap<usize, usize>,
    pub palette_count: usize,
}

/// Palettes by the structural scheme of the strategy that produced the transcript.
pub fn assign_palettes(g: &CallGraph, strategy: &StrategySpec) -> Result<PaletteAssignment> {
    let palette = match strategy {
        StrategySpec::HsCall { .. } => g.nodes.keys().map(|&c| (c, 1)).collect(),
        StrategySpec::Sm { .. } => sm_palettes(g)?,
        StrategySpec::Unit { m } => unit_palettes(g, *m)?,
        StrategySpec::HsGraph { .. } => {
            return Err(Error::BadParameter(
                "graph games have no calls to assign palettes to".into(),
            ))
        }
    };
    for &(a, b) in &g.edges {
        if palette[&a] == palette[&b] {
            return Err(Error::SchemeConflict(format!(
                "conflicting calls {a} and {b} share palette {}",
                palette[&a]
            )));
        }
    }
    let palette_count = palette.values().copied().max().unwrap_or(0);
    Ok(PaletteAssignment { palette, palette_count })
}

fn unit_palettes(g: &CallGraph, m: usize) -> Result<BTreeMap<usize, usize>> {
    let h = m / 2;
    let mut out = BTreeMap::new();
    let mut sep: Vec<(usize, bool, usize)> = Vec::new();
    for (&id, node) in &g.nodes {
        let CallTag::Unit { phase, index, marked } = &node.tag else {
            return Err(Error::MalformedTranscript(format!("call {id} lacks a unit phase tag")));
        };
        match phase {
            Phase::Initial => {
                out.insert(id, *index);
            }
            Phase::Final => {
                out.insert(id, h + index);
            }
            Phase::Sep => {
                let marked =
                    marked.ok_or_else(|| Error::MalformedTranscript(format!("subphase call {id} lacks its mark")))?;
                sep.push((*index, marked, id));
            }
        }
    }
    sep.sort();
    let (mut marked_rank, mut unmarked_rank) = (0, 0);
    for (_, marked, id) in sep {
        let p = if marked {
            marked_rank += 1;
            marked_rank
        } else {
            unmarked_rank += 1;
            h + unmarked_rank
        };
        out.insert(id, p);
    }
    Ok(out)
}

/// One S_m instance found in the tags: its own calls and its sub-region instances.
#[derive(Default)]
struct SmNode {
    roles: Vec<(SmRole, usize)>,
    children: BTreeMap<usize, SmNode>,
}

impl SmNode {
    fn insert(&mut self, path: &[usize], role: SmRole, call: usize) {
        match path.split_first() {
            None => self.roles.push((role, call)),
            Some((slot, rest)) => self.children.entry(*slot).or_default().insert(rest, role, call),
        }
    }
}

fn sm_palettes(g: &CallGraph) -> Result<BTreeMap<usize, usize>> {
    let mut root = SmNode::default();
    for (&id, node) in &g.nodes {
        let CallTag::Sm { path, role } = &node.tag else {
            return Err(Error::MalformedTranscript(format!("call {id} lacks an S_m tag")));
        };
        root.insert(path, *role, id);
    }
    Ok(sm_assign(&root, g)?.0)
}

/// Returns the palettes of the subtree and how many it uses.
fn sm_assign(node: &SmNode, g: &CallGraph) -> Result<(BTreeMap<usize, usize>, usize)> {
    if let Some(&(_, base)) = node.roles.iter().find(|(r, _)| *r == SmRole::Base) {
        if node.roles.len() != 1 || !node.children.is_empty() {
            return Err(Error::SchemeConflict(
                "base call shares its instance with other calls".into(),
            ));
        }
        return Ok(([(base, 1)].into(), 1));
    }
    let subs: Vec<(BTreeMap<usize, usize>, usize)> =
        node.children.values().map(|c| sm_assign(c, g)).collect::<Result<_>>()?;
    let chi_sub = subs.iter().map(|s| s.1).max().unwrap_or(0);
    let top = (chi_sub + 1).max(2);

    let case1 = node.roles.iter().any(|(r, _)| *r == SmRole::K3);
    let mut k_palettes: BTreeMap<usize, usize> = BTreeMap::new();
    for &(role, call) in &node.roles {
        let p = match (role, case1) {
            (SmRole::K1 | SmRole::K2, true) => top,
            (SmRole::K3, _) => 1,
            (SmRole::K1 | SmRole::K4, false) => top,
            (SmRole::K2 | SmRole::K5, false) => 1,
            (SmRole::K4 | SmRole::K5, true) => {
                return Err(Error::SchemeConflict("K_3 appears together with K_4 or K_5".into()))
            }
            (SmRole::Base, _) => unreachable!("handled above"),
        };
        k_palettes.insert(call, p);
    }
    if k_palettes.is_empty() {
        let mut out = BTreeMap::new();
        for (sub, _) in subs {
            out.extend(sub);
        }
        return Ok((out, chi_sub));
    }

    let mut out = k_palettes.clone();
    for (sub, chi) in subs {
        let touched: BTreeSet<usize> = sub
            .keys()
            .flat_map(|&c| g.neighbors(c))
            .filter_map(|n| k_palettes.get(&n).copied())
            .collect();
        let allowed: Vec<usize> = (1..=top).filter(|p| !touched.contains(p)).collect();
        if allowed.len() < chi {
            return Err(Error::SchemeConflict(format!(
                "region needs {chi} palettes, only {} remain beside {touched:?}",
                allowed.len()
            )));
        }
        out.extend(sub.into_iter().map(|(c, p)| (c, allowed[p - 1])));
    }
    let used = out.values().copied().max().unwrap_or(0);
    Ok((out, used))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    /// Witness color per round.
    pub colors: Vec<usize>,
    pub witness_colors: usize,
    pub palette_count: Option<usize>,
    /// Largest transparent color inside any call.
    pub stride: usize,
    /// `palette_count * (floor(d/k) + b(d))`, or the Presenter bound for graph games.
    pub bound: usize,
    pub paper_colorability_bound: Option<usize>,
}

/// Builds and checks the witness coloring of a transcript.
pub fn witness_coloring(t: &Transcript) -> Result<WitnessReport> {
    let presenter: Vec<usize> = t
        .moves
        .iter()
        .map(|mv| {
            mv.presenter_color
                .ok_or_else(|| Error::MalformedTranscript(format!("round {} has no presenter color", mv.round)))
        })
        .collect::<Result<_>>()?;
    let stride = presenter.iter().copied().max().unwrap_or(0);
    let k = t.constraints.k;

    if let StrategySpec::HsGraph { n } = t.strategy {
        let adjacency: Vec<Vec<usize>> = t
            .moves
            .iter()
            .map(|mv| mv.adjacent_to.clone().unwrap_or_default())
            .collect();
        check_graph_coloring(&adjacency, &presenter, k).map_err(|violation| Error::WitnessInvalid {
            round: t.moves.len(),
            violation,
        })?;
        let witness_colors = presenter.iter().collect::<BTreeSet<_>>().len();
        let bound = crate::hs_graph::presenter_bound(n, k);
        if witness_colors > bound {
            return Err(Error::BoundViolated {
                what: "presenter colors".into(),
                colors: witness_colors,
                guarantee: bound,
            });
        }
        return Ok(WitnessReport {
            colors: presenter,
            witness_colors,
            palette_count: None,
            stride,
            bound,
            paper_colorability_bound: None,
        });
    }

    let g = build_call_graph(t)?;
    let pa = assign_palettes(&g, &t.strategy)?;
    let m = match t.strategy {
        StrategySpec::Sm { m, .. } | StrategySpec::Unit { m } => m,
        _ => 1,
    };
    if pa.palette_count > m.max(1) {
        return Err(Error::InvariantViolated(format!(
            "{} palettes for m = {m}",
            pa.palette_count
        )));
    }
    let colors: Vec<usize> = t
        .moves
        .iter()
        .zip(&presenter)
        .map(|(mv, &rho)| (pa.palette[&mv.call.expect("checked by build_call_graph")] - 1) * stride + rho)
        .collect();

    replay(&t.constraints, t, &colors)?;

    let d = t.constraints.d;
    let witness_colors = colors.iter().collect::<BTreeSet<_>>().len();
    let bound = pa.palette_count * presenter_bound(d, k);
    if witness_colors > bound {
        return Err(Error::BoundViolated {
            what: "witness colors".into(),
            colors: witness_colors,
            guarantee: bound,
        });
    }
    Ok(WitnessReport {
        colors,
        witness_colors,
        palette_count: Some(pa.palette_count),
        stride,
        bound,
        paper_colorability_bound: Some(paper_colorability_bound(m, d, k)),
    })
}

fn replay(constraints: &GameConstraints, t: &Transcript, colors: &[usize]) -> Result<()> {
    let mut state = ColoringState::new(*constraints);
    let mut intervals = Vec::with_capacity(t.moves.len());
    for (mv, &c) in t.moves.iter().zip(colors) {
        let w = mv.weighted_interval()?;
        if let Some(v) = state.check(&w, c)? {
            return Err(Error::WitnessInvalid {
                round: mv.round,
                violation: v.to_string(),
            });
        }
        state.assign(w.clone(), c)?;
        intervals.push(w);
    }
    full_sweep(constraints, &intervals, colors).map_err(|(round, _, v)| Error::WitnessInvalid {
        round,
        violation: v.to_string(),
    })
}

fn legal_together(constraints: &GameConstraints, members: &[&WeightedInterval]) -> bool {
    let owned: Vec<WeightedInterval> = members.iter().map(|w| (*w).clone()).collect();
    full_sweep(constraints, &owned, &vec![0; owned.len()]).is_ok()
}

/// Exact off-line minimum number of colors, by backtracking. Colors are introduced in order.
pub fn brute_force_chromatic(
    intervals: &[WeightedInterval],
    constraints: &GameConstraints,
    limit: usize,
) -> Result<usize> {
    if intervals.len() > limit {
        return Err(Error::TooLarge {
            size: intervals.len(),
            limit,
        });
    }
    let mut classes: Vec<Vec<&WeightedInterval>> = Vec::new();
    let mut best = intervals.len();
    search(intervals, constraints, 0, &mut classes, &mut best);
    Ok(best)
}

fn search<'a>(
    items: &'a [WeightedInterval],
    constraints: &GameConstraints,
    i: usize,
    classes: &mut Vec<Vec<&'a WeightedInterval>>,
    best: &mut usize,
) {
    if classes.len() >= *best {
        return;
    }
    if i == items.len() {
        *best = classes.len();
        return;
    }
    let cand = &items[i];
    for c in 0..classes.len() {
        classes[c].push(cand);
        if legal_together(constraints, &classes[c]) {
            search(items, constraints, i + 1, classes, best);
        }
        classes[c].pop();
    }
    if classes.len() + 1 < *best {
        classes.push(vec![cand]);
        search(items, constraints, i + 1, classes, best);
        classes.pop();
    }
}

/// Largest set of intervals through one endpoint that pairwise cannot share a color.
pub fn point_clique_bound(intervals: &[WeightedInterval], constraints: &GameConstraints) -> usize {
    let points: BTreeSet<_> = intervals
        .iter()
        .flat_map(|w| [w.interval.left(), w.interval.right()])
        .collect();
    let mut best = usize::from(!intervals.is_empty());
    for p in points {
        let here: Vec<&WeightedInterval> = intervals.iter().filter(|w| w.interval.contains(p)).collect();
        let n = here.len();
        let mut clash = vec![0u32; n];
        for a in 0..n {
            for b in a + 1..n {
                if !legal_together(constraints, &[here[a], here[b]]) {
                    clash[a] |= 1 << b;
                    clash[b] |= 1 << a;
                }
            }
        }
        for mask in 1u32..(1 << n) {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            let clique = (0..n)
                .filter(|&a| mask >> a & 1 == 1)
                .all(|a| mask & !(1 << a) & !clash[a] == 0);
            if clique {
                best = size;
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Cardinality, Interval, WeightVector};
    use crate::rational::{int, ratio};

    fn wi(
        id: usize,
        l: crate::rational::Rational,
        r: crate::rational::Rational,
        w: Option<Vec<crate::rational::Rational>>,
    ) -> WeightedInterval {
        WeightedInterval::new(
            id,
            Interval::new(l, r).unwrap(),
            w.map(|w| WeightVector::new(w).unwrap()),
        )
    }

    #[test]
    fn disjoint_pair_needs_one_color() {
        let c = GameConstraints::new(0, Cardinality::Finite(1));
        let xs = [wi(1, int(0), int(1), None), wi(2, int(2), int(3), None)];
        assert_eq!(brute_force_chromatic(&xs, &c, 12).unwrap(), 1);
        assert_eq!(point_clique_bound(&xs, &c), 1);
    }

    #[test]
    fn encoded_edge_needs_two() {
        let c = GameConstraints::new(2, Cardinality::Unbounded);
        let xs = [
            wi(1, int(0), int(1), Some(vec![ratio(7, 8), ratio(1, 16)])),
            wi(2, int(0), int(1), Some(vec![ratio(1, 4), ratio(7, 8)])),
        ];
        assert_eq!(brute_force_chromatic(&xs, &c, 12).unwrap(), 2);
        assert_eq!(point_clique_bound(&xs, &c), 2);
    }

    #[test]
    fn cardinality_clique() {
        // five nested intervals, k = 2: three colors needed, but pairs never clash
        let c = GameConstraints::new(0, Cardinality::Finite(2));
        let xs: Vec<_> = (1..=5).map(|i| wi(i, int(0), int(i as i64), None)).collect();
        assert_eq!(brute_force_chromatic(&xs, &c, 12).unwrap(), 3);
        assert_eq!(point_clique_bound(&xs, &c), 1);
    }

    #[test]
    fn too_large() {
        let c = GameConstraints::new(0, Cardinality::Unbounded);
        let xs: Vec<_> = (1..=13).map(|i| wi(i, int(0), int(1), None)).collect();
        assert!(matches!(
            brute_force_chromatic(&xs, &c, 12),
            Err(Error::TooLarge { size: 13, limit: 12 })
        ));
    }

    use crate::algorithms::AlgorithmKind;
    use crate::harness::{play, Outcome, PlayConfig, StrategyKind};
    use crate::strategy_sm::Case;

    fn role_call(t: &Transcript, want: SmRole) -> Option<usize> {
        t.calls.iter().find_map(|r| match &r.tag {
            CallTag::Sm { path, role } if path.is_empty() && *role == want => Some(r.call),
            _ => None,
        })
    }

    #[test]
    fn s1_single_node() {
        let cfg = PlayConfig::new(StrategyKind::Sm, AlgorithmKind::FirstFit).m(1).d(8);
        let res = play(&cfg).unwrap();
        let g = build_call_graph(&res.transcript).unwrap();
        assert_eq!(g.nodes.len(), 1);
        assert!(g.edges.is_empty());
        assert_eq!(res.witness.palette_count, Some(1));
        assert!(res.witness.witness_colors <= 6);
    }

    #[test]
    fn unit_m2_edges() {
        let cfg = PlayConfig::new(StrategyKind::Unit, AlgorithmKind::FirstFit)
            .m(2)
            .d(8)
            .k(Cardinality::Finite(2));
        let res = play(&cfg).unwrap();
        let t = &res.transcript;
        let g = build_call_graph(t).unwrap();
        assert_eq!(g.nodes.len(), 4);
        let by = |ph: Phase, i: usize| {
            t.calls
                .iter()
                .find(|r| matches!(&r.tag, CallTag::Unit { phase, index, .. } if *phase == ph && *index == i))
                .unwrap()
                .call
        };
        let (init, s1, s2) = (by(Phase::Initial, 1), by(Phase::Sep, 1), by(Phase::Sep, 2));
        assert!(g.conflict(s1, s2));
        assert!(!g.conflict(init, s1) && !g.conflict(init, s2));
        assert_eq!(res.witness.palette_count, Some(2));
        assert!(res.witness.witness_colors <= 20);
    }

    #[test]
    fn s2_k_call_edges() {
        let mut seen = BTreeSet::new();
        for (d, k) in [
            (16, Cardinality::Finite(4)),
            (8, Cardinality::Unbounded),
            (4, Cardinality::Finite(1)),
            (2, Cardinality::Unbounded),
        ] {
            let cfg = PlayConfig::new(StrategyKind::Sm, AlgorithmKind::FirstFit)
                .m(2)
                .d(d)
                .k(k);
            let res = play(&cfg).unwrap();
            let Outcome::Sm(out) = &res.played.outcome else {
                unreachable!()
            };
            let Some(case) = out.case_taken else { continue };
            let t = &res.transcript;
            let g = build_call_graph(t).unwrap();
            let k1 = role_call(t, SmRole::K1).unwrap();
            let k2 = role_call(t, SmRole::K2).unwrap();
            assert!(!g.conflict(k1, k2));
            match case {
                Case::Case1 => {
                    let k3 = role_call(t, SmRole::K3).unwrap();
                    assert!(g.conflict(k3, k1) && g.conflict(k3, k2));
                }
                Case::Case2 => {
                    let k4 = role_call(t, SmRole::K4).unwrap();
                    let k5 = role_call(t, SmRole::K5).unwrap();
                    assert!(g.conflict(k1, k5) && g.conflict(k4, k5) && g.conflict(k2, k4));
                    assert!(!g.conflict(k1, k4) && !g.conflict(k2, k5));
                }
            }
            seen.insert(format!("{case:?}"));
            assert!(res.witness.palette_count.unwrap() <= 2);
        }
        assert!(!seen.is_empty());
    }

    #[test]
    fn scheme_conflict_is_loud() {
        let cfg = PlayConfig::new(StrategyKind::Unit, AlgorithmKind::FirstFit).m(2).d(4);
        let mut t = play(&cfg).unwrap().transcript;
        // unmarking every subphase puts the first one on the final call's palette
        for r in &mut t.calls {
            if let CallTag::Unit { marked: Some(m), .. } = &mut r.tag {
                *m = false;
            }
        }
        let g = build_call_graph(&t).unwrap();
        assert!(matches!(
            assign_palettes(&g, &t.strategy),
            Err(Error::SchemeConflict(_))
        ));
    }

    /// First-fit, except the second call at eps index 4 (K_2 of S_2) gets fresh colors.
    struct SplitK2 {
        first_call: Option<usize>,
    }

    impl crate::algorithms::Algorithm for SplitK2 {
        fn choose(&mut self, state: &ColoringState, request: &crate::game::Move) -> Result<usize> {
            if request.eps_index == Some(4) {
                let call = request.call.unwrap();
                if *self.first_call.get_or_insert(call) != call {
                    return Ok(state.fresh_color() + 100);
                }
            }
            crate::algorithms::first_fit(state, request)
        }
    }

    #[test]
    fn s2_case1_palettes() {
        let constraints = GameConstraints::new(8, Cardinality::Finite(2));
        let spec = StrategySpec::Sm {
            m: 2,
            region: crate::game::Interval::new(int(0), int(1)).unwrap(),
            region_cap: 100,
        };
        let mut alg = SplitK2 { first_call: None };
        let played =
            crate::harness::run_strategy(constraints, &spec, crate::harness::Player::Interval(&mut alg)).unwrap();
        let Outcome::Sm(out) = &played.outcome else {
            unreachable!()
        };
        assert_eq!(out.case_taken, Some(Case::Case1));
        let t = Transcript {
            version: crate::game::TRANSCRIPT_VERSION,
            constraints,
            strategy: spec,
            algorithm: AlgorithmKind::FirstFit.header(),
            calls: played.calls.clone(),
            moves: played.moves.clone(),
            summary: Default::default(),
        };
        let g = build_call_graph(&t).unwrap();
        let (k1, k2, k3) = (
            role_call(&t, SmRole::K1).unwrap(),
            role_call(&t, SmRole::K2).unwrap(),
            role_call(&t, SmRole::K3).unwrap(),
        );
        assert!(g.conflict(k3, k1) && g.conflict(k3, k2) && !g.conflict(k1, k2));
        let pa = assign_palettes(&g, &t.strategy).unwrap();
        assert_eq!((pa.palette[&k1], pa.palette[&k2], pa.palette[&k3]), (2, 2, 1));
        let w = witness_coloring(&t).unwrap();
        assert_eq!(w.palette_count, Some(2));
        assert!(w.witness_colors <= 2 * presenter_bound(8, Cardinality::Finite(2)));
    }
}
