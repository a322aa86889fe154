use std::collections::BTreeSet;

use proptest::prelude::*;

use online_coloring::algorithms::{AlgorithmKind, GraphRandomFit};
use online_coloring::game::{
    Cardinality, ColoringState, GameConstraints, Interval, Transcript, WeightVector, WeightedInterval,
};
use online_coloring::harness::{play, PlayConfig, StrategyKind};
use online_coloring::hs_graph::{self, play_hs_graph};
use online_coloring::hs_interval::{encode_weights, EncoderParams};
use online_coloring::rational::{self, ratio, Rational};
use online_coloring::verify::verify_transcript;

fn cardinality() -> impl Strategy<Value = Cardinality> {
    prop_oneof![Just(Cardinality::Unbounded), (1u32..4).prop_map(Cardinality::Finite)]
}

/// Interval with endpoints on the grid `i/4`, `0 <= i <= 12`.
fn interval() -> impl Strategy<Value = Interval> {
    (0i64..12, 1i64..6).prop_map(|(l, len)| Interval::new(ratio(l, 4), ratio((l + len).min(13), 4)).unwrap())
}

fn weights(d: usize) -> impl Strategy<Value = Option<WeightVector>> {
    if d == 0 {
        Just(None).boxed()
    } else {
        prop::collection::vec(0i64..=8, d)
            .prop_map(|w| Some(WeightVector::new(w.into_iter().map(|x| ratio(x, 8)).collect()).unwrap()))
            .boxed()
    }
}

fn items(d: usize, max: usize) -> impl Strategy<Value = Vec<(Interval, Option<WeightVector>)>> {
    prop::collection::vec((interval(), weights(d)), 1..max)
}

/// Legality by brute evaluation at every endpoint and every gap midpoint.
fn dense_legal(c: &GameConstraints, class: &[&WeightedInterval]) -> bool {
    let mut pts: BTreeSet<Rational> = class
        .iter()
        .flat_map(|w| [w.interval.left().clone(), w.interval.right().clone()])
        .collect();
    let sorted: Vec<Rational> = pts.iter().cloned().collect();
    for pair in sorted.windows(2) {
        pts.insert(rational::midpoint(&pair[0], &pair[1]));
    }
    pts.iter().all(|p| {
        let here: Vec<_> = class
            .iter()
            .filter(|w| w.interval.left() <= p && p <= w.interval.right())
            .collect();
        let count_ok = c.k.allows(here.len());
        let band_ok = (0..c.d).all(|i| {
            let sum: Rational = here
                .iter()
                .map(|w| {
                    w.weights
                        .as_ref()
                        .map_or_else(rational::zero, |v| v.coords()[i].clone())
                })
                .sum();
            sum <= rational::one()
        });
        count_ok && band_ok
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sweep_matches_dense_evaluation(
        k in cardinality(),
        (d, xs) in (0usize..3).prop_flat_map(|d| (Just(d), items(d, 8))),
    ) {
        let c = GameConstraints::new(d, k);
        let mut state = ColoringState::new(c);
        let mut accepted: Vec<WeightedInterval> = Vec::new();
        for (i, (iv, w)) in xs.into_iter().enumerate() {
            let cand = WeightedInterval::new(i + 1, iv, w);
            let mut with: Vec<&WeightedInterval> = accepted.iter().collect();
            with.push(&cand);
            let ok = state.can_assign(&cand, 0).unwrap();
            prop_assert_eq!(ok, dense_legal(&c, &with));
            // keep the class legal; rejected candidates take a fresh color
            let color = if ok { 0 } else { state.fresh_color().max(1) };
            state.assign(cand.clone(), color).unwrap();
            if ok {
                accepted.push(cand);
            }
        }
    }

    #[test]
    fn removing_members_never_hurts(
        k in cardinality(),
        xs in items(2, 8),
        (cand_iv, cand_w) in (interval(), weights(2)),
        keep in prop::collection::vec(any::<bool>(), 8),
    ) {
        let c = GameConstraints::new(2, k);
        let mut full = ColoringState::new(c);
        let mut class = Vec::new();
        for (iv, w) in xs {
            let x = WeightedInterval::new(full.len() + 1, iv, w);
            if full.can_assign(&x, 0).unwrap() {
                full.assign(x.clone(), 0).unwrap();
                class.push(x);
            }
        }
        let mut part = ColoringState::new(c);
        for (x, &kept) in class.iter().zip(&keep) {
            if kept {
                let mut y = x.clone();
                y.id = part.len() + 1;
                part.assign(y, 0).unwrap();
            }
        }
        let mut cand = WeightedInterval::new(full.len() + 1, cand_iv.clone(), cand_w.clone());
        let in_full = full.can_assign(&cand, 0).unwrap();
        cand.id = part.len() + 1;
        if in_full {
            prop_assert!(part.can_assign(&cand, 0).unwrap());
        }
    }

    #[test]
    fn rationals_round_trip(n in -1000i64..1000, d in 1i64..1000) {
        let q = ratio(n, d);
        let s = rational::format(&q);
        prop_assert_eq!(rational::parse(&s).unwrap(), q);
    }

    #[test]
    fn random_algorithms_lose_the_graph_game(n in 2usize..90, k in cardinality(), seed in any::<u64>()) {
        let out = play_hs_graph(k, n, &mut GraphRandomFit::new(seed)).unwrap();
        prop_assert!(out.algorithm_colors >= hs_graph::guarantee_hs_columns(n, out.hs.b()));
        prop_assert!(out.presenter_colors <= hs_graph::presenter_bound(n, k));
        prop_assert_eq!(out.hs.strict_subset_checks(), n);
    }

    #[test]
    fn encoding_feasible_iff_independent(
        d in 2usize..9,
        edges in prop::collection::vec(any::<bool>(), 36),
        subset in prop::collection::vec(any::<bool>(), 8),
    ) {
        let adj = |a: usize, b: usize| {
            let (x, y) = (a.min(b), a.max(b));
            edges[(y - 1) * (y - 2) / 2 + (x - 1)]
        };
        let region = Interval::new(rational::zero(), rational::one()).unwrap();
        let params = EncoderParams::at_level(d, 1, region.clone()).unwrap();
        let chosen: Vec<usize> = (1..=d).filter(|&v| subset[v - 1]).collect();
        let mut state = ColoringState::new(GameConstraints::new(d, Cardinality::Unbounded));
        let mut feasible = true;
        for &v in &chosen {
            let nb: Vec<usize> = (1..v).filter(|&u| adj(u, v)).collect();
            let w = WeightedInterval::new(state.len() + 1, region.clone(), Some(encode_weights(v, &nb, &params)));
            if !state.can_assign(&w, 0).unwrap() {
                feasible = false;
                break;
            }
            state.assign(w, 0).unwrap();
        }
        let independent = chosen.iter().all(|&a| chosen.iter().all(|&b| a == b || !adj(a, b)));
        prop_assert_eq!(feasible, independent);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn strategies_certify_and_verify(
        strategy in prop_oneof![Just(StrategyKind::Sm), Just(StrategyKind::Unit), Just(StrategyKind::HsCall)],
        m in 1usize..4,
        d in prop_oneof![Just(2usize), Just(3), Just(4), Just(6), Just(8)],
        k in cardinality(),
        alg in prop_oneof![
            Just(AlgorithmKind::FirstFit),
            Just(AlgorithmKind::FreshColor),
            any::<u64>().prop_map(AlgorithmKind::RandomFit),
        ],
    ) {
        let cfg = PlayConfig::new(strategy, alg).m(m).d(d).k(k);
        let res = play(&cfg).unwrap();
        let s = &res.transcript.summary;
        prop_assert!(s.algorithm_colors >= s.guarantee);
        prop_assert!(res.witness.palette_count.unwrap() <= m);
        prop_assert!(s.witness_colors <= res.witness.bound);
        let json = res.transcript.to_json();
        let back = Transcript::from_json(&json).unwrap();
        prop_assert_eq!(&back, &res.transcript);
        let report = verify_transcript(&back);
        prop_assert!(report.ok, "{:?}", report);
    }
}
