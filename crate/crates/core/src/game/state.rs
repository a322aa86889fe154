use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::One;

use super::types::{GameConstraints, WeightedInterval};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Which constraint a color class breaks, and where.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub point: Rational,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    Cardinality {
        count: usize,
    },
    /// 1-based coordinate.
    Bandwidth {
        coord: usize,
        sum: Rational,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ViolationKind::Cardinality { count } => write!(
                f,
                "cardinality: {count} intervals contain point {}",
                rational::format(&self.point)
            ),
            ViolationKind::Bandwidth { coord, sum } => write!(
                f,
                "bandwidth: coordinate {coord} sums to {} at point {}",
                rational::format(sum),
                rational::format(&self.point)
            ),
        }
    }
}

/// Load check for a set of intervals that all contain `point`.
fn load_violation<'a>(
    constraints: &GameConstraints,
    point: &Rational,
    members: impl Iterator<Item = &'a WeightedInterval>,
) -> Option<Violation> {
    let mut count = 0usize;
    let mut sums = vec![Rational::default(); constraints.d];
    for w in members {
        count += 1;
        if let Some(wv) = &w.weights {
            for (s, x) in sums.iter_mut().zip(wv.coords()) {
                *s += x;
            }
        }
    }
    if !constraints.k.allows(count) {
        return Some(Violation {
            point: point.clone(),
            kind: ViolationKind::Cardinality { count },
        });
    }
    let one = Rational::one();
    sums.into_iter()
        .enumerate()
        .find(|(_, s)| s > &one)
        .map(|(i, sum)| Violation {
            point: point.clone(),
            kind: ViolationKind::Bandwidth { coord: i + 1, sum },
        })
}

/// Presented intervals and the color classes the Algorithm built from them.
#[derive(Debug, Clone)]
pub struct ColoringState {
    constraints: GameConstraints,
    intervals: Vec<WeightedInterval>,
    colors: Vec<usize>,
    classes: BTreeMap<usize, Vec<usize>>,
}

impl ColoringState {
    pub fn new(constraints: GameConstraints) -> Self {
        Self {
            constraints,
            intervals: Vec::new(),
            colors: Vec::new(),
            classes: BTreeMap::new(),
        }
    }

    pub fn constraints(&self) -> &GameConstraints {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn intervals(&self) -> &[WeightedInterval] {
        &self.intervals
    }

    pub fn get(&self, id: usize) -> Option<&WeightedInterval> {
        id.checked_sub(1).and_then(|i| self.intervals.get(i))
    }

    pub fn color_of(&self, id: usize) -> Option<usize> {
        id.checked_sub(1).and_then(|i| self.colors.get(i)).copied()
    }

    /// Color per interval, in presentation order.
    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn class(&self, color: usize) -> impl Iterator<Item = &WeightedInterval> {
        self.classes
            .get(&color)
            .into_iter()
            .flatten()
            .map(move |&id| &self.intervals[id - 1])
    }

    pub fn used_colors(&self) -> impl Iterator<Item = usize> + '_ {
        self.classes.keys().copied()
    }

    /// Number of nonempty color classes.
    pub fn distinct_colors(&self) -> usize {
        self.classes.len()
    }

    /// Smallest color index above every used one.
    pub fn fresh_color(&self) -> usize {
        self.classes.keys().next_back().map_or(0, |c| c + 1)
    }

    /// First violation caused by adding `cand` to class `color`, scanning critical points
    /// inside `cand` in increasing order.
    pub fn check(&self, cand: &WeightedInterval, color: usize) -> Result<Option<Violation>> {
        cand.check_dimension(&self.constraints)?;
        let members: Vec<&WeightedInterval> = self
            .class(color)
            .filter(|w| w.interval.intersects(&cand.interval))
            .collect();
        let iv = &cand.interval;
        let mut points: BTreeSet<&Rational> = BTreeSet::new();
        points.insert(iv.left());
        points.insert(iv.right());
        for w in &members {
            for p in [w.interval.left(), w.interval.right()] {
                if iv.contains(p) {
                    points.insert(p);
                }
            }
        }
        for p in points {
            let here = members
                .iter()
                .copied()
                .filter(|w| w.interval.contains(p))
                .chain(std::iter::once(cand));
            if let Some(v) = load_violation(&self.constraints, p, here) {
                return Ok(Some(v));
            }
        }
        Ok(None)
    }

    pub fn can_assign(&self, cand: &WeightedInterval, color: usize) -> Result<bool> {
        Ok(self.check(cand, color)?.is_none())
    }

    /// Existing colors that can take `cand`, ascending.
    pub fn feasible_colors(&self, cand: &WeightedInterval) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for c in self.used_colors() {
            if self.can_assign(cand, c)? {
                out.push(c);
            }
        }
        Ok(out)
    }

    pub fn assign(&mut self, cand: WeightedInterval, color: usize) -> Result<()> {
        if cand.id != self.intervals.len() + 1 {
            return Err(Error::MalformedTranscript(format!(
                "interval id {} is not the next round {}",
                cand.id,
                self.intervals.len() + 1
            )));
        }
        if let Some(violation) = self.check(&cand, color)? {
            return Err(Error::IllegalMove {
                round: cand.id,
                color,
                violation,
            });
        }
        self.classes.entry(color).or_default().push(cand.id);
        self.colors.push(color);
        self.intervals.push(cand);
        Ok(())
    }
}

/// Independent whole-coloring check: every class, every endpoint of every member.
/// Returns the offending round (the latest interval containing the bad point) on failure.
pub fn full_sweep(
    constraints: &GameConstraints,
    intervals: &[WeightedInterval],
    colors: &[usize],
) -> std::result::Result<(), (usize, usize, Violation)> {
    let mut classes: BTreeMap<usize, Vec<&WeightedInterval>> = BTreeMap::new();
    for (w, &c) in intervals.iter().zip(colors) {
        classes.entry(c).or_default().push(w);
    }
    for (color, members) in classes {
        let points: BTreeSet<&Rational> = members
            .iter()
            .flat_map(|w| [w.interval.left(), w.interval.right()])
            .collect();
        for p in points {
            let here: Vec<&WeightedInterval> = members.iter().copied().filter(|w| w.interval.contains(p)).collect();
            if let Some(v) = load_violation(constraints, p, here.iter().copied()) {
                let round = here.iter().map(|w| w.id).max().unwrap_or(0);
                return Err((round, color, v));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::types::{Cardinality, Interval, WeightVector};
    use crate::rational::{int, ratio};

    fn plain(id: usize, l: Rational, r: Rational) -> WeightedInterval {
        WeightedInterval::new(id, Interval::new(l, r).unwrap(), None)
    }

    fn weighted(id: usize, l: Rational, r: Rational, w: Vec<Rational>) -> WeightedInterval {
        WeightedInterval::new(id, Interval::new(l, r).unwrap(), Some(WeightVector::new(w).unwrap()))
    }

    #[test]
    fn empty_class_accepts() {
        let s = ColoringState::new(GameConstraints::new(2, Cardinality::Unbounded));
        let c = weighted(1, int(0), int(1), vec![int(1), int(1)]);
        assert!(s.can_assign(&c, 0).unwrap());
        assert_eq!(s.distinct_colors(), 0);
    }

    #[test]
    fn proper_overlap_rejected() {
        let mut s = ColoringState::new(GameConstraints::proper());
        s.assign(plain(1, int(0), int(1)), 0).unwrap();
        assert!(!s.can_assign(&plain(2, ratio(1, 2), ratio(3, 2)), 0).unwrap());
        // touching endpoints intersect
        assert!(!s.can_assign(&plain(2, int(1), int(2)), 0).unwrap());
        assert!(s.can_assign(&plain(2, int(2), int(3)), 0).unwrap());
    }

    #[test]
    fn bandwidth_example() {
        // eps = 1/4, d = 2: alpha = 7/8, delta = 1/16
        let mut s = ColoringState::new(GameConstraints::new(2, Cardinality::Unbounded));
        s.assign(weighted(1, int(0), int(1), vec![ratio(7, 8), ratio(1, 16)]), 0)
            .unwrap();
        let cand = weighted(2, int(0), int(1), vec![ratio(1, 4), ratio(7, 8)]);
        assert!(!s.can_assign(&cand, 0).unwrap());
        match s.assign(cand, 0) {
            Err(Error::IllegalMove { round, violation, .. }) => {
                assert_eq!(round, 2);
                assert_eq!(violation.point, int(0));
                assert_eq!(
                    violation.kind,
                    ViolationKind::Bandwidth {
                        coord: 1,
                        sum: ratio(9, 8)
                    }
                );
            }
            other => panic!("expected IllegalMove, got {other:?}"),
        }
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn cardinality_limit() {
        let mut s = ColoringState::new(GameConstraints::new(0, Cardinality::Finite(2)));
        s.assign(plain(1, int(0), int(3)), 0).unwrap();
        s.assign(plain(2, int(1), int(4)), 0).unwrap();
        match s.assign(plain(3, int(2), int(5)), 0) {
            Err(Error::IllegalMove { violation, .. }) => {
                assert!(matches!(violation.kind, ViolationKind::Cardinality { count: 3 }))
            }
            other => panic!("{other:?}"),
        }
        // staggered so no point holds three
        s.assign(plain(3, int(7) / int(2), int(5)), 0).unwrap();
    }

    #[test]
    fn dimension_mismatch() {
        let s = ColoringState::new(GameConstraints::new(2, Cardinality::Unbounded));
        let c = weighted(1, int(0), int(1), vec![int(1)]);
        assert!(matches!(
            s.can_assign(&c, 0),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
        let c = plain(1, int(0), int(1));
        assert!(matches!(s.can_assign(&c, 0), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn distinct_colors_need_not_be_contiguous() {
        let mut s = ColoringState::new(GameConstraints::proper());
        s.assign(plain(1, int(0), int(1)), 0).unwrap();
        s.assign(plain(2, int(0), int(1)), 5).unwrap();
        assert_eq!(s.distinct_colors(), 2);
        assert_eq!(s.fresh_color(), 6);
        assert_eq!(s.feasible_colors(&plain(3, int(2), int(3))).unwrap(), vec![0, 5]);
    }

    #[test]
    fn non_consecutive_id_rejected() {
        let mut s = ColoringState::new(GameConstraints::proper());
        assert!(matches!(
            s.assign(plain(2, int(0), int(1)), 0),
            Err(Error::MalformedTranscript(_))
        ));
    }
}
