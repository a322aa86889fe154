//! Recursive Presenter strategy S_m for general intervals.
//!
//! S_1 is a single HS call over the region. S_m splits its region into disjoint sub-regions
//! on demand and plays S_{m-1} in each, until either the Algorithm has used T_m colors, or
//! four sub-regions ended with the same canonical T_{m-1}-subset C* of colors. In the second
//! case Presenter plays two covering calls K1, K2 at a finer eps rung and, depending on how
//! much their color sets overlap, either one bridging call K3 or two bridging calls K4, K5.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::game::{CallTag, Cardinality, Interval, Referee, SmRole};
use crate::hs_interval::{self, per_call_guarantee, CallDescriptor};
use crate::rational::{self, Rational};

pub const DEFAULT_REGION_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmConfig {
    pub m: usize,
    pub d: usize,
    pub k: Cardinality,
    pub region: Interval,
    pub region_cap: usize,
    /// Ladder offset: this instance uses eps indices `eps_base + 1 ..= eps_base + 3m`.
    pub eps_base: u32,
}

impl SmConfig {
    pub fn new(m: usize, d: usize, k: Cardinality) -> Self {
        Self {
            m,
            d,
            k,
            region: Interval::new(rational::zero(), rational::one()).expect("unit region"),
            region_cap: DEFAULT_REGION_CAP,
            eps_base: 0,
        }
    }

    fn child(&self, region: Interval) -> Self {
        Self {
            m: self.m - 1,
            region,
            ..self.clone()
        }
    }
}

/// Integer guarantee T_m: `T_1 = G(d)`, `T_{m+1} = T_m + 2G + ceil(G/2)`.
pub fn guarantee_sm(m: usize, d: usize) -> usize {
    let g = per_call_guarantee(d);
    g + (m.saturating_sub(1)) * (2 * g + g.div_ceil(2))
}

/// `ceil((5m - 3) d / (log2 d + 3))`, for reporting.
pub fn paper_bound_sm(m: usize, d: usize) -> usize {
    rational::ceil_div_log2_plus3(((5 * m - 3) * d) as u64, d as u64) as usize
}

/// `m (floor(d/k) + floor(log2 d) + 3)`: the colorability the construction claims.
pub fn paper_colorability_bound(m: usize, d: usize, k: Cardinality) -> usize {
    m * hs_interval::presenter_bound(d, k)
}

/// Sub-region for slot `i >= 1`: the middle half of `[A + w(1 - 2^{1-i}), A + w(1 - 2^{-i})]`.
pub fn sub_region(parent: &Interval, slot: usize) -> Interval {
    assert!(slot >= 1, "slots are 1-based");
    let w = parent.length();
    let slot_len = &w * rational::inverse_power(2, slot as u32);
    let start = parent.left() + &w - &slot_len * rational::int(2);
    let quarter = &slot_len / rational::int(4);
    let left = &start + &quarter;
    let right = &start + &quarter * rational::int(3);
    Interval::new(left, right).expect("nonempty slot")
}

/// The first `s` distinct colors in order of first use.
pub fn canonical_subset(colors: &[usize], s: usize) -> Result<Vec<usize>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(s);
    for &c in colors {
        if out.len() == s {
            break;
        }
        if seen.insert(c) {
            out.push(c);
        }
    }
    if out.len() < s {
        return Err(Error::TooFewColors {
            needed: s,
            available: out.len(),
        });
    }
    Ok(out)
}

/// First color set to occur four times, with its four (1-based) positions.
pub fn detect_quadruple(seen: &[BTreeSet<usize>]) -> Option<(BTreeSet<usize>, [usize; 4])> {
    let mut hits: BTreeMap<&BTreeSet<usize>, Vec<usize>> = BTreeMap::new();
    for (i, set) in seen.iter().enumerate() {
        let v = hits.entry(set).or_default();
        v.push(i + 1);
        if v.len() == 4 {
            return Some((set.clone(), [v[0], v[1], v[2], v[3]]));
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    /// Small overlap of D1 and D2: one bridging call K3.
    Case1,
    /// Large overlap: bridging calls K4 and K5.
    Case2,
}

pub fn case_split(d1: &BTreeSet<usize>, d2: &BTreeSet<usize>, g: usize) -> Case {
    if d1.intersection(d2).count() <= g / 2 {
        Case::Case1
    } else {
        Case::Case2
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quadruple {
    pub colors: BTreeSet<usize>,
    /// 1-based sub-region indices, increasing.
    pub regions: [usize; 4],
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DSets {
    pub d1: Option<BTreeSet<usize>>,
    pub d2: Option<BTreeSet<usize>>,
    pub d3: Option<BTreeSet<usize>>,
    pub d4: Option<BTreeSet<usize>>,
    pub d5: Option<BTreeSet<usize>>,
}

#[derive(Debug, Clone)]
pub struct SmOutcome {
    pub m: usize,
    pub region: Interval,
    /// Region slots from the outermost instance.
    pub path: Vec<usize>,
    /// The lone call of an S_1 instance.
    pub base: Option<CallDescriptor>,
    pub regions: Vec<SmOutcome>,
    /// C_j for each sub-region.
    pub region_sets: Vec<BTreeSet<usize>>,
    pub quadruple: Option<Quadruple>,
    pub case_taken: Option<Case>,
    pub k_calls: Vec<(SmRole, CallDescriptor)>,
    pub d_sets: DSets,
    pub distinct_colors: usize,
    pub guarantee: usize,
    pub early_stop: bool,
    /// Disjointness relations checked in this subtree.
    pub invariant_checks: usize,
}

impl SmOutcome {
    pub fn regions_used(&self) -> usize {
        self.regions.len()
    }

    /// Every call in the subtree, in play order.
    pub fn all_calls(&self) -> Vec<&CallDescriptor> {
        let mut out: Vec<&CallDescriptor> = self.base.iter().collect();
        for r in &self.regions {
            out.extend(r.all_calls());
        }
        out.extend(self.k_calls.iter().map(|(_, c)| c));
        out
    }

    /// Largest number of sub-regions any instance in the subtree opened.
    pub fn max_regions_used(&self) -> usize {
        self.regions
            .iter()
            .map(SmOutcome::max_regions_used)
            .chain(std::iter::once(self.regions.len()))
            .max()
            .unwrap_or(0)
    }
}

fn disjoint(what: &str, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> Result<()> {
    if let Some(c) = a.intersection(b).next() {
        return Err(Error::InvariantViolated(format!("{what}: color {c} in both")));
    }
    Ok(())
}

fn distinct_in(referee: &Referee<'_>, from_round: usize) -> Vec<usize> {
    referee.colors_from(from_round)
}

/// Plays S_m in `cfg.region` against the referee's Algorithm.
pub fn run_sm(cfg: &SmConfig, referee: &mut Referee<'_>) -> Result<SmOutcome> {
    if cfg.m == 0 {
        return Err(Error::BadParameter("S_m needs m >= 1".into()));
    }
    if cfg.d < 2 {
        return Err(Error::BadParameter("S_m needs d >= 2".into()));
    }
    run_at(cfg, Vec::new(), referee)
}

fn run_at(cfg: &SmConfig, path: Vec<usize>, referee: &mut Referee<'_>) -> Result<SmOutcome> {
    let start = referee.round() + 1;
    let g = per_call_guarantee(cfg.d);
    let guarantee = guarantee_sm(cfg.m, cfg.d);
    let mut out = SmOutcome {
        m: cfg.m,
        region: cfg.region.clone(),
        path: path.clone(),
        base: None,
        regions: Vec::new(),
        region_sets: Vec::new(),
        quadruple: None,
        case_taken: None,
        k_calls: Vec::new(),
        d_sets: DSets::default(),
        distinct_colors: 0,
        guarantee,
        early_stop: false,
        invariant_checks: 0,
    };

    if cfg.m == 1 {
        let tag = CallTag::Sm {
            path,
            role: SmRole::Base,
        };
        out.base = Some(hs_interval::run_call(referee, cfg.eps_base + 1, &cfg.region, tag)?);
    } else {
        let inner_guarantee = guarantee_sm(cfg.m - 1, cfg.d);
        let mut slot = 0;
        let quad = loop {
            slot += 1;
            if slot > cfg.region_cap {
                return Err(Error::RegionCapExceeded { cap: cfg.region_cap });
            }
            let region_start = referee.round() + 1;
            let mut child_path = path.clone();
            child_path.push(slot);
            let child = run_at(&cfg.child(sub_region(&cfg.region, slot)), child_path, referee)?;
            out.invariant_checks += child.invariant_checks;
            out.regions.push(child);
            let region_colors = distinct_in(referee, region_start);
            let c_j: BTreeSet<usize> = canonical_subset(&region_colors, inner_guarantee)?.into_iter().collect();
            out.region_sets.push(c_j);
            let so_far: BTreeSet<usize> = distinct_in(referee, start).into_iter().collect();
            if so_far.len() >= guarantee {
                out.early_stop = true;
                break None;
            }
            if let Some(q) = detect_quadruple(&out.region_sets) {
                break Some(q);
            }
        };

        if let Some((c_star, [a, b, c, d])) = quad {
            let reg = |i: usize| sub_region(&cfg.region, i);
            let (ra, rb, rc, rd) = (reg(a), reg(b), reg(c), reg(d));
            let p = |ri: &Interval, i: usize| rational::midpoint(ri.right(), reg(i + 1).left());
            let (pa, pb, pc) = (p(&ra, a), p(&rb, b), p(&rc, c));
            let between = |x: &Rational, y: &Rational| rational::midpoint(x, y);
            let span = |l: Rational, r: Rational| Interval::new(l, r);
            let base = cfg.eps_base + 3 * (cfg.m as u32 - 1);

            let k_call = |role: SmRole, eps: u32, region: Interval, referee: &mut Referee<'_>| {
                let tag = CallTag::Sm {
                    path: path.clone(),
                    role,
                };
                hs_interval::run_call(referee, eps, &region, tag).map(|desc| (role, desc))
            };
            let colors_of =
                |desc: &CallDescriptor| -> BTreeSet<usize> { desc.algorithm_colors.iter().copied().collect() };
            let subset = |desc: &CallDescriptor| -> Result<BTreeSet<usize>> {
                Ok(canonical_subset(&desc.algorithm_colors, g)?.into_iter().collect())
            };

            let k1 = k_call(SmRole::K1, base + 1, span(ra.left().clone(), pa.clone())?, referee)?;
            let k2 = k_call(
                SmRole::K2,
                base + 1,
                span(between(rc.right(), &pc), rd.right().clone())?,
                referee,
            )?;
            let d1 = subset(&k1.1)?;
            let d2 = subset(&k2.1)?;
            let case = case_split(&d1, &d2, g);
            out.k_calls.push(k1);
            out.k_calls.push(k2);
            match case {
                Case::Case1 => {
                    let k3 = k_call(
                        SmRole::K3,
                        base + 2,
                        span(between(ra.right(), &pa), pc.clone())?,
                        referee,
                    )?;
                    let d3 = colors_of(&k3.1);
                    disjoint("D3 and D1", &d3, &d1)?;
                    disjoint("D3 and D2", &d3, &d2)?;
                    out.invariant_checks += 2;
                    out.d_sets.d3 = Some(d3);
                    out.k_calls.push(k3);
                }
                Case::Case2 => {
                    let k4 = k_call(
                        SmRole::K4,
                        base + 2,
                        span(between(rb.right(), &pb), pc.clone())?,
                        referee,
                    )?;
                    let k5 = k_call(
                        SmRole::K5,
                        base + 3,
                        span(between(ra.right(), &pa), pb.clone())?,
                        referee,
                    )?;
                    let d4 = subset(&k4.1)?;
                    let d5 = colors_of(&k5.1);
                    disjoint("D2 and D4", &d2, &d4)?;
                    disjoint("D1 and D5", &d1, &d5)?;
                    disjoint("D4 and D5", &d4, &d5)?;
                    out.invariant_checks += 3;
                    out.d_sets.d4 = Some(d4);
                    out.d_sets.d5 = Some(d5);
                    out.k_calls.push(k4);
                    out.k_calls.push(k5);
                }
            }
            for (role, desc) in &out.k_calls {
                disjoint(&format!("C* and {role:?}"), &c_star, &colors_of(desc))?;
                out.invariant_checks += 1;
            }
            out.d_sets.d1 = Some(d1);
            out.d_sets.d2 = Some(d2);
            out.case_taken = Some(case);
            out.quadruple = Some(Quadruple {
                colors: c_star,
                regions: [a, b, c, d],
            });
        }
    }

    let used: BTreeSet<usize> = distinct_in(referee, start).into_iter().collect();
    out.distinct_colors = used.len();
    if out.distinct_colors < guarantee {
        return Err(Error::BoundViolated {
            what: format!("S_{} at {:?}", cfg.m, out.path),
            colors: out.distinct_colors,
            guarantee,
        });
    }
    Ok(out)
}
