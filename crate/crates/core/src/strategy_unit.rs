//! Three-phase Presenter strategy for unit intervals.
//!
//! Initial phase: `floor(m/2)` HS calls over `[0,1]`; C_init collects G(d) colors from each.
//! Separation phase: `2 floor(m/2)` subphases. Each places d unit intervals `[p, p+1]` by a
//! binary search inside a window of `(3/2, 2)` (moving right when the Algorithm answers
//! outside C_init, left otherwise) and weights them with a fresh HS call. Subphases are then
//! marked or not, and the window shrinks so that everything left of the final midpoint P was
//! colored outside C_init in a marked subphase. Final phase: `ceil(m/2)` HS calls over
//! `[P-1, P]`, which meet every interval the Algorithm colored with C_init or C_sep.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::game::{CallTag, Interval, MoveRequest, Phase, Referee};
use crate::hs_interval::{self, per_call_guarantee, CallDescriptor, HsCall};
use crate::rational::{self, Rational};
use crate::strategy_sm::canonical_subset;

/// `floor(m/2) (G + ceil(G/2)) + ceil(m/2) G`.
pub fn guarantee_unit(m: usize, d: usize) -> usize {
    let g = per_call_guarantee(d);
    (m / 2) * (g + g.div_ceil(2)) + m.div_ceil(2) * g
}

/// `ceil(floor(5m/2) d / (log2 d + 3))`, for reporting.
pub fn paper_bound_unit(m: usize, d: usize) -> usize {
    rational::ceil_div_log2_plus3(((5 * m / 2) * d) as u64, d as u64) as usize
}

/// Binary-search placement of one subphase.
#[derive(Debug, Clone)]
pub struct SepState {
    l: Rational,
    r: Rational,
    /// Left endpoints handed out so far, with whether each was marked.
    placed: Vec<(Rational, bool)>,
    pending: Option<Rational>,
    checks: usize,
}

impl SepState {
    pub fn new(l: Rational, r: Rational) -> Result<Self> {
        if l >= r {
            return Err(Error::RegionDegenerate);
        }
        Ok(Self {
            l,
            r,
            placed: Vec::new(),
            pending: None,
            checks: 0,
        })
    }

    pub fn l(&self) -> &Rational {
        &self.l
    }

    pub fn r(&self) -> &Rational {
        &self.r
    }

    /// Left endpoints that were marked (colored outside C_init).
    pub fn marked_positions(&self) -> impl Iterator<Item = &Rational> {
        self.placed.iter().filter(|(_, m)| *m).map(|(p, _)| p)
    }

    /// Number of times the "only marked endpoints left of p" property was checked.
    pub fn checks(&self) -> usize {
        self.checks
    }

    /// Next interval `[p, p+1]`, `p = (l + r)/2`.
    pub fn sep_next(&mut self) -> Result<Interval> {
        let p = rational::midpoint(&self.l, &self.r);
        if let Some((q, _)) = self.placed.iter().find(|(q, marked)| q < &p && !marked) {
            return Err(Error::InvariantViolated(format!(
                "unmarked left endpoint {} lies left of {}",
                rational::format(q),
                rational::format(&p)
            )));
        }
        self.checks += 1;
        let iv = Interval::new(p.clone(), &p + rational::one())?;
        self.pending = Some(p);
        Ok(iv)
    }

    /// `r := p` on an answer inside C_init, otherwise mark and `l := p`.
    pub fn sep_feed(&mut self, in_c_init: bool) -> Result<()> {
        let p = self
            .pending
            .take()
            .ok_or_else(|| Error::InternalInvariantBroken("no pending separation interval".into()))?;
        if in_c_init {
            self.r = p.clone();
        } else {
            self.l = p.clone();
        }
        self.placed.push((p, !in_c_init));
        Ok(())
    }
}

/// Whether subphase i gets marked.
pub fn mark_decision(c_i: usize, remaining_incl_current: usize, marked_so_far: usize, m: usize, g: usize) -> bool {
    let half = m / 2;
    let forced = remaining_incl_current == half.saturating_sub(marked_so_far);
    forced || (c_i >= g.div_ceil(2) && marked_so_far < half)
}

/// Next window: `(L, R)` after a marked subphase, `(L_i, L*)` otherwise.
pub fn window_update(
    marked: bool,
    l_i: &Rational,
    _r_i: &Rational,
    l: &Rational,
    r: &Rational,
    l_star: &Rational,
) -> (Rational, Rational) {
    if marked {
        (l.clone(), r.clone())
    } else {
        (l_i.clone(), l_star.clone())
    }
}

#[derive(Debug, Clone)]
pub struct SubphaseRecord {
    pub index: usize,
    pub window: (Rational, Rational),
    pub eps_index: u32,
    pub call: CallDescriptor,
    /// C_i: subphase colors outside C_init.
    pub colors_outside: BTreeSet<usize>,
    pub marked: bool,
    /// Leftmost left endpoint.
    pub leftmost: Rational,
    /// Rightmost left endpoint colored outside C_init (default L_i).
    pub last_outside: Rational,
    /// Leftmost left endpoint colored inside C_init (default R_i).
    pub first_inside: Rational,
    pub sep_checks: usize,
}

#[derive(Debug, Clone)]
pub struct UnitOutcome {
    pub m: usize,
    pub d: usize,
    pub initial: Vec<CallDescriptor>,
    pub c_init: BTreeSet<usize>,
    pub subphases: Vec<SubphaseRecord>,
    pub m_prime: usize,
    pub p: Rational,
    pub final_calls: Vec<CallDescriptor>,
    /// Colors on separation intervals left of P.
    pub c_sep: BTreeSet<usize>,
    pub distinct_colors: usize,
    pub guarantee: usize,
    /// Transcript-level relations verified after the game.
    pub invariant_checks: usize,
}

impl UnitOutcome {
    pub fn marked(&self) -> impl Iterator<Item = &SubphaseRecord> {
        self.subphases.iter().filter(|s| s.marked)
    }

    pub fn sep_checks(&self) -> usize {
        self.subphases.iter().map(|s| s.sep_checks).sum()
    }
}

/// Initial phase: `floor(m/2)` calls over `[0,1]` at eps indices `1..=floor(m/2)`.
pub fn run_initial(m: usize, referee: &mut Referee<'_>) -> Result<(Vec<CallDescriptor>, BTreeSet<usize>)> {
    let d = referee.constraints().d;
    let g = per_call_guarantee(d);
    let unit = Interval::new(rational::zero(), rational::one())?;
    let mut calls = Vec::new();
    let mut c_init = BTreeSet::new();
    for i in 1..=m / 2 {
        let tag = CallTag::Unit {
            phase: Phase::Initial,
            index: i,
            marked: None,
        };
        let desc = hs_interval::run_call(referee, i as u32, &unit, tag)?;
        c_init.extend(canonical_subset(&desc.algorithm_colors, g)?);
        calls.push(desc);
    }
    if c_init.len() != (m / 2) * g {
        return Err(Error::InvariantViolated(format!(
            "C_init has {} colors, expected {}",
            c_init.len(),
            (m / 2) * g
        )));
    }
    Ok((calls, c_init))
}

/// One separation subphase over window `(L_i, R_i)` at eps index i. Marking is decided by
/// the caller.
pub fn run_subphase(
    i: usize,
    window: (Rational, Rational),
    c_init: &BTreeSet<usize>,
    referee: &mut Referee<'_>,
) -> Result<SubphaseRecord> {
    let c = *referee.constraints();
    let eps_index = i as u32;
    let call_id = referee.open_call(CallTag::Unit {
        phase: Phase::Sep,
        index: i,
        marked: None,
    });
    let unit = Interval::new(rational::zero(), rational::one())?;
    let mut call = HsCall::new(call_id, eps_index, c.d, c.k, unit)?;
    let mut sep = SepState::new(window.0.clone(), window.1.clone())?;
    let mut leftmost: Option<Rational> = None;
    let mut last_outside: Option<Rational> = None;
    let mut first_inside: Option<Rational> = None;
    let mut colors_outside = BTreeSet::new();
    while !call.is_complete() {
        let weights = call.next_weights()?;
        let interval = sep.sep_next()?;
        let p = interval.left().clone();
        let gamma = referee.present(MoveRequest {
            interval: interval.clone(),
            weights: Some(weights),
            call: Some(call_id),
            eps_index: Some(eps_index),
            phase: Some(Phase::Sep),
            subphase: Some(i),
        })?;
        let round = referee.round();
        let rho = call.call_feed(round, interval, gamma)?;
        referee.set_presenter_color(round, rho)?;
        let inside = c_init.contains(&gamma);
        sep.sep_feed(inside)?;
        if leftmost.as_ref().is_none_or(|x| &p < x) {
            leftmost = Some(p.clone());
        }
        if inside {
            if first_inside.as_ref().is_none_or(|x| &p < x) {
                first_inside = Some(p);
            }
        } else {
            colors_outside.insert(gamma);
            if last_outside.as_ref().is_none_or(|x| &p > x) {
                last_outside = Some(p);
            }
        }
    }
    let sep_checks = sep.checks();
    Ok(SubphaseRecord {
        index: i,
        eps_index,
        call: call.finish()?,
        colors_outside,
        marked: false,
        leftmost: leftmost.expect("d >= 2 intervals"),
        last_outside: last_outside.unwrap_or_else(|| window.0.clone()),
        first_inside: first_inside.unwrap_or_else(|| window.1.clone()),
        window,
        sep_checks,
    })
}

/// Plays the whole strategy for `m >= 1` against the referee's Algorithm.
pub fn run_unit(m: usize, referee: &mut Referee<'_>) -> Result<UnitOutcome> {
    let d = referee.constraints().d;
    if m == 0 {
        return Err(Error::BadParameter("unit strategy needs m >= 1".into()));
    }
    if d < 2 {
        return Err(Error::BadParameter("unit strategy needs d >= 2".into()));
    }
    let g = per_call_guarantee(d);
    let half = m / 2;
    let m_prime = 2 * half;

    let (initial, c_init) = run_initial(m, referee)?;

    let mut window = (rational::ratio(3, 2), rational::int(2));
    let mut subphases: Vec<SubphaseRecord> = Vec::with_capacity(m_prime);
    let mut marked_count = 0;
    for i in 1..=m_prime {
        let mut rec = run_subphase(i, window.clone(), &c_init, referee)?;
        rec.marked = mark_decision(rec.colors_outside.len(), m_prime - i + 1, marked_count, m, g);
        marked_count += rec.marked as usize;
        referee.retag_call(
            rec.call.call_id,
            CallTag::Unit {
                phase: Phase::Sep,
                index: i,
                marked: Some(rec.marked),
            },
        );
        window = window_update(
            rec.marked,
            &window.0,
            &window.1,
            &rec.last_outside,
            &rec.first_inside,
            &rec.leftmost,
        );
        if window.0 >= window.1 {
            return Err(Error::RegionDegenerate);
        }
        subphases.push(rec);
    }

    let final_region = if m_prime == 0 {
        Interval::new(rational::zero(), rational::one())?
    } else {
        let p = rational::midpoint(&window.0, &window.1);
        Interval::new(&p - rational::one(), p)?
    };
    let p = final_region.right().clone();
    let mut final_calls = Vec::new();
    for j in 1..=m.div_ceil(2) {
        let tag = CallTag::Unit {
            phase: Phase::Final,
            index: j,
            marked: None,
        };
        final_calls.push(hs_interval::run_call(referee, (m + j) as u32, &final_region, tag)?);
    }

    let mut out = UnitOutcome {
        m,
        d,
        initial,
        c_init,
        subphases,
        m_prime,
        p,
        final_calls,
        c_sep: BTreeSet::new(),
        distinct_colors: referee.state().distinct_colors(),
        guarantee: guarantee_unit(m, d),
        invariant_checks: 0,
    };
    check_outcome(&mut out, referee)?;
    Ok(out)
}

/// Post-game relations of the construction; fills in C_sep.
fn check_outcome(out: &mut UnitOutcome, referee: &Referee<'_>) -> Result<()> {
    let fail = |msg: String| Err(Error::InvariantViolated(msg));
    let one = rational::one();
    for mv in referee.moves() {
        let iv = mv.interval.as_ref().expect("interval game");
        if iv.length() != one {
            return fail(format!("round {} has length {}", mv.round, iv.length()));
        }
    }
    out.invariant_checks += referee.moves().len();

    let (lo, hi) = (rational::ratio(3, 2), rational::int(2));
    for s in &out.subphases {
        if !(lo <= s.window.0 && s.window.0 < s.window.1 && s.window.1 <= hi) {
            return fail(format!("subphase {} window leaves [3/2, 2]", s.index));
        }
        for (iv, &color) in s.call.intervals.iter().zip(&s.call.algorithm_colors) {
            let left_of_p = iv.left() < &out.p;
            if !s.marked && !left_of_p {
                continue;
            }
            if left_of_p {
                if !s.marked || out.c_init.contains(&color) {
                    return fail(format!(
                        "separation interval at {} left of P is not a marked outside-C_init interval",
                        rational::format(iv.left())
                    ));
                }
                out.c_sep.insert(color);
            }
        }
        if !s.marked && s.call.intervals.iter().any(|iv| iv.left() <= &out.p) {
            return fail(format!("unmarked subphase {} reaches left of P", s.index));
        }
        out.invariant_checks += 1;
    }

    let marked = out.marked().count();
    if marked != out.m / 2 {
        return fail(format!("{marked} marked subphases, expected {}", out.m / 2));
    }
    let final_colors: BTreeSet<usize> = out
        .final_calls
        .iter()
        .flat_map(|c| c.algorithm_colors.iter().copied())
        .collect();
    if let Some(c) = final_colors.intersection(&out.c_init).next() {
        return fail(format!("final-phase color {c} is in C_init"));
    }
    if let Some(c) = final_colors.intersection(&out.c_sep).next() {
        return fail(format!("final-phase color {c} is in C_sep"));
    }
    out.invariant_checks += 3;

    if out.distinct_colors < out.guarantee {
        return Err(Error::BoundViolated {
            what: format!("unit m={}", out.m),
            colors: out.distinct_colors,
            guarantee: out.guarantee,
        });
    }
    Ok(())
}
