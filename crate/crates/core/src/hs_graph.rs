//! Transparent Presenter strategy for the n-round k-bounded on-line graph coloring game.
//!
//! Presenter keeps a progress matrix whose rows are its own colors and whose columns are
//! Algorithm colors. Each round it picks an active pattern (a small set of active rows)
//! that no column currently shows, presents a vertex adjacent to everything it colored
//! outside that pattern, and then colors the vertex itself with a row of the pattern whose
//! cell in the Algorithm's column is still empty.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::algorithms::{GraphAlgorithm, GraphView};
use crate::error::{Error, Result};
use crate::game::{Cardinality, Move};
use crate::rational;

/// Number of active rows for an n-round game: `floor(log2 n) + 3`.
pub fn active_row_count(n: usize) -> usize {
    rational::floor_log2(n as u64) as usize + 3
}

fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// True iff `sum_{1 <= x <= floor(b/2)} x * C(b, x) >= n`, i.e. the pattern supply lasts n rounds.
pub fn game_length_check(b: usize, n: usize) -> bool {
    let total: u128 = (1..=b / 2).map(|x| x as u128 * binomial(b, x)).sum();
    total >= n as u128
}

/// Minimum number of distinct Algorithm colors after n rounds: `ceil(n / floor(b/2))`.
pub fn guarantee_hs_columns(n: usize, b: usize) -> usize {
    n.div_ceil(b / 2)
}

/// The real-valued `2n / (log2 n + 3)`, rounded up.
pub fn paper_bound_hs(n: usize) -> usize {
    rational::ceil_div_log2_plus3(2 * n as u64, n as u64) as usize
}

/// Presenter colors one game may use: `floor(n/k) + b`.
pub fn presenter_bound(n: usize, k: Cardinality) -> usize {
    k.div_floor(n) + active_row_count(n)
}

/// A set of rows, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern(Vec<usize>);

impl Pattern {
    pub fn new(rows: impl IntoIterator<Item = usize>) -> Self {
        let set: BTreeSet<usize> = rows.into_iter().collect();
        Pattern(set.into_iter().collect())
    }

    pub fn rows(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, row: usize) -> bool {
        self.0.binary_search(&row).is_ok()
    }

    pub fn is_strict_subset_of(&self, other: &Pattern) -> bool {
        self.len() < other.len() && self.0.iter().all(|r| other.contains(*r))
    }
}

/// Cells `(row, column) -> vertex`; at most one vertex per cell.
#[derive(Debug, Clone, Default)]
pub struct ProgressMatrix {
    cells: BTreeMap<(usize, usize), usize>,
    rows: BTreeMap<usize, usize>,
    columns: BTreeMap<usize, BTreeSet<usize>>,
}

impl ProgressMatrix {
    pub fn get(&self, row: usize, col: usize) -> Option<usize> {
        self.cells.get(&(row, col)).copied()
    }

    pub fn row_len(&self, row: usize) -> usize {
        self.rows.get(&row).copied().unwrap_or(0)
    }

    pub fn column_len(&self, col: usize) -> usize {
        self.columns.get(&col).map_or(0, BTreeSet::len)
    }

    /// The pattern representing column `col` (empty for an empty column).
    pub fn column_pattern(&self, col: usize) -> Pattern {
        Pattern(
            self.columns
                .get(&col)
                .map(|s| s.iter().copied().collect())
                .unwrap_or_default(),
        )
    }

    pub fn nonempty_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn nonempty_rows(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn column_patterns(&self) -> impl Iterator<Item = (usize, Pattern)> + '_ {
        self.columns
            .iter()
            .map(|(c, rows)| (*c, Pattern(rows.iter().copied().collect())))
    }

    fn insert(&mut self, row: usize, col: usize, vertex: usize) -> Result<()> {
        if let Some(v) = self.cells.insert((row, col), vertex) {
            return Err(Error::InternalInvariantBroken(format!(
                "cell ({row},{col}) already holds vertex {v}"
            )));
        }
        *self.rows.entry(row).or_default() += 1;
        self.columns.entry(col).or_default().insert(row);
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct Pending {
    vertex: usize,
    pattern: Pattern,
}

/// State of one HS_{k,n} game.
#[derive(Debug, Clone)]
pub struct HsGraph {
    k: Cardinality,
    n: usize,
    b: usize,
    matrix: ProgressMatrix,
    active_rows: BTreeSet<usize>,
    depleted_rows: BTreeSet<usize>,
    next_row: usize,
    /// Earlier neighbors of each vertex (index = vertex - 1).
    adjacency: Vec<Vec<usize>>,
    presenter_colors: Vec<usize>,
    algorithm_colors: Vec<usize>,
    pending: Option<Pending>,
    subset_checks: usize,
}

impl HsGraph {
    pub fn new(k: Cardinality, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadParameter(format!("HS game needs n >= 2, got {n}")));
        }
        let b = active_row_count(n);
        if !game_length_check(b, n) {
            return Err(Error::InternalInvariantBroken(format!(
                "pattern supply of b={b} cannot last {n} rounds"
            )));
        }
        Ok(Self {
            k,
            n,
            b,
            matrix: ProgressMatrix::default(),
            active_rows: (1..=b).collect(),
            depleted_rows: BTreeSet::new(),
            next_row: b + 1,
            adjacency: Vec::new(),
            presenter_colors: Vec::new(),
            algorithm_colors: Vec::new(),
            pending: None,
            subset_checks: 0,
        })
    }

    /// Rebuilds a mid-game state from matrix placements `(vertex, row, column)`; vertices are
    /// given no adjacency and `b` is the number of active rows supplied. Used to study
    /// hand-written positions.
    pub fn from_progress(
        k: Cardinality,
        n: usize,
        placements: &[(usize, usize, usize)],
        active_rows: &[usize],
        depleted_rows: &[usize],
    ) -> Result<Self> {
        let mut hs = Self::new(k, n)?;
        if active_rows.is_empty() {
            return Err(Error::BadParameter("no active rows".into()));
        }
        hs.b = active_rows.len();
        let count = placements.iter().map(|p| p.0).max().unwrap_or(0);
        hs.adjacency = vec![Vec::new(); count];
        hs.presenter_colors = vec![0; count];
        hs.algorithm_colors = vec![0; count];
        for &(v, row, col) in placements {
            hs.matrix.insert(row, col, v)?;
            hs.presenter_colors[v - 1] = row;
            hs.algorithm_colors[v - 1] = col;
        }
        hs.active_rows = active_rows.iter().copied().collect();
        hs.depleted_rows = depleted_rows.iter().copied().collect();
        hs.next_row = hs
            .active_rows
            .iter()
            .chain(&hs.depleted_rows)
            .chain(hs.presenter_colors.iter())
            .max()
            .map_or(1, |r| r + 1);
        Ok(hs)
    }

    pub fn k(&self) -> Cardinality {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn round(&self) -> usize {
        self.presenter_colors.len()
    }

    pub fn matrix(&self) -> &ProgressMatrix {
        &self.matrix
    }

    pub fn active_rows(&self) -> &BTreeSet<usize> {
        &self.active_rows
    }

    pub fn depleted_rows(&self) -> &BTreeSet<usize> {
        &self.depleted_rows
    }

    /// Earlier neighbors of `vertex` (1-based).
    pub fn neighbors(&self, vertex: usize) -> &[usize] {
        &self.adjacency[vertex - 1]
    }

    pub fn presenter_colors(&self) -> &[usize] {
        &self.presenter_colors
    }

    pub fn algorithm_colors(&self) -> &[usize] {
        &self.algorithm_colors
    }

    pub fn presenter_colors_used(&self) -> usize {
        self.presenter_colors.iter().collect::<BTreeSet<_>>().len()
    }

    pub fn algorithm_colors_used(&self) -> usize {
        self.matrix.nonempty_columns()
    }

    /// How many times the `q ⊊ p_t` assertion has been checked (and held).
    pub fn strict_subset_checks(&self) -> usize {
        self.subset_checks
    }

    pub fn pending_pattern(&self) -> Option<&Pattern> {
        self.pending.as_ref().map(|p| &p.pattern)
    }

    pub fn is_active_pattern(&self, p: &Pattern) -> bool {
        !p.is_empty() && p.len() <= self.b / 2 && p.rows().iter().all(|r| self.active_rows.contains(r))
    }

    /// Smallest non-present active pattern: by size, then lexicographically.
    pub fn choose_pattern(&self) -> Result<Pattern> {
        let present: HashSet<Pattern> = self.matrix.column_patterns().map(|(_, p)| p).collect();
        let rows: Vec<usize> = self.active_rows.iter().copied().collect();
        for size in 1..=self.b / 2 {
            let mut idx: Vec<usize> = (0..size).collect();
            loop {
                let p = Pattern(idx.iter().map(|&i| rows[i]).collect());
                if !present.contains(&p) {
                    return Ok(p);
                }
                if !next_combination(&mut idx, rows.len()) {
                    break;
                }
            }
        }
        Err(Error::PatternsExhausted)
    }

    /// Adds a vertex adjacent to every vertex Presenter colored outside `p`.
    pub fn make_vertex(&mut self, p: Pattern) -> Result<(usize, Vec<usize>)> {
        if self.pending.is_some() {
            return Err(Error::InternalInvariantBroken("previous vertex not colored yet".into()));
        }
        if !self.is_active_pattern(&p) {
            return Err(Error::InternalInvariantBroken(format!(
                "pattern {:?} is not active",
                p.rows()
            )));
        }
        if self.matrix.column_patterns().any(|(_, q)| q == p) {
            return Err(Error::InternalInvariantBroken(format!(
                "pattern {:?} already present",
                p.rows()
            )));
        }
        let vertex = self.round() + 1;
        let adj: Vec<usize> = self
            .presenter_colors
            .iter()
            .enumerate()
            .filter(|(_, &rho)| !p.contains(rho))
            .map(|(i, _)| i + 1)
            .collect();
        self.adjacency.push(adj.clone());
        self.pending = Some(Pending { vertex, pattern: p });
        Ok((vertex, adj))
    }

    pub fn next_vertex(&mut self) -> Result<(usize, Vec<usize>)> {
        let p = self.choose_pattern()?;
        self.make_vertex(p)
    }

    /// Records the Algorithm color of the pending vertex and answers with Presenter's color.
    pub fn respond(&mut self, gamma: usize) -> Result<usize> {
        let Pending { vertex, pattern } = self
            .pending
            .clone()
            .ok_or_else(|| Error::InternalInvariantBroken("no pending vertex".into()))?;
        let neighbors = &self.adjacency[vertex - 1];
        if let Some(u) = neighbors.iter().find(|&&u| self.algorithm_colors[u - 1] == gamma) {
            return Err(Error::IllegalAlgorithmMove {
                round: vertex,
                reason: format!("color {gamma} already on adjacent vertex {u}"),
            });
        }
        let uses = self.matrix.column_len(gamma);
        if !self.k.allows(uses + 1) {
            return Err(Error::IllegalAlgorithmMove {
                round: vertex,
                reason: format!("color {gamma} already used {uses} times, k = {}", self.k),
            });
        }
        let q = self.matrix.column_pattern(gamma);
        if !q.is_strict_subset_of(&pattern) {
            return Err(Error::InternalInvariantBroken(format!(
                "column {gamma} pattern {:?} is not a strict subset of {:?}",
                q.rows(),
                pattern.rows()
            )));
        }
        self.subset_checks += 1;
        let rho = pattern
            .rows()
            .iter()
            .copied()
            .find(|&r| self.matrix.get(r, gamma).is_none())
            .ok_or_else(|| Error::InternalInvariantBroken("no free row in pattern".into()))?;
        self.matrix.insert(rho, gamma, vertex)?;
        self.presenter_colors.push(rho);
        self.algorithm_colors.push(gamma);
        self.pending = None;
        if let Cardinality::Finite(k) = self.k {
            if self.matrix.row_len(rho) == k as usize {
                self.active_rows.remove(&rho);
                self.depleted_rows.insert(rho);
                self.active_rows.insert(self.next_row);
                self.next_row += 1;
            }
        }
        Ok(rho)
    }
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let s = idx.len();
    let mut i = s;
    while i > 0 {
        i -= 1;
        if idx[i] < n - s + i {
            idx[i] += 1;
            for j in i + 1..s {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Proper and k-bounded check for a coloring of a graph given by earlier-neighbor lists.
pub fn check_graph_coloring(
    adjacency: &[Vec<usize>],
    colors: &[usize],
    k: Cardinality,
) -> std::result::Result<(), String> {
    let mut uses: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, (adj, &c)) in adjacency.iter().zip(colors).enumerate() {
        let v = i + 1;
        if let Some(u) = adj.iter().find(|&&u| colors[u - 1] == c) {
            return Err(format!("vertices {u} and {v} are adjacent and share color {c}"));
        }
        let n = uses.entry(c).or_default();
        *n += 1;
        if !k.allows(*n) {
            return Err(format!("color {c} used more than {k} times (vertex {v})"));
        }
    }
    Ok(())
}

/// Result of a full n-round graph game.
#[derive(Debug, Clone)]
pub struct GraphGameOutcome {
    pub hs: HsGraph,
    pub moves: Vec<Move>,
    pub algorithm_colors: usize,
    pub presenter_colors: usize,
    pub guarantee: usize,
    pub presenter_bound: usize,
}

/// Plays n rounds of HS_{k,n} against `algorithm` and checks the column guarantee.
pub fn play_hs_graph(k: Cardinality, n: usize, algorithm: &mut dyn GraphAlgorithm) -> Result<GraphGameOutcome> {
    let mut hs = HsGraph::new(k, n)?;
    let mut moves = Vec::with_capacity(n);
    for _ in 0..n {
        let (vertex, adj) = hs.next_vertex()?;
        let request = Move {
            round: vertex,
            interval: None,
            weights: None,
            call: None,
            eps_index: None,
            adjacent_to: Some(adj.clone()),
            phase: None,
            subphase: None,
            algorithm_color: 0,
            presenter_color: None,
        };
        let view = GraphView {
            k,
            colors: hs.algorithm_colors(),
            neighbors: &adj,
        };
        let gamma = algorithm.choose(&view, &request)?;
        let rho = hs.respond(gamma)?;
        moves.push(Move {
            algorithm_color: gamma,
            presenter_color: Some(rho),
            ..request
        });
    }
    let guarantee = guarantee_hs_columns(n, hs.b());
    let algorithm_colors = hs.algorithm_colors_used();
    if algorithm_colors < guarantee {
        return Err(Error::BoundViolated {
            what: "hs-graph".into(),
            colors: algorithm_colors,
            guarantee,
        });
    }
    Ok(GraphGameOutcome {
        presenter_colors: hs.presenter_colors_used(),
        presenter_bound: presenter_bound(n, k),
        algorithm_colors,
        guarantee,
        moves,
        hs,
    })
}
