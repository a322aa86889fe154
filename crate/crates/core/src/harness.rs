//! Matchups between Presenter strategies and Algorithms, experiment tables and the oracle
//! runner. The command-line tool is a thin layer over these functions.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::algorithms::{Algorithm, AlgorithmKind, GraphAlgorithm};
use crate::error::{Error, Result};
use crate::game::{
    AlgorithmHeader, CallRecord, CallTag, Cardinality, GameConstraints, Interval, Move, Referee, StrategySpec, Summary,
    Transcript, TRANSCRIPT_VERSION,
};
use crate::hs_graph::{self, GraphGameOutcome};
use crate::hs_interval::{self, CallDescriptor};
use crate::rational;
use crate::strategy_sm::{self, SmConfig, SmOutcome, DEFAULT_REGION_CAP};
use crate::strategy_unit::{self, UnitOutcome};
use crate::witness::{self, WitnessReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    HsGraph,
    HsCall,
    Sm,
    Unit,
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hs-graph" => Ok(StrategyKind::HsGraph),
            "hs-call" => Ok(StrategyKind::HsCall),
            "sm" => Ok(StrategyKind::Sm),
            "unit" => Ok(StrategyKind::Unit),
            _ => Err(Error::BadParameter(format!("unknown strategy {s:?}"))),
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StrategyKind::HsGraph => "hs-graph",
            StrategyKind::HsCall => "hs-call",
            StrategyKind::Sm => "sm",
            StrategyKind::Unit => "unit",
        })
    }
}

/// One matchup.
#[derive(Debug, Clone)]
pub struct PlayConfig {
    pub strategy: StrategyKind,
    /// Vertices of the graph game.
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub k: Cardinality,
    pub algorithm: AlgorithmKind,
    pub region_cap: usize,
}

impl PlayConfig {
    pub fn new(strategy: StrategyKind, algorithm: AlgorithmKind) -> Self {
        Self {
            strategy,
            n: 0,
            m: 1,
            d: 0,
            k: Cardinality::Unbounded,
            algorithm,
            region_cap: DEFAULT_REGION_CAP,
        }
    }

    pub fn n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn m(mut self, m: usize) -> Self {
        self.m = m;
        self
    }

    pub fn d(mut self, d: usize) -> Self {
        self.d = d;
        self
    }

    pub fn k(mut self, k: Cardinality) -> Self {
        self.k = k;
        self
    }

    pub fn region_cap(mut self, cap: usize) -> Self {
        self.region_cap = cap;
        self
    }

    /// The strategy record stored in transcripts.
    pub fn spec(&self) -> Result<StrategySpec> {
        let unit = Interval::new(rational::zero(), rational::one())?;
        Ok(match self.strategy {
            StrategyKind::HsGraph => StrategySpec::HsGraph { n: self.n },
            StrategyKind::HsCall => StrategySpec::HsCall { region: unit },
            StrategyKind::Sm => StrategySpec::Sm {
                m: self.m,
                region: unit,
                region_cap: self.region_cap,
            },
            StrategyKind::Unit => StrategySpec::Unit { m: self.m },
        })
    }

    pub fn constraints(&self) -> GameConstraints {
        match self.strategy {
            StrategyKind::HsGraph => GameConstraints::new(0, self.k),
            _ => GameConstraints::new(self.d, self.k),
        }
    }
}

/// Strategy-specific record of a game.
#[derive(Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Outcome {
    Graph(GraphGameOutcome),
    Call(CallDescriptor),
    Sm(SmOutcome),
    Unit(UnitOutcome),
}

/// A finished game before the summary is attached.
#[derive(Debug)]
pub struct Played {
    pub moves: Vec<Move>,
    pub calls: Vec<CallRecord>,
    pub algorithm_colors: usize,
    pub guarantee: usize,
    pub paper_bound: usize,
    pub outcome: Outcome,
}

/// Either kind of Algorithm, matching the strategy's game.
pub enum Player<'a> {
    Interval(&'a mut dyn Algorithm),
    Graph(&'a mut dyn GraphAlgorithm),
}

/// First line sent to external Algorithms.
pub fn header_line(constraints: &GameConstraints, spec: &StrategySpec, algorithm: &AlgorithmHeader) -> String {
    serde_json::json!({
        "version": TRANSCRIPT_VERSION,
        "constraints": constraints,
        "strategy": spec,
        "algorithm": algorithm,
    })
    .to_string()
}

fn require_d(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::BadParameter(format!("interval strategies need d >= 2, got {d}")));
    }
    Ok(())
}

/// Runs the strategy described by `spec` against `player`. Strategy assertions fail as errors.
pub fn run_strategy(constraints: GameConstraints, spec: &StrategySpec, player: Player<'_>) -> Result<Played> {
    let d = constraints.d;
    match (spec, player) {
        (StrategySpec::HsGraph { n }, Player::Graph(alg)) => {
            let out = hs_graph::play_hs_graph(constraints.k, *n, alg)?;
            Ok(Played {
                moves: out.moves.clone(),
                calls: Vec::new(),
                algorithm_colors: out.algorithm_colors,
                guarantee: out.guarantee,
                paper_bound: hs_graph::paper_bound_hs(*n),
                outcome: Outcome::Graph(out),
            })
        }
        (StrategySpec::HsCall { region }, Player::Interval(alg)) => {
            require_d(d)?;
            let mut referee = Referee::new(constraints, alg);
            let desc = hs_interval::run_call(&mut referee, 1, region, CallTag::Single)?;
            finish(
                referee,
                hs_interval::per_call_guarantee(d),
                hs_graph::paper_bound_hs(d),
                Outcome::Call(desc),
            )
        }
        (StrategySpec::Sm { m, region, region_cap }, Player::Interval(alg)) => {
            require_d(d)?;
            let cfg = SmConfig {
                region: region.clone(),
                region_cap: *region_cap,
                ..SmConfig::new(*m, d, constraints.k)
            };
            let mut referee = Referee::new(constraints, alg);
            let out = strategy_sm::run_sm(&cfg, &mut referee)?;
            finish(
                referee,
                strategy_sm::guarantee_sm(*m, d),
                strategy_sm::paper_bound_sm(*m, d),
                Outcome::Sm(out),
            )
        }
        (StrategySpec::Unit { m }, Player::Interval(alg)) => {
            require_d(d)?;
            let mut referee = Referee::new(constraints, alg);
            let out = strategy_unit::run_unit(*m, &mut referee)?;
            finish(
                referee,
                strategy_unit::guarantee_unit(*m, d),
                strategy_unit::paper_bound_unit(*m, d),
                Outcome::Unit(out),
            )
        }
        (spec, _) => Err(Error::BadParameter(format!(
            "strategy {} is played against the other kind of algorithm",
            spec.name()
        ))),
    }
}

fn finish(referee: Referee<'_>, guarantee: usize, paper_bound: usize, outcome: Outcome) -> Result<Played> {
    let (state, moves, calls) = referee.into_parts();
    let algorithm_colors = state.distinct_colors();
    if algorithm_colors < guarantee {
        return Err(Error::BoundViolated {
            what: "algorithm colors".into(),
            colors: algorithm_colors,
            guarantee,
        });
    }
    Ok(Played {
        moves,
        calls,
        algorithm_colors,
        guarantee,
        paper_bound,
        outcome,
    })
}

/// Summary fields derived from a game and its witness.
pub fn summarize(played: &Played, w: &WitnessReport) -> Summary {
    Summary {
        algorithm_colors: played.algorithm_colors,
        guarantee: played.guarantee,
        paper_bound: played.paper_bound,
        witness_colors: w.witness_colors,
        witness_valid: true,
        palette_count: w.palette_count,
        paper_colorability_bound: w.paper_colorability_bound,
    }
}

/// Algorithm kinds named for interval games also work for the graph game.
fn graph_kind(kind: &AlgorithmKind) -> AlgorithmKind {
    match kind {
        AlgorithmKind::FirstFit => AlgorithmKind::GraphFirstFit,
        AlgorithmKind::RandomFit(s) => AlgorithmKind::GraphRandomFit(*s),
        other => other.clone(),
    }
}

/// A played, summarized and witnessed game.
#[derive(Debug)]
pub struct PlayResult {
    pub transcript: Transcript,
    pub played: Played,
    pub witness: WitnessReport,
}

impl PlayResult {
    pub fn summary_line(&self) -> String {
        let s = &self.transcript.summary;
        format!(
            "colors={}, guarantee={}, witness={}",
            s.algorithm_colors, s.guarantee, s.witness_colors
        )
    }
}

/// Plays one matchup and certifies it.
pub fn play(cfg: &PlayConfig) -> Result<PlayResult> {
    let constraints = cfg.constraints();
    let spec = cfg.spec()?;
    let graph = cfg.strategy == StrategyKind::HsGraph;
    let kind = if graph {
        graph_kind(&cfg.algorithm)
    } else {
        cfg.algorithm.clone()
    };
    let header = kind.header();
    let line = header_line(&constraints, &spec, &header);
    let played = if graph {
        let mut alg = kind.graph_algorithm(&line)?;
        run_strategy(constraints, &spec, Player::Graph(alg.as_mut()))?
    } else {
        let mut alg = kind.interval_algorithm(&line)?;
        run_strategy(constraints, &spec, Player::Interval(alg.as_mut()))?
    };
    let mut transcript = Transcript {
        version: TRANSCRIPT_VERSION,
        constraints,
        strategy: spec,
        algorithm: header,
        calls: played.calls.clone(),
        moves: played.moves.clone(),
        summary: Summary::default(),
    };
    let witness = witness::witness_coloring(&transcript)?;
    transcript.summary = summarize(&played, &witness);
    Ok(PlayResult {
        transcript,
        played,
        witness,
    })
}

/// Cartesian lists for an experiment table.
#[derive(Debug, Clone)]
pub struct TableSpec {
    pub strategy: StrategyKind,
    /// Instance sizes: d for interval strategies, n for the graph game.
    pub ds: Vec<usize>,
    pub ms: Vec<usize>,
    pub ks: Vec<Cardinality>,
    pub algorithms: Vec<AlgorithmKind>,
    pub region_cap: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub d: usize,
    pub k: String,
    pub m: usize,
    pub algorithm: String,
    pub colors_used: Option<usize>,
    pub guarantee: Option<usize>,
    pub paper_bound: Option<usize>,
    pub witness_colors: Option<usize>,
    pub paper_colorability_bound: Option<usize>,
    /// `colors_used / witness_colors` as an exact fraction.
    pub ratio: Option<String>,
    pub error: Option<String>,
}

/// One row per cell, in input order; failed cells carry the error text.
pub fn table(spec: &TableSpec) -> Vec<TableRow> {
    let mut cells = Vec::new();
    for &d in &spec.ds {
        for &m in &spec.ms {
            for &k in &spec.ks {
                for alg in &spec.algorithms {
                    cells.push((d, m, k, alg.clone()));
                }
            }
        }
    }
    cells
        .into_par_iter()
        .map(|(d, m, k, alg)| {
            let name = match &alg {
                AlgorithmKind::External(c) => format!("external:{c}"),
                other => other.header().name,
            };
            let mut row = TableRow {
                d,
                k: k.to_string(),
                m,
                algorithm: name,
                colors_used: None,
                guarantee: None,
                paper_bound: None,
                witness_colors: None,
                paper_colorability_bound: None,
                ratio: None,
                error: None,
            };
            let cfg = PlayConfig::new(spec.strategy, alg)
                .n(d)
                .m(m)
                .d(d)
                .k(k)
                .region_cap(spec.region_cap);
            match play(&cfg) {
                Ok(res) => {
                    let s = &res.transcript.summary;
                    row.colors_used = Some(s.algorithm_colors);
                    row.guarantee = Some(s.guarantee);
                    row.paper_bound = Some(s.paper_bound);
                    row.witness_colors = Some(s.witness_colors);
                    row.paper_colorability_bound = s.paper_colorability_bound;
                    row.ratio = Some(rational::format(&rational::ratio(
                        s.algorithm_colors as i64,
                        s.witness_colors as i64,
                    )));
                }
                Err(e) => row.error = Some(e.to_string()),
            }
            row
        })
        .collect()
}

pub fn table_csv(rows: &[TableRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| Error::BadParameter(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::BadParameter(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Brute force vs witness vs point cliques on a transcript prefix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub prefix_len: usize,
    pub point_clique_bound: usize,
    pub brute_force: usize,
    pub witness_colors: usize,
    pub sandwich_holds: bool,
}

/// Largest prefix the oracle accepts.
pub const ORACLE_HARD_LIMIT: usize = 16;

/// Examines the first `max_n` rounds of an interval transcript.
pub fn oracle(t: &Transcript, max_n: usize) -> Result<OracleReport> {
    if max_n > ORACLE_HARD_LIMIT {
        return Err(Error::TooLarge {
            size: max_n,
            limit: ORACLE_HARD_LIMIT,
        });
    }
    if matches!(t.strategy, StrategySpec::HsGraph { .. }) {
        return Err(Error::BadParameter("the oracle works on interval transcripts".into()));
    }
    let w = witness::witness_coloring(t)?;
    let len = t.moves.len().min(max_n);
    let intervals = t.moves[..len]
        .iter()
        .map(Move::weighted_interval)
        .collect::<Result<Vec<_>>>()?;
    oracle_on(&intervals, &t.constraints, &w.colors[..len], max_n)
}

/// The three sandwich quantities for one instance and one legal coloring of it.
pub fn oracle_on(
    intervals: &[crate::game::WeightedInterval],
    constraints: &GameConstraints,
    coloring: &[usize],
    limit: usize,
) -> Result<OracleReport> {
    let brute_force = witness::brute_force_chromatic(intervals, constraints, limit)?;
    let point_clique_bound = witness::point_clique_bound(intervals, constraints);
    let witness_colors = coloring.iter().collect::<std::collections::BTreeSet<_>>().len();
    Ok(OracleReport {
        prefix_len: intervals.len(),
        point_clique_bound,
        brute_force,
        witness_colors,
        sandwich_holds: point_clique_bound <= brute_force && brute_force <= witness_colors,
    })
}
