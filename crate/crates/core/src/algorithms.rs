//! On-line coloring algorithms the Presenter strategies play against.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::external::ExternalAlgorithm;
use crate::game::{AlgorithmHeader, Cardinality, ColoringState, Move};

/// An on-line interval coloring algorithm. It sees the current coloring and the new move
/// and returns an irrevocable color.
pub trait Algorithm {
    fn choose(&mut self, state: &ColoringState, request: &Move) -> Result<usize>;
}

/// What a graph-game algorithm knows when a vertex arrives.
#[derive(Debug, Clone, Copy)]
pub struct GraphView<'a> {
    pub k: Cardinality,
    /// Algorithm colors of the earlier vertices, by vertex index.
    pub colors: &'a [usize],
    /// Earlier neighbors of the new vertex (1-based).
    pub neighbors: &'a [usize],
}

impl GraphView<'_> {
    /// Colors that keep the coloring proper and k-bounded.
    pub fn allowed(&self, color: usize) -> bool {
        let adjacent = self.neighbors.iter().any(|&u| self.colors[u - 1] == color);
        let uses = self.colors.iter().filter(|&&c| c == color).count();
        !adjacent && self.k.allows(uses + 1)
    }

    pub fn fresh_color(&self) -> usize {
        self.colors.iter().max().map_or(0, |c| c + 1)
    }
}

pub trait GraphAlgorithm {
    fn choose(&mut self, view: &GraphView<'_>, request: &Move) -> Result<usize>;
}

/// Smallest color that keeps the class legal.
#[derive(Debug, Default, Clone, Copy)]
pub struct FirstFit;

pub fn first_fit(state: &ColoringState, request: &Move) -> Result<usize> {
    let cand = request.weighted_interval()?;
    let mut color = 0;
    while !state.can_assign(&cand, color)? {
        color += 1;
    }
    Ok(color)
}

impl Algorithm for FirstFit {
    fn choose(&mut self, state: &ColoringState, request: &Move) -> Result<usize> {
        first_fit(state, request)
    }
}

/// Uniform over the feasible existing colors plus one fresh color.
#[derive(Debug, Clone)]
pub struct RandomFit {
    rng: ChaCha8Rng,
}

impl RandomFit {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

pub fn random_fit(state: &ColoringState, request: &Move, rng: &mut impl Rng) -> Result<usize> {
    let cand = request.weighted_interval()?;
    let mut options = state.feasible_colors(&cand)?;
    options.push(state.fresh_color());
    Ok(options[rng.gen_range(0..options.len())])
}

impl Algorithm for RandomFit {
    fn choose(&mut self, state: &ColoringState, request: &Move) -> Result<usize> {
        random_fit(state, request, &mut self.rng)
    }
}

/// Always opens a new color.
#[derive(Debug, Default, Clone, Copy)]
pub struct FreshColor;

impl Algorithm for FreshColor {
    fn choose(&mut self, state: &ColoringState, _request: &Move) -> Result<usize> {
        Ok(state.fresh_color())
    }
}

impl GraphAlgorithm for FreshColor {
    fn choose(&mut self, view: &GraphView<'_>, _request: &Move) -> Result<usize> {
        Ok(view.fresh_color())
    }
}

/// Smallest color unused by neighbors and used fewer than k times.
#[derive(Debug, Default, Clone, Copy)]
pub struct GraphFirstFit;

pub fn graph_first_fit(view: &GraphView<'_>) -> usize {
    (0..).find(|&c| view.allowed(c)).expect("some color is always free")
}

impl GraphAlgorithm for GraphFirstFit {
    fn choose(&mut self, view: &GraphView<'_>, _request: &Move) -> Result<usize> {
        Ok(graph_first_fit(view))
    }
}

#[derive(Debug, Clone)]
pub struct GraphRandomFit {
    rng: ChaCha8Rng,
}

impl GraphRandomFit {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl GraphAlgorithm for GraphRandomFit {
    fn choose(&mut self, view: &GraphView<'_>, _request: &Move) -> Result<usize> {
        let fresh = view.fresh_color();
        let mut options: Vec<usize> = (0..fresh).filter(|&c| view.allowed(c)).collect();
        options.push(fresh);
        Ok(options[self.rng.gen_range(0..options.len())])
    }
}

/// Answers with colors recorded in a transcript, by round.
#[derive(Debug, Clone)]
pub struct Replay {
    colors: BTreeMap<usize, usize>,
}

impl Replay {
    pub fn new(moves: &[Move]) -> Self {
        Self {
            colors: moves.iter().map(|m| (m.round, m.algorithm_color)).collect(),
        }
    }

    fn color(&self, round: usize) -> Result<usize> {
        self.colors
            .get(&round)
            .copied()
            .ok_or_else(|| Error::MalformedTranscript(format!("strategy asks for round {round} beyond the transcript")))
    }
}

impl Algorithm for Replay {
    fn choose(&mut self, _state: &ColoringState, request: &Move) -> Result<usize> {
        self.color(request.round)
    }
}

impl GraphAlgorithm for Replay {
    fn choose(&mut self, _view: &GraphView<'_>, request: &Move) -> Result<usize> {
        self.color(request.round)
    }
}

/// Selectable algorithms, as named on the command line and in transcript headers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgorithmKind {
    FirstFit,
    RandomFit(u64),
    FreshColor,
    GraphFirstFit,
    GraphRandomFit(u64),
    External(String),
}

impl AlgorithmKind {
    /// Parses `first-fit`, `random`, `fresh`, `graph-first-fit`, `graph-random` or
    /// `external:<command line>`.
    pub fn parse(name: &str, seed: u64) -> Result<Self> {
        Ok(match name {
            "first-fit" => AlgorithmKind::FirstFit,
            "random" | "random-fit" => AlgorithmKind::RandomFit(seed),
            "fresh" | "fresh-color" => AlgorithmKind::FreshColor,
            "graph-first-fit" => AlgorithmKind::GraphFirstFit,
            "graph-random" => AlgorithmKind::GraphRandomFit(seed),
            _ => match name.strip_prefix("external:") {
                Some(cmd) if !cmd.trim().is_empty() => AlgorithmKind::External(cmd.trim().to_string()),
                _ => return Err(Error::BadParameter(format!("unknown algorithm {name:?}"))),
            },
        })
    }

    pub fn header(&self) -> AlgorithmHeader {
        let (name, seed, command) = match self {
            AlgorithmKind::FirstFit => ("first-fit", None, None),
            AlgorithmKind::RandomFit(s) => ("random", Some(*s), None),
            AlgorithmKind::FreshColor => ("fresh", None, None),
            AlgorithmKind::GraphFirstFit => ("graph-first-fit", None, None),
            AlgorithmKind::GraphRandomFit(s) => ("graph-random", Some(*s), None),
            AlgorithmKind::External(c) => ("external", None, Some(c.clone())),
        };
        AlgorithmHeader {
            name: name.to_string(),
            seed,
            command,
        }
    }

    pub fn from_header(h: &AlgorithmHeader) -> Result<Self> {
        match (h.name.as_str(), &h.command) {
            ("external", Some(c)) => Ok(AlgorithmKind::External(c.clone())),
            (name, _) => Self::parse(name, h.seed.unwrap_or(0)),
        }
    }

    pub fn is_graph(&self) -> bool {
        matches!(self, AlgorithmKind::GraphFirstFit | AlgorithmKind::GraphRandomFit(_))
    }

    pub fn interval_algorithm(&self, header_line: &str) -> Result<Box<dyn Algorithm>> {
        Ok(match self {
            AlgorithmKind::FirstFit => Box::new(FirstFit),
            AlgorithmKind::RandomFit(s) => Box::new(RandomFit::new(*s)),
            AlgorithmKind::FreshColor => Box::new(FreshColor),
            AlgorithmKind::External(cmd) => Box::new(ExternalAlgorithm::spawn(cmd, header_line)?),
            _ => {
                return Err(Error::BadParameter(format!(
                    "{} colors graphs, not intervals",
                    self.header().name
                )))
            }
        })
    }

    pub fn graph_algorithm(&self, header_line: &str) -> Result<Box<dyn GraphAlgorithm>> {
        Ok(match self {
            AlgorithmKind::GraphFirstFit => Box::new(GraphFirstFit),
            AlgorithmKind::GraphRandomFit(s) => Box::new(GraphRandomFit::new(*s)),
            AlgorithmKind::FreshColor => Box::new(FreshColor),
            AlgorithmKind::External(cmd) => Box::new(ExternalAlgorithm::spawn(cmd, header_line)?),
            _ => {
                return Err(Error::BadParameter(format!(
                    "{} colors intervals, not graphs",
                    self.header().name
                )))
            }
        })
    }
}
