//! The replayable JSON record of one game.

use serde::{Deserialize, Serialize};

use super::types::{GameConstraints, Interval, WeightVector, WeightedInterval};
use crate::error::{Error, Result};

pub const TRANSCRIPT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Initial,
    Sep,
    Final,
}

/// Which part of the S_m construction a call belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SmRole {
    Base,
    K1,
    K2,
    K3,
    K4,
    K5,
}

/// Structural tag of a call, used by the witness palette scheme.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CallTag {
    /// A lone HS call.
    Single,
    /// `path` lists region slots from the outermost instance down.
    Sm { path: Vec<usize>, role: SmRole },
    /// `index` is the 1-based position within the phase.
    Unit {
        phase: Phase,
        index: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        marked: Option<bool>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallRecord {
    pub call: usize,
    #[serde(flatten)]
    pub tag: CallTag,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", content = "params", rename_all = "kebab-case")]
pub enum StrategySpec {
    HsGraph {
        n: usize,
    },
    HsCall {
        region: Interval,
    },
    Sm {
        m: usize,
        region: Interval,
        region_cap: usize,
    },
    Unit {
        m: usize,
    },
}

impl StrategySpec {
    pub fn name(&self) -> &'static str {
        match self {
            StrategySpec::HsGraph { .. } => "hs-graph",
            StrategySpec::HsCall { .. } => "hs-call",
            StrategySpec::Sm { .. } => "sm",
            StrategySpec::Unit { .. } => "unit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgorithmHeader {
    pub name: String,
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub round: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<Interval>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub call: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_index: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjacent_to: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<Phase>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subphase: Option<usize>,
    pub algorithm_color: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presenter_color: Option<usize>,
}

impl Move {
    /// The interval-game view of this move. Fails for graph-game moves.
    pub fn weighted_interval(&self) -> Result<WeightedInterval> {
        let interval = self
            .interval
            .clone()
            .ok_or_else(|| Error::MalformedTranscript(format!("round {} has no interval", self.round)))?;
        Ok(WeightedInterval {
            id: self.round,
            interval,
            weights: self.weights.clone(),
            call_id: self.call,
            eps_index: self.eps_index,
        })
    }

    /// The request object sent to external algorithms: the move without colors.
    pub fn request(&self) -> Move {
        Move {
            presenter_color: None,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub algorithm_colors: usize,
    pub guarantee: usize,
    pub paper_bound: usize,
    pub witness_colors: usize,
    pub witness_valid: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub palette_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paper_colorability_bound: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub version: u32,
    pub constraints: GameConstraints,
    pub strategy: StrategySpec,
    pub algorithm: AlgorithmHeader,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub calls: Vec<CallRecord>,
    pub moves: Vec<Move>,
    pub summary: Summary,
}

impl Transcript {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("transcript serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let t: Transcript = serde_json::from_str(s).map_err(|e| Error::MalformedTranscript(e.to_string()))?;
        t.check_shape()?;
        Ok(t)
    }

    pub fn tag_of(&self, call: usize) -> Option<&CallTag> {
        self.calls.iter().find(|r| r.call == call).map(|r| &r.tag)
    }

    fn check_shape(&self) -> Result<()> {
        if self.version != TRANSCRIPT_VERSION {
            return Err(Error::MalformedTranscript(format!(
                "unsupported version {}",
                self.version
            )));
        }
        let graph = matches!(self.strategy, StrategySpec::HsGraph { .. });
        for (i, m) in self.moves.iter().enumerate() {
            if m.round != i + 1 {
                return Err(Error::MalformedTranscript(format!(
                    "move {} has round {}, rounds must be consecutive from 1",
                    i + 1,
                    m.round
                )));
            }
            if graph {
                if m.adjacent_to.is_none() || m.interval.is_some() {
                    return Err(Error::MalformedTranscript(format!(
                        "graph move {} needs adjacent_to and no interval",
                        m.round
                    )));
                }
            } else {
                if m.interval.is_none() {
                    return Err(Error::MalformedTranscript(format!("move {} has no interval", m.round)));
                }
                let dim = m.weights.as_ref().map_or(0, WeightVector::dim);
                if dim != self.constraints.d || (self.constraints.d == 0 && m.weights.is_some()) {
                    return Err(Error::MalformedTranscript(format!(
                        "move {} has {dim} weights, game dimension is {}",
                        m.round, self.constraints.d
                    )));
                }
            }
        }
        Ok(())
    }
}
