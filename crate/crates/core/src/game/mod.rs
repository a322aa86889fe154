//! Exact interval geometry, legality for every game variant, the referee and the
//! transcript record.

mod referee;
mod state;
mod transcript;
mod types;

pub use referee::{MoveRequest, Referee};
pub use state::{full_sweep, ColoringState, Violation, ViolationKind};
pub use transcript::{
    AlgorithmHeader, CallRecord, CallTag, Move, Phase, SmRole, StrategySpec, Summary, Transcript, TRANSCRIPT_VERSION,
};
pub use types::{intersects, Cardinality, GameConstraints, Interval, WeightVector, WeightedInterval};
