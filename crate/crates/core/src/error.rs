use crate::game::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("weight vector has {got} coordinates, game dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid interval [{left}, {right}]: left endpoint must be below right endpoint")]
    InvalidInterval { left: String, right: String },

    #[error("weight coordinate {value} outside [0,1]")]
    WeightOutOfRange { value: String },

    #[error("illegal move in round {round}: color {color} violates {violation}")]
    IllegalMove {
        round: usize,
        color: usize,
        violation: Violation,
    },

    #[error("illegal algorithm move in round {round}: {reason}")]
    IllegalAlgorithmMove { round: usize, reason: String },

    #[error("malformed transcript: {0}")]
    MalformedTranscript(String),

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("every active pattern is already present in the progress matrix")]
    PatternsExhausted,

    #[error("internal invariant broken: {0}")]
    InternalInvariantBroken(String),

    #[error("call {call} already produced {d} intervals")]
    CallExhausted { call: usize, d: usize },

    #[error("calls {a} and {b} share eps index {eps} and have intersecting intervals")]
    SameEpsOverlap { a: usize, b: usize, eps: u32 },

    #[error("needed {needed} distinct colors, only {available} available")]
    TooFewColors { needed: usize, available: usize },

    #[error("region cap {cap} exceeded")]
    RegionCapExceeded { cap: usize },

    #[error("separation window collapsed")]
    RegionDegenerate,

    #[error("proof invariant violated: {0}")]
    InvariantViolated(String),

    #[error("{what}: algorithm used {colors} colors, guarantee is {guarantee}")]
    BoundViolated {
        what: String,
        colors: usize,
        guarantee: usize,
    },

    #[error("external algorithm protocol error: {0}")]
    Protocol(String),

    #[error("external algorithm did not answer within {0:?}")]
    Timeout(std::time::Duration),

    #[error("palette scheme conflict: {0}")]
    SchemeConflict(String),

    #[error("witness coloring invalid in round {round}: {violation}")]
    WitnessInvalid { round: usize, violation: String },

    #[error("instance has {size} intervals, limit is {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Exit status used by the command-line harness.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::IllegalMove { .. } | Error::IllegalAlgorithmMove { .. } | Error::Protocol(_) | Error::Timeout(_) => {
                2
            }
            Error::MalformedTranscript(_)
            | Error::BadParameter(_)
            | Error::DimensionMismatch { .. }
            | Error::InvalidInterval { .. }
            | Error::WeightOutOfRange { .. }
            | Error::TooLarge { .. }
            | Error::Io(_)
            | Error::Json(_) => 3,
            _ => 1,
        }
    }
}
