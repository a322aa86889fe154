//! Presenter strategies, a referee and witness colorings for on-line interval coloring
//! games with d-dimensional bandwidth and k-cardinality constraints.

pub mod algorithms;
pub mod error;
pub mod external;
pub mod game;
pub mod harness;
pub mod hs_graph;
pub mod hs_interval;
pub mod rational;
pub mod strategy_sm;
pub mod strategy_unit;
pub mod verify;
pub mod witness;

pub use error::{Error, Result};
