use super::state::ColoringState;
use super::transcript::{CallRecord, CallTag, Move, Phase};
use super::types::{GameConstraints, Interval, WeightVector};
use crate::algorithms::Algorithm;
use crate::error::{Error, Result};

/// What a Presenter strategy wants to show next.
#[derive(Debug, Clone)]
pub struct MoveRequest {
    pub interval: Interval,
    pub weights: Option<WeightVector>,
    pub call: Option<usize>,
    pub eps_index: Option<u32>,
    pub phase: Option<Phase>,
    pub subphase: Option<usize>,
}

impl MoveRequest {
    pub fn plain(interval: Interval) -> Self {
        Self {
            interval,
            weights: None,
            call: None,
            eps_index: None,
            phase: None,
            subphase: None,
        }
    }
}

/// Drives one interval game: forwards each move to the Algorithm and enforces legality
/// on its answer.
pub struct Referee<'a> {
    state: ColoringState,
    algorithm: &'a mut dyn Algorithm,
    moves: Vec<Move>,
    calls: Vec<CallRecord>,
}

impl<'a> Referee<'a> {
    pub fn new(constraints: GameConstraints, algorithm: &'a mut dyn Algorithm) -> Self {
        Self {
            state: ColoringState::new(constraints),
            algorithm,
            moves: Vec::new(),
            calls: Vec::new(),
        }
    }

    pub fn constraints(&self) -> &GameConstraints {
        self.state.constraints()
    }

    pub fn state(&self) -> &ColoringState {
        &self.state
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    /// Rounds played so far.
    pub fn round(&self) -> usize {
        self.moves.len()
    }

    pub fn open_call(&mut self, tag: CallTag) -> usize {
        let call = self.calls.len();
        self.calls.push(CallRecord { call, tag });
        call
    }

    pub fn retag_call(&mut self, call: usize, tag: CallTag) {
        self.calls[call].tag = tag;
    }

    /// Presents one interval and returns the Algorithm's (legal) color.
    pub fn present(&mut self, req: MoveRequest) -> Result<usize> {
        let round = self.moves.len() + 1;
        let mv = Move {
            round,
            interval: Some(req.interval),
            weights: req.weights,
            call: req.call,
            eps_index: req.eps_index,
            adjacent_to: None,
            phase: req.phase,
            subphase: req.subphase,
            algorithm_color: 0,
            presenter_color: None,
        };
        let cand = mv.weighted_interval()?;
        cand.check_dimension(self.state.constraints())?;
        let color = self.algorithm.choose(&self.state, &mv)?;
        self.state.assign(cand, color)?;
        self.moves.push(Move {
            algorithm_color: color,
            ..mv
        });
        Ok(color)
    }

    pub fn set_presenter_color(&mut self, round: usize, color: usize) -> Result<()> {
        let mv = self
            .moves
            .get_mut(round.wrapping_sub(1))
            .ok_or_else(|| Error::InternalInvariantBroken(format!("no round {round}")))?;
        mv.presenter_color = Some(color);
        Ok(())
    }

    /// Algorithm colors of rounds `from..=round()`, in order (1-based `from`).
    pub fn colors_from(&self, from: usize) -> Vec<usize> {
        self.moves[from.saturating_sub(1)..]
            .iter()
            .map(|m| m.algorithm_color)
            .collect()
    }

    pub fn into_parts(self) -> (ColoringState, Vec<Move>, Vec<CallRecord>) {
        (self.state, self.moves, self.calls)
    }
}
