//! Agent abstraction: every player exposes a policy distribution over
//! legal moves and a scalar win-probability value. Built-in heuristic
//! engines live here; external UCI engines implement the same trait in
//! the companion crate.

mod builtin;
mod distribution;
mod eval;
mod search;
mod spec;
pub(crate) mod winprob;

pub use builtin::{agreement_rate, BuiltinEngine, BuiltinStrong, BuiltinWeak};
pub use distribution::{conditional_policy, MoveDistribution};
pub use eval::static_eval;
pub use search::{root_scores, RootScores, SearchEngine, MATE_SCORE};
pub use spec::{
    build_with, AgentFactory, AgentKind, AgentSpec, BuiltinFactory, EvaluatorSpec, ExpectorMode,
    ExpectorParams, SpecError, TreeParams, UciParams, DEFAULT_CPUCT, DEFAULT_HB_CANDIDATES,
    DEFAULT_HB_EVAL_NODES, DEFAULT_LAMBDA, DEFAULT_STRONG_NODES, DEFAULT_STRONG_TEMPERATURE,
    DEFAULT_STT_CANDIDATES, DEFAULT_STT_EVAL_NODES, DEFAULT_TREE_NODES, DEFAULT_WEAK_TEMPERATURE,
};
pub use winprob::{cp_to_winprob, terminal_winprob, Evaluate, PlainEvaluator, WinProb};

use crate::board::{Move, PieceType, Position};
use alloc::boxed::Box;
use alloc::string::String;
use rand_core::RngCore;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AgentError {
    #[error("position is terminal")]
    TerminalPosition,
    #[error("no legal move of piece type {0:?}")]
    EmptyPieceRestriction(PieceType),
    #[error("agent requires a model for {0}")]
    MissingModel(&'static str),
    #[error("engine failure: {0}")]
    Engine(String),
    #[error("agent kind {0} not available in this context")]
    Unsupported(&'static str),
}

/// How `select_move` resolves the policy into a single move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingMode {
    /// Highest-probability move, ties broken by UCI string order.
    Argmax,
    /// Draw from the distribution with the supplied RNG.
    Sample,
}

/// A brain's instruction to its hand: either a concrete move whose piece
/// type is binding, or a bare piece type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BrainPick {
    Move(Move),
    Piece(PieceType),
}

pub trait Agent {
    /// Probability over every legal move of a non-terminal position.
    fn policy(&mut self, pos: &Position) -> Result<MoveDistribution, AgentError>;

    /// Win probability in [0, 100] from the side to move's perspective.
    /// Terminal positions short-circuit to 100/0/50.
    fn value(&mut self, pos: &Position) -> Result<WinProb, AgentError>;

    /// Sampling mode this agent insists on, overriding the role default.
    fn sampling_override(&self) -> Option<SamplingMode> {
        None
    }

    /// Resolve the policy into one move under `mode`.
    fn select_with(
        &mut self,
        pos: &Position,
        mode: SamplingMode,
        rng: &mut dyn RngCore,
    ) -> Result<Move, AgentError> {
        let dist = self.policy(pos)?;
        Ok(match mode {
            SamplingMode::Argmax => dist.argmax().ok_or(AgentError::TerminalPosition)?,
            SamplingMode::Sample => dist.sample(rng).ok_or(AgentError::TerminalPosition)?,
        })
    }

    /// Brain-side output for hand-and-brain play. Defaults to the argmax
    /// move; piece-only brains override this.
    fn brain_pick(&mut self, pos: &Position) -> Result<BrainPick, AgentError> {
        let dist = self.policy(pos)?;
        Ok(BrainPick::Move(
            dist.argmax().ok_or(AgentError::TerminalPosition)?,
        ))
    }

    /// Called between games. Stateful engines reset here.
    fn new_game(&mut self) -> Result<(), AgentError> {
        Ok(())
    }
}

impl Agent for Box<dyn Agent + Send> {
    fn policy(&mut self, pos: &Position) -> Result<MoveDistribution, AgentError> {
        (**self).policy(pos)
    }

    fn value(&mut self, pos: &Position) -> Result<WinProb, AgentError> {
        (**self).value(pos)
    }

    fn sampling_override(&self) -> Option<SamplingMode> {
        (**self).sampling_override()
    }

    fn select_with(
        &mut self,
        pos: &Position,
        mode: SamplingMode,
        rng: &mut dyn RngCore,
    ) -> Result<Move, AgentError> {
        (**self).select_with(pos, mode, rng)
    }

    fn brain_pick(&mut self, pos: &Position) -> Result<BrainPick, AgentError> {
        (**self).brain_pick(pos)
    }

    fn new_game(&mut self) -> Result<(), AgentError> {
        (**self).new_game()
    }
}
