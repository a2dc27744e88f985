//! Lookahead agent that maximizes expected win probability over the
//! short-horizon uncertainty of its framework: which teammate/opponent
//! moves next (tag team), or which move the hand will pick (hand & brain).

use crate::agent::{
    conditional_policy, Agent, AgentError, BrainPick, Evaluate, ExpectorMode, MoveDistribution,
    SamplingMode, WinProb,
};
use crate::board::{piece_type_of, Color, GameStatus, Move, PieceType, Position};
use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec::Vec;
use rand_core::RngCore;

type Model = Box<dyn Agent + Send>;

pub struct Expector {
    mode: ExpectorMode,
    candidates: usize,
    evaluator: Arc<dyn Evaluate>,
    base_strong: Option<Model>,
    opponent_senior: Option<Model>,
    opponent_junior: Option<Model>,
    partner_junior: Option<Model>,
    own_hand: Option<Model>,
}

impl Expector {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        mode: ExpectorMode,
        candidates: usize,
        evaluator: Arc<dyn Evaluate>,
        base_strong: Option<Model>,
        opponent_senior: Option<Model>,
        opponent_junior: Option<Model>,
        partner_junior: Option<Model>,
        own_hand: Option<Model>,
    ) -> Expector {
        Expector {
            mode,
            candidates: candidates.max(1),
            evaluator,
            base_strong,
            opponent_senior,
            opponent_junior,
            partner_junior,
            own_hand,
        }
    }

    /// Exact outcome from `focal`'s side when `pos` is terminal.
    fn terminal_w(pos: &Position, focal: Color) -> Option<f64> {
        match pos.positional_status() {
            GameStatus::Ongoing => None,
            GameStatus::Checkmate => {
                // The side to move is mated.
                Some(if pos.side_to_move() == focal { 0.0 } else { 100.0 })
            }
            _ => Some(50.0),
        }
    }

    fn argmax_of(model: &mut Model, pos: &Position) -> Result<Move, AgentError> {
        model
            .policy(pos)?
            .argmax()
            .ok_or(AgentError::TerminalPosition)
    }

    /// Tag-team move: argmax over top-k candidates of the mean evaluated
    /// win probability across the mode's teammate/opponent schedules.
    pub fn stt_move(&mut self, pos: &Position) -> Result<Move, AgentError> {
        if pos.legal_moves().is_empty() {
            return Err(AgentError::TerminalPosition);
        }
        let focal = pos.side_to_move();
        let candidates = {
            let base = self
                .base_strong
                .as_mut()
                .ok_or(AgentError::MissingModel("base-strong"))?;
            base.policy(pos)?.top_k(self.candidates)
        };

        let mut best: Option<(Move, f64)> = None;
        for (candidate, _) in candidates {
            let after = pos.apply_move_unchecked(candidate);
            let mean = self.schedule_mean(&after, focal)?;
            if best.map_or(true, |(_, score)| mean > score) {
                best = Some((candidate, mean));
            }
        }
        Ok(best.expect("at least one candidate").0)
    }

    /// Mean win probability over the schedule set, rooted at the position
    /// right after the expector's own candidate move (opponent to move).
    fn schedule_mean(&mut self, after: &Position, focal: Color) -> Result<f64, AgentError> {
        let opponent_bits: &[u8] = &[1, 0];
        match self.mode {
            ExpectorMode::Tricking => {
                let mut total = 0.0;
                for &s1 in opponent_bits {
                    let line = self.opponent_step(after, focal, s1)?;
                    total += match line {
                        Line::Done(w) => w,
                        Line::Open(pos) => self.evaluator.winprob(&pos, focal)?.value(),
                    };
                }
                Ok(total / 2.0)
            }
            ExpectorMode::Full | ExpectorMode::Helping => {
                let s1_set: &[u8] = if self.mode == ExpectorMode::Helping {
                    &[1]
                } else {
                    opponent_bits
                };
                let mut total = 0.0;
                let mut count = 0.0;
                for &s1 in s1_set {
                    let line = self.opponent_step(after, focal, s1)?;
                    for &s2 in opponent_bits {
                        let w = match line {
                            Line::Done(w) => w,
                            Line::Open(pos) => match self.own_step(&pos, focal, s2)? {
                                Line::Done(w) => w,
                                Line::Open(leaf) => {
                                    self.evaluator.winprob(&leaf, focal)?.value()
                                }
                            },
                        };
                        total += w;
                        count += 1.0;
                    }
                }
                Ok(total / count)
            }
            ExpectorMode::Hb => Err(AgentError::Unsupported("hb-mode expector move output")),
        }
    }

    fn opponent_step(
        &mut self,
        pos: &Position,
        focal: Color,
        senior_bit: u8,
    ) -> Result<Line, AgentError> {
        if let Some(w) = Self::terminal_w(pos, focal) {
            return Ok(Line::Done(w));
        }
        let model = if senior_bit == 1 {
            self.opponent_senior
                .as_mut()
                .ok_or(AgentError::MissingModel("opponent-senior"))?
        } else {
            self.opponent_junior
                .as_mut()
                .ok_or(AgentError::MissingModel("opponent-junior"))?
        };
        let reply = Self::argmax_of(model, pos)?;
        Ok(Line::Open(pos.apply_move_unchecked(reply)))
    }

    fn own_step(&mut self, pos: &Position, focal: Color, senior_bit: u8) -> Result<Line, AgentError> {
        if let Some(w) = Self::terminal_w(pos, focal) {
            return Ok(Line::Done(w));
        }
        let model = if senior_bit == 1 {
            // The expector cannot recurse into itself; its strong base
            // stands in for its own future move.
            self.base_strong
                .as_mut()
                .ok_or(AgentError::MissingModel("base-strong"))?
        } else {
            self.partner_junior
                .as_mut()
                .ok_or(AgentError::MissingModel("partner-junior"))?
        };
        let reply = Self::argmax_of(model, pos)?;
        Ok(Line::Open(pos.apply_move_unchecked(reply)))
    }

    /// Hand-and-brain piece choice: argmax over piece types of the
    /// truncated expected win probability under the hand's conditional
    /// policy. Ties prefer the piece with the better single outcome, then
    /// piece-type order.
    pub fn hb_piece(&mut self, pos: &Position) -> Result<PieceType, AgentError> {
        let legal = pos.legal_moves();
        if legal.is_empty() {
            return Err(AgentError::TerminalPosition);
        }
        let focal = pos.side_to_move();

        let mut available: Vec<PieceType> = Vec::new();
        for pt in PieceType::ALL {
            if legal.iter().any(|&m| piece_type_of(pos, m) == Some(pt)) {
                available.push(pt);
            }
        }
        if available.len() == 1 {
            return Ok(available[0]);
        }

        let hand_policy = {
            let hand = self
                .own_hand
                .as_mut()
                .ok_or(AgentError::MissingModel("own-hand"))?;
            hand.policy(pos)?
        };

        let mut best: Option<(PieceType, f64, f64)> = None;
        for pt in available {
            let dp = conditional_policy(&hand_policy, pos, pt)?;
            let top = dp.top_k(self.candidates);
            let mass: f64 = top.iter().map(|(_, p)| *p).sum();
            let mut expected = 0.0;
            let mut best_single = f64::NEG_INFINITY;
            for &(m, p) in &top {
                let after = pos.apply_move_unchecked(m);
                let w = match Self::terminal_w(&after, focal) {
                    Some(w) => w,
                    None => self.evaluator.winprob(&after, focal)?.value(),
                };
                expected += (p / mass) * w;
                if w > best_single {
                    best_single = w;
                }
            }
            let better = match best {
                None => true,
                Some((_, e, s)) => expected > e || (expected == e && best_single > s),
            };
            if better {
                best = Some((pt, expected, best_single));
            }
        }
        Ok(best.expect("at least one piece type").0)
    }
}

enum Line {
    /// The line ended early; exact outcome from the focal side.
    Done(f64),
    /// Simulation continues from this position.
    Open(Position),
}

impl Clone for Line {
    fn clone(&self) -> Line {
        match self {
            Line::Done(w) => Line::Done(*w),
            Line::Open(p) => Line::Open(*p),
        }
    }
}

impl Copy for Line {}

/// Single-call form of the tag-team expector.
pub fn expector_stt_move(expector: &mut Expector, pos: &Position) -> Result<Move, AgentError> {
    expector.stt_move(pos)
}

/// Single-call form of the hand-and-brain expector.
pub fn expector_hb_piece(
    expector: &mut Expector,
    pos: &Position,
) -> Result<PieceType, AgentError> {
    expector.hb_piece(pos)
}

impl Agent for Expector {
    fn policy(&mut self, pos: &Position) -> Result<MoveDistribution, AgentError> {
        let legal = pos.legal_moves();
        if legal.is_empty() {
            return Err(AgentError::TerminalPosition);
        }
        let chosen = self.stt_move(pos)?;
        Ok(MoveDistribution::point_mass(&legal, chosen))
    }

    fn value(&mut self, pos: &Position) -> Result<WinProb, AgentError> {
        self.evaluator.winprob(pos, pos.side_to_move())
    }

    fn select_with(
        &mut self,
        pos: &Position,
        _mode: SamplingMode,
        _rng: &mut dyn RngCore,
    ) -> Result<Move, AgentError> {
        self.stt_move(pos)
    }

    fn sampling_override(&self) -> Option<SamplingMode> {
        Some(SamplingMode::Argmax)
    }

    fn brain_pick(&mut self, pos: &Position) -> Result<BrainPick, AgentError> {
        match self.mode {
            ExpectorMode::Hb => Ok(BrainPick::Piece(self.hb_piece(pos)?)),
            _ => Ok(BrainPick::Move(self.stt_move(pos)?)),
        }
    }
}
