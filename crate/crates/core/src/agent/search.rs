//! Fixed-node alpha-beta search that scores every root move exactly.
//!
//! The whole agent stack derives from `root_scores`: best move, policy
//! softmax, top-k candidates and centipawn values all read from the same
//! score vector, so argmax ties and budget semantics are identical
//! everywhere. Deterministic for a given position and node budget.

use super::eval::{static_eval, PIECE_VALUES};
use crate::board::{Move, PieceType, Position};
use alloc::vec;
use alloc::vec::Vec;

pub const MATE_SCORE: i32 = 30_000;
const INF: i32 = 31_000;
const MAX_DEPTH: u8 = 40;
const MAX_PLY: usize = 96;
const TT_BITS: usize = 15;

#[derive(Clone, Copy, Default)]
struct TtEntry {
    key: u64,
    generation: u16,
    depth: u8,
    bound: u8, // 0 unused, 1 exact, 2 lower, 3 upper
    score: i32,
    best: Option<Move>,
}

const BOUND_EXACT: u8 = 1;
const BOUND_LOWER: u8 = 2;
const BOUND_UPPER: u8 = 3;

/// Exact centipawn score per legal root move (side to move's view) at the
/// deepest fully completed iteration within the node budget.
#[derive(Debug, Clone)]
pub struct RootScores {
    /// Moves in UCI order with their scores.
    pub scores: Vec<(Move, i32)>,
    pub depth: u8,
    pub nodes: u64,
}

impl RootScores {
    /// Best score; ties keep the UCI-lexicographically smallest move.
    pub fn best(&self) -> (Move, i32) {
        let mut best = self.scores[0];
        for &(m, s) in &self.scores[1..] {
            if s > best.1 {
                best = (m, s);
            }
        }
        best
    }

    /// Top-k moves by score, ties by UCI order.
    pub fn top_k(&self, k: usize) -> Vec<(Move, i32)> {
        let mut sorted = self.scores.clone();
        sorted.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        sorted.truncate(k);
        sorted
    }
}

/// Reusable search state. One engine per owner; cleared logically between
/// calls via a generation counter, so every call is independent.
pub struct SearchEngine {
    tt: Vec<TtEntry>,
    tt_mask: usize,
    generation: u16,
    killers: [[Option<Move>; 2]; MAX_PLY],
    path: [u64; MAX_PLY],
    nodes: u64,
    node_limit: u64,
    aborted: bool,
}

impl Default for SearchEngine {
    fn default() -> Self {
        SearchEngine::new()
    }
}

impl SearchEngine {
    pub fn new() -> SearchEngine {
        SearchEngine::with_tt_bits(TT_BITS)
    }

    /// Engine whose table is sized for a given node budget; keeps
    /// throwaway evaluators from allocating megabytes per call.
    pub fn sized_for(node_budget: u64) -> SearchEngine {
        let want = (node_budget.max(1).saturating_mul(4)).min(1 << TT_BITS);
        let bits = (64 - want.leading_zeros() as usize).clamp(10, TT_BITS);
        SearchEngine::with_tt_bits(bits)
    }

    pub fn with_tt_bits(bits: usize) -> SearchEngine {
        SearchEngine {
            tt: vec![TtEntry::default(); 1 << bits],
            tt_mask: (1 << bits) - 1,
            generation: 0,
            killers: [[None; 2]; MAX_PLY],
            path: [0; MAX_PLY],
            nodes: 0,
            node_limit: u64::MAX,
            aborted: false,
        }
    }

    /// Score every legal move of `pos`. The depth-1 pass always completes;
    /// deeper iterations run until the node budget is spent.
    pub fn root_scores(&mut self, pos: &Position, node_budget: u64) -> Option<RootScores> {
        let mut moves = pos.legal_moves();
        if moves.is_empty() {
            return None;
        }
        moves.sort();

        self.generation = self.generation.wrapping_add(1);
        self.killers = [[None; 2]; MAX_PLY];
        self.nodes = 0;
        self.node_limit = node_budget.max(1);
        self.aborted = false;
        self.path[0] = pos.hash();

        let mut scores: Vec<i32> = vec![0; moves.len()];
        let mut completed_depth = 0;

        for depth in 1..=MAX_DEPTH {
            let mut iteration: Vec<i32> = Vec::with_capacity(moves.len());
            // The first iteration must finish so every move has a score.
            let enforce_budget = depth > 1;
            for &m in &moves {
                let child = pos.apply_move_unchecked(m);
                let s = -self.alphabeta(&child, depth - 1, -INF, INF, 1, enforce_budget);
                if self.aborted {
                    break;
                }
                iteration.push(s);
            }
            if self.aborted || iteration.len() != moves.len() {
                break;
            }
            scores = iteration;
            completed_depth = depth;
            if self.nodes >= self.node_limit {
                break;
            }
        }

        Some(RootScores {
            scores: moves.into_iter().zip(scores).collect(),
            depth: completed_depth,
            nodes: self.nodes,
        })
    }

    fn alphabeta(
        &mut self,
        pos: &Position,
        depth: u8,
        mut alpha: i32,
        beta: i32,
        ply: usize,
        enforce_budget: bool,
    ) -> i32 {
        self.nodes += 1;
        if enforce_budget && self.nodes >= self.node_limit {
            self.aborted = true;
            return 0;
        }
        if ply >= MAX_PLY - 1 {
            return static_eval(pos);
        }

        // Draws by rule and by repetition along the current search path.
        if pos.halfmove_clock() >= 100 || pos.insufficient_material() {
            return 0;
        }
        self.path[ply] = pos.hash();
        for i in (0..ply).rev() {
            if self.path[i] == pos.hash() {
                return 0;
            }
        }

        if depth == 0 {
            self.nodes -= 1; // qsearch re-counts this node
            return self.qsearch(pos, alpha, beta, ply, enforce_budget, 0);
        }

        let tt_index = (pos.hash() as usize) & self.tt_mask;
        let entry = self.tt[tt_index];
        let mut tt_move = None;
        if entry.key == pos.hash() && entry.generation == self.generation && entry.bound != 0 {
            tt_move = entry.best;
            if entry.depth >= depth {
                let score = from_tt_score(entry.score, ply);
                match entry.bound {
                    BOUND_EXACT => return score,
                    BOUND_LOWER if score >= beta => return score,
                    BOUND_UPPER if score <= alpha => return score,
                    _ => {}
                }
            }
        }

        let mut moves = pos.legal_moves();
        if moves.is_empty() {
            return if pos.in_check() {
                -MATE_SCORE + ply as i32
            } else {
                0
            };
        }
        self.order_moves(pos, &mut moves, tt_move, ply);

        let original_alpha = alpha;
        let mut best_score = -INF;
        let mut best_move = None;
        for m in moves {
            let child = pos.apply_move_unchecked(m);
            let score = -self.alphabeta(&child, depth - 1, -beta, -alpha, ply + 1, enforce_budget);
            if self.aborted {
                return 0;
            }
            if score > best_score {
                best_score = score;
                best_move = Some(m);
            }
            if score > alpha {
                alpha = score;
            }
            if alpha >= beta {
                if pos.piece_on(m.to).is_none() {
                    let slot = &mut self.killers[ply];
                    if slot[0] != Some(m) {
                        slot[1] = slot[0];
                        slot[0] = Some(m);
                    }
                }
                break;
            }
        }

        let bound = if best_score <= original_alpha {
            BOUND_UPPER
        } else if best_score >= beta {
            BOUND_LOWER
        } else {
            BOUND_EXACT
        };
        self.tt[tt_index] = TtEntry {
            key: pos.hash(),
            generation: self.generation,
            depth,
            bound,
            score: to_tt_score(best_score, ply),
            best: best_move,
        };
        best_score
    }

    fn qsearch(
        &mut self,
        pos: &Position,
        mut alpha: i32,
        beta: i32,
        ply: usize,
        enforce_budget: bool,
        qdepth: u8,
    ) -> i32 {
        self.nodes += 1;
        if enforce_budget && self.nodes >= self.node_limit {
            self.aborted = true;
            return 0;
        }
        if pos.halfmove_clock() >= 100 || pos.insufficient_material() {
            return 0;
        }

        let in_check = pos.in_check();
        if !in_check {
            let stand_pat = static_eval(pos);
            if stand_pat >= beta {
                return stand_pat;
            }
            if stand_pat > alpha {
                alpha = stand_pat;
            }
            if qdepth >= 16 || ply >= MAX_PLY - 1 {
                return stand_pat;
            }
        } else if ply >= MAX_PLY - 1 {
            return static_eval(pos);
        }

        let mut moves = pos.legal_moves();
        if moves.is_empty() {
            return if in_check { -MATE_SCORE + ply as i32 } else { 0 };
        }
        if !in_check {
            // Captures and queen promotions only.
            moves.retain(|m| {
                pos.piece_on(m.to).is_some()
                    || m.promotion == Some(PieceType::Queen)
                    || (piece_is_pawn(pos, *m) && Some(m.to) == pos.en_passant_square())
            });
            if moves.is_empty() {
                return alpha;
            }
        }
        self.order_moves(pos, &mut moves, None, ply);

        let mut best = if in_check { -INF } else { alpha };
        for m in moves {
            let child = pos.apply_move_unchecked(m);
            let score = -self.qsearch(&child, -beta, -alpha, ply + 1, enforce_budget, qdepth + 1);
            if self.aborted {
                return 0;
            }
            if score > best {
                best = score;
            }
            if score > alpha {
                alpha = score;
            }
            if alpha >= beta {
                break;
            }
        }
        best
    }

    fn order_moves(&self, pos: &Position, moves: &mut [Move], tt_move: Option<Move>, ply: usize) {
        let killers = self.killers[ply.min(MAX_PLY - 1)];
        moves.sort_by_key(|&m| {
            if Some(m) == tt_move {
                return -1_000_000;
            }
            if let Some((victim, _)) = pos.piece_on(m.to) {
                let attacker = pos
                    .piece_on(m.from)
                    .map(|(pt, _)| PIECE_VALUES[pt.index()])
                    .unwrap_or(0);
                return -(PIECE_VALUES[victim.index()] * 16 - attacker) - 500_000;
            }
            if m.promotion == Some(PieceType::Queen) {
                return -400_000;
            }
            if killers[0] == Some(m) {
                return -300_000;
            }
            if killers[1] == Some(m) {
                return -299_999;
            }
            0
        });
    }
}

fn piece_is_pawn(pos: &Position, m: Move) -> bool {
    matches!(pos.piece_on(m.from), Some((PieceType::Pawn, _)))
}

// Mate scores are stored relative to the node so they stay valid when
// found at a different ply.
fn to_tt_score(score: i32, ply: usize) -> i32 {
    if score >= MATE_SCORE - MAX_PLY as i32 {
        score + ply as i32
    } else if score <= -MATE_SCORE + MAX_PLY as i32 {
        score - ply as i32
    } else {
        score
    }
}

fn from_tt_score(score: i32, ply: usize) -> i32 {
    if score >= MATE_SCORE - MAX_PLY as i32 {
        score - ply as i32
    } else if score <= -MATE_SCORE + MAX_PLY as i32 {
        score + ply as i32
    } else {
        score
    }
}

/// One-shot convenience wrapper around a fresh engine.
pub fn root_scores(pos: &Position, node_budget: u64) -> Option<RootScores> {
    SearchEngine::new().root_scores(pos, node_budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_mate_in_one() {
        let pos = Position::from_fen("6k1/5ppp/8/8/8/8/8/4R1K1 w - - 0 1").unwrap();
        let rs = root_scores(&pos, 4000).unwrap();
        let (best, score) = rs.best();
        assert_eq!(best.uci(), "e1e8");
        assert!(score >= MATE_SCORE - 10, "score {score}");
    }

    #[test]
    fn avoids_hanging_the_queen() {
        // Qxd5?? loses the queen to exd5.
        let pos = Position::from_fen("rnbqkbnr/ppp1pppp/8/3p4/8/3Q4/PPPP1PPP/RNB1KBNR w KQkq - 0 1");
        let pos = pos.unwrap();
        let rs = SearchEngine::new().root_scores(&pos, 20_000).unwrap();
        let qxd5 = Move::from_uci("d3d5").unwrap();
        let (best, _) = rs.best();
        assert_ne!(best, qxd5);
        let qxd5_score = rs.scores.iter().find(|(m, _)| *m == qxd5).unwrap().1;
        assert!(qxd5_score < -600, "Qxd5 should score badly: {qxd5_score}");
    }

    #[test]
    fn deterministic_for_fixed_budget() {
        let pos = Position::from_fen(
            "r1bqkbnr/pppp1ppp/2n5/4p3/2B1P3/5N2/PPPP1PPP/RNBQK2R b KQkq - 3 3",
        )
        .unwrap();
        let a = SearchEngine::new().root_scores(&pos, 5000).unwrap();
        let b = SearchEngine::new().root_scores(&pos, 5000).unwrap();
        assert_eq!(a.scores, b.scores);
        assert_eq!(a.nodes, b.nodes);

        // Engine reuse across calls must not change results.
        let mut engine = SearchEngine::new();
        let _ = engine.root_scores(&Position::start(), 5000);
        let c = engine.root_scores(&pos, 5000).unwrap();
        assert_eq!(a.scores, c.scores);
    }

    #[test]
    fn depth_one_always_completes() {
        let rs = root_scores(&Position::start(), 1).unwrap();
        assert_eq!(rs.scores.len(), 20);
        assert!(rs.depth >= 1);
    }
}
