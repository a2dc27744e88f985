//! Hash-driven stub agents and brute-force re-enumerations of the
//! deliberation rules.

use std::sync::Arc;

use tandem_core::agent::{
    Agent, AgentError, Evaluate, EvaluatorSpec, ExpectorMode, MoveDistribution, WinProb,
};
use tandem_core::board::GameStatus;
use tandem_core::focal::Expector;
use tandem_core::{Color, Move, PieceType, Position};

pub fn mix(a: u64, b: u64) -> u64 {
    let mut z = a ^ b.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn move_key(m: Move) -> u64 {
    (m.from.0 as u64) << 16 | (m.to.0 as u64) << 8 | m.promotion.map(|p| p as u64 + 1).unwrap_or(0)
}

/// Policy weights and values derived from hashes; fully deterministic.
#[derive(Clone)]
pub struct StubModel {
    pub seed: u64,
}

impl StubModel {
    pub fn weight(&self, pos: &Position, m: Move) -> f64 {
        1.0 + (mix(self.seed, pos.hash() ^ move_key(m)) % 97) as f64
    }

    /// Five quantized levels, minimum gap 0.2.
    pub fn raw_value(&self, pos: &Position) -> f64 {
        ((mix(self.seed ^ 0x7A1u64, pos.hash()) % 5) as f64 + 0.5) / 5.0
    }
}

impl Agent for StubModel {
    fn policy(&mut self, pos: &Position) -> Result<MoveDistribution, AgentError> {
        let legal = pos.legal_moves();
        if legal.is_empty() {
            return Err(AgentError::TerminalPosition);
        }
        Ok(MoveDistribution::from_weights(
            legal.iter().map(|&m| (m, self.weight(pos, m))).collect(),
        ))
    }

    fn value(&mut self, pos: &Position) -> Result<WinProb, AgentError> {
        Ok(WinProb::new(self.raw_value(pos) * 100.0))
    }
}

/// Board evaluation keyed by position hash, white perspective.
pub struct StubEval {
    pub seed: u64,
    spec: EvaluatorSpec,
}

impl StubEval {
    pub fn new(seed: u64) -> StubEval {
        StubEval {
            seed,
            spec: EvaluatorSpec::builtin(1),
        }
    }

    pub fn white_wp(&self, pos: &Position) -> f64 {
        (mix(self.seed ^ 0xE7A1, pos.hash()) % 101) as f64
    }
}

impl Evaluate for StubEval {
    fn winprob(&self, pos: &Position, perspective: Color) -> Result<WinProb, AgentError> {
        let white = self.white_wp(pos);
        Ok(match perspective {
            Color::White => WinProb::new(white),
            Color::Black => WinProb::new(white).flip(),
        })
    }

    fn spec(&self) -> &EvaluatorSpec {
        &self.spec
    }
}

/// Seeded random walk to a non-terminal position.
pub fn random_position(seed: u64, plies: usize) -> Position {
    let mut pos = Position::start();
    let mut state = seed | 1;
    for _ in 0..plies {
        let moves = pos.legal_moves();
        if moves.is_empty() {
            return Position::start();
        }
        state = mix(state, 0x5eed);
        let next = pos.apply_move_unchecked(moves[(state % moves.len() as u64) as usize]);
        if next.positional_status().is_terminal() {
            break;
        }
        pos = next;
    }
    pos
}

// ---- independent re-enumerations ----

pub fn oracle_argmax(model: &StubModel, pos: &Position) -> Move {
    let legal = pos.legal_moves();
    let mut entries: Vec<(Move, f64)> = legal
        .iter()
        .map(|&m| (m, model.weight(pos, m)))
        .collect();
    let total: f64 = entries.iter().map(|(_, w)| w).sum();
    for e in &mut entries {
        e.1 /= total;
    }
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    let mut best = entries[0];
    for &(m, p) in &entries[1..] {
        if p > best.1 {
            best = (m, p);
        }
    }
    best.0
}

pub fn oracle_top_k(model: &StubModel, pos: &Position, k: usize) -> Vec<Move> {
    let legal = pos.legal_moves();
    let total: f64 = legal.iter().map(|&m| model.weight(pos, m)).sum();
    let mut entries: Vec<(Move, f64)> = legal
        .iter()
        .map(|&m| (m, model.weight(pos, m) / total))
        .collect();
    entries.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    entries.truncate(k);
    entries.into_iter().map(|(m, _)| m).collect()
}

pub fn terminal_w(pos: &Position, focal: Color) -> Option<f64> {
    match pos.positional_status() {
        GameStatus::Ongoing => None,
        GameStatus::Checkmate => Some(if pos.side_to_move() == focal { 0.0 } else { 100.0 }),
        _ => Some(50.0),
    }
}

pub struct StubWorld {
    pub base: StubModel,
    pub opp_senior: StubModel,
    pub opp_junior: StubModel,
    pub partner_junior: StubModel,
    pub eval: StubEval,
}

impl StubWorld {
    pub fn new(seed: u64) -> StubWorld {
        StubWorld {
            base: StubModel { seed: mix(seed, 1) },
            opp_senior: StubModel { seed: mix(seed, 2) },
            opp_junior: StubModel { seed: mix(seed, 3) },
            partner_junior: StubModel { seed: mix(seed, 4) },
            eval: StubEval::new(mix(seed, 5)),
        }
    }

    pub fn expector(&self, mode: ExpectorMode, k: usize) -> Expector {
        Expector::new(
            mode,
            k,
            Arc::new(StubEval::new(self.eval.seed)),
            Some(Box::new(self.base.clone())),
            Some(Box::new(self.opp_senior.clone())),
            Some(Box::new(self.opp_junior.clone())),
            Some(Box::new(self.partner_junior.clone())),
            None,
        )
    }

    pub fn eval_w(&self, pos: &Position, focal: Color) -> f64 {
        let white = self.eval.white_wp(pos);
        match focal {
            Color::White => white,
            Color::Black => 100.0 - white,
        }
    }

    /// Exhaustive schedule enumeration, mirroring the published decision
    /// rule rather than the agent's implementation.
    pub fn oracle_move(&self, pos: &Position, mode: ExpectorMode, k: usize) -> Move {
        let focal = pos.side_to_move();
        let candidates = oracle_top_k(&self.base, pos, k);
        let mut best: Option<(Move, f64)> = None;
        for m in candidates {
            let after = pos.apply_move_unchecked(m);
            let score = match mode {
                ExpectorMode::Tricking => {
                    let mut total = 0.0;
                    for s1 in [1u8, 0] {
                        total += match self.opponent_line(&after, focal, s1) {
                            Some(p) => self.eval_w(&p, focal),
                            None => terminal_w(&after, focal).unwrap(),
                        };
                    }
                    total / 2.0
                }
                ExpectorMode::Full | ExpectorMode::Helping => {
                    let s1_set: &[u8] = if mode == ExpectorMode::Helping { &[1] } else { &[1, 0] };
                    let mut total = 0.0;
                    let mut count = 0.0;
                    for &s1 in s1_set {
                        let line = self.opponent_line(&after, focal, s1);
                        for s2 in [1u8, 0] {
                            let w = match line {
                                None => terminal_w(&after, focal).unwrap(),
                                Some(p1) => match terminal_w(&p1, focal) {
                                    Some(w) => w,
                                    None => {
                                        let own = if s2 == 1 {
                                            oracle_argmax(&self.base, &p1)
                                        } else {
                                            oracle_argmax(&self.partner_junior, &p1)
                                        };
                                        let p2 = p1.apply_move_unchecked(own);
                                        match terminal_w(&p2, focal) {
                                            Some(w) => w,
                                            None => self.eval_w(&p2, focal),
                                        }
                                    }
                                },
                            };
                            total += w;
                            count += 1.0;
                        }
                    }
                    total / count
                }
                ExpectorMode::Hb => unreachable!(),
            };
            if best.map_or(true, |(_, s)| score > s) {
                best = Some((m, score));
            }
        }
        best.unwrap().0
    }

    pub fn opponent_line(&self, after: &Position, _focal: Color, s1: u8) -> Option<Position> {
        if after.positional_status().is_terminal() {
            return None;
        }
        let model = if s1 == 1 { &self.opp_senior } else { &self.opp_junior };
        Some(after.apply_move_unchecked(oracle_argmax(model, after)))
    }
}

pub fn oracle_hb_piece(hand: &StubModel, eval: &StubEval, pos: &Position, j: usize) -> PieceType {
    let legal = pos.legal_moves();
    let focal = pos.side_to_move();
    let piece_of = |m: Move| tandem_core::board::piece_type_of(pos, m).unwrap();

    let available: Vec<PieceType> = PieceType::ALL
        .into_iter()
        .filter(|&pt| legal.iter().any(|&m| piece_of(m) == pt))
        .collect();
    if available.len() == 1 {
        return available[0];
    }

    let total: f64 = legal.iter().map(|&m| hand.weight(pos, m)).sum();
    let mut best: Option<(PieceType, f64, f64)> = None;
    for pt in available {
        let mut entries: Vec<(Move, f64)> = legal
            .iter()
            .filter(|&&m| piece_of(m) == pt)
            .map(|&m| (m, hand.weight(pos, m) / total))
            .collect();
        let mass: f64 = entries.iter().map(|(_, p)| p).sum();
        for e in &mut entries {
            e.1 /= mass;
        }
        entries.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        entries.truncate(j);
        let top_mass: f64 = entries.iter().map(|(_, p)| p).sum();
        let mut expected = 0.0;
        let mut best_single = f64::NEG_INFINITY;
        for (m, p) in entries {
            let after = pos.apply_move_unchecked(m);
            let w = match terminal_w(&after, focal) {
                Some(w) => w,
                None => match focal {
                    Color::White => eval.white_wp(&after),
                    Color::Black => 100.0 - eval.white_wp(&after),
                },
            };
            expected += (p / top_mass) * w;
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
    best.unwrap().0
}

/// Value of `pos` from the side to move, searching to the depth cap with
/// both players maximizing their own stub value.
pub fn oracle_negamax(model: &StubModel, pos: &Position, depth: u16) -> f64 {
    match pos.positional_status() {
        GameStatus::Ongoing => {}
        GameStatus::Checkmate => return 0.0,
        _ => return 0.5,
    }
    if depth == 0 {
        return model.raw_value(pos);
    }
    let mut best = f64::NEG_INFINITY;
    for m in pos.legal_moves() {
        let child = pos.apply_move_unchecked(m);
        let v = 1.0 - oracle_negamax(model, &child, depth - 1);
        if v > best {
            best = v;
        }
    }
    best
}

pub fn oracle_best_move(model: &StubModel, pos: &Position, depth: u16) -> (Move, f64, f64) {
    let mut moves = pos.legal_moves();
    moves.sort();
    let scored: Vec<(Move, f64)> = moves
        .into_iter()
        .map(|m| {
            let child = pos.apply_move_unchecked(m);
            (m, 1.0 - oracle_negamax(model, &child, depth - 1))
        })
        .collect();
    let mut best = scored[0];
    for &(m, v) in &scored[1..] {
        if v > best.1 {
            best = (m, v);
        }
    }
    let second = scored
        .iter()
        .filter(|(m, _)| *m != best.0)
        .map(|(_, v)| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    (best.0, best.1, second)
}

