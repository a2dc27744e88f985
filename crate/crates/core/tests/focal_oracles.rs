//! Brute-force oracle equivalence for the deliberation agents.
//!
//! Stub worlds: deterministic hash-driven policies, values, and board
//! evaluations over real chess positions. The oracles re-enumerate the
//! agents' decision rules with independent code and must agree exactly.

use std::collections::BTreeMap;

use tandem_core::agent::{Agent, AgentError, ExpectorMode, MoveDistribution, TreeParams, WinProb};
use tandem_core::fixtures::TableEvaluator;
use tandem_core::focal::{Expector, TreeAgent};
use tandem_core::{Color, Move, PieceType, Position};
use tandem_testkit::{
    mix, oracle_argmax, oracle_best_move, oracle_hb_piece, oracle_top_k, random_position,
    StubEval, StubModel, StubWorld,
};

#[test]
fn expector_matches_enumeration_on_stub_worlds() {
    let mut checked = 0;
    for seed in 0..50u64 {
        let world = StubWorld::new(seed);
        let pos = random_position(mix(seed, 0xB0A2D), 8 + (seed % 16) as usize);
        if pos.legal_moves().len() < 3 {
            continue;
        }
        for mode in [ExpectorMode::Full, ExpectorMode::Tricking, ExpectorMode::Helping] {
            let expected = world.oracle_move(&pos, mode, 5);
            let got = world.expector(mode, 5).stt_move(&pos).unwrap();
            assert_eq!(got, expected, "seed {seed} mode {mode:?} at {}", pos.to_fen());
        }
        checked += 1;
    }
    assert!(checked >= 45, "only {checked} stub worlds exercised");
}

#[test]
fn expector_prefers_immediate_mate() {
    // White mates in one; the mate line dominates every schedule.
    let pos = Position::from_fen("6k1/5ppp/8/8/8/8/8/4R1K1 w - - 0 1").unwrap();
    let world = StubWorld::new(1234);
    let mut agent = world.expector(ExpectorMode::Full, pos.legal_moves().len());
    let chosen = agent.stt_move(&pos).unwrap();
    assert_eq!(chosen.uci(), "e1e8");
}

#[test]
fn expector_full_mode_hand_example() {
    // Two candidates, hand-assigned leaf table: candidate A averages 50
    // over the four schedules, candidate B averages 48, so A wins even
    // though B never dips below 48.
    let pos = Position::start();
    let world = StubWorld::new(777);
    let k = 2;
    let candidates = oracle_top_k(&world.base, &pos, k);
    let (m_a, m_b) = (candidates[0], candidates[1]);

    let mut table: BTreeMap<u64, f64> = BTreeMap::new();
    let mut fill = |candidate: Move, ws: [f64; 4]| {
        let after = pos.apply_move_unchecked(candidate);
        let mut i = 0;
        for s1 in [1u8, 0] {
            let p1 = world.opponent_line(&after, Color::White, s1).unwrap();
            for s2 in [1u8, 0] {
                let own = if s2 == 1 {
                    oracle_argmax(&world.base, &p1)
                } else {
                    oracle_argmax(&world.partner_junior, &p1)
                };
                let p2 = p1.apply_move_unchecked(own);
                table.insert(p2.hash(), ws[i]);
                i += 1;
            }
        }
    };
    fill(m_a, [60.0, 40.0, 60.0, 40.0]);
    fill(m_b, [48.0, 48.0, 48.0, 48.0]);

    let mut agent = Expector::new(
        ExpectorMode::Full,
        k,
        std::sync::Arc::new(TableEvaluator::new(table)),
        Some(Box::new(world.base.clone())),
        Some(Box::new(world.opp_senior.clone())),
        Some(Box::new(world.opp_junior.clone())),
        Some(Box::new(world.partner_junior.clone())),
        None,
    );
    assert_eq!(agent.stt_move(&pos).unwrap(), m_a);
}

#[test]
fn expector_tricking_mode_hand_example() {
    let pos = Position::start();
    let world = StubWorld::new(778);
    let candidates = oracle_top_k(&world.base, &pos, 2);
    let (m_a, m_b) = (candidates[0], candidates[1]);

    let mut table: BTreeMap<u64, f64> = BTreeMap::new();
    let mut fill = |candidate: Move, ws: [f64; 2]| {
        let after = pos.apply_move_unchecked(candidate);
        for (i, s1) in [1u8, 0].into_iter().enumerate() {
            let p1 = world.opponent_line(&after, Color::White, s1).unwrap();
            table.insert(p1.hash(), ws[i]);
        }
    };
    fill(m_a, [60.0, 40.0]);
    fill(m_b, [48.0, 48.0]);

    let mut agent = Expector::new(
        ExpectorMode::Tricking,
        2,
        std::sync::Arc::new(TableEvaluator::new(table)),
        Some(Box::new(world.base.clone())),
        Some(Box::new(world.opp_senior.clone())),
        Some(Box::new(world.opp_junior.clone())),
        Some(Box::new(world.partner_junior.clone())),
        None,
    );
    assert_eq!(agent.stt_move(&pos).unwrap(), m_a);
}

#[test]
fn hb_piece_matches_enumeration_on_stub_worlds() {
    let mut checked = 0;
    for seed in 100..150u64 {
        let hand = StubModel { seed: mix(seed, 9) };
        let eval = StubEval::new(mix(seed, 10));
        let pos = random_position(mix(seed, 0xCAFE), 6 + (seed % 20) as usize);
        if pos.legal_moves().len() < 3 {
            continue;
        }
        let expected = oracle_hb_piece(&hand, &eval, &pos, 3);
        let mut agent = Expector::new(
            ExpectorMode::Hb,
            3,
            std::sync::Arc::new(StubEval::new(eval.seed)),
            None,
            None,
            None,
            None,
            Some(Box::new(hand.clone())),
        );
        let got = agent.hb_piece(&pos).unwrap();
        assert_eq!(got, expected, "seed {seed} at {}", pos.to_fen());
        checked += 1;
    }
    assert!(checked >= 45);
}

#[test]
fn hb_piece_hand_example_expectations() {
    // Knight line: 0.6 -> 55, 0.4 -> 45 (E = 51); pawn line: 1.0 -> 52.
    // The pawn's lower-variance line wins on expectation.
    let pos = Position::from_fen("7k/8/8/8/3p4/8/P7/N6K w - - 0 1").unwrap();
    // Legal white moves: a2a3, a2a4 (pawn), Nb3, Nc2 (knight), plus king
    // moves; restrict the fixture to knight/pawn by weighting the hand.
    let legal = pos.legal_moves();
    assert!(legal.len() >= 4);

    struct HandTable {
        weights: BTreeMap<Move, f64>,
    }
    impl Agent for HandTable {
        fn policy(&mut self, pos: &Position) -> Result<MoveDistribution, AgentError> {
            Ok(MoveDistribution::from_weights(
                pos.legal_moves()
                    .iter()
                    .map(|m| (*m, self.weights.get(m).copied().unwrap_or(1e-9)))
                    .collect(),
            ))
        }
        fn value(&mut self, _pos: &Position) -> Result<WinProb, AgentError> {
            Ok(WinProb::new(50.0))
        }
    }

    let n_b3 = Move::from_uci("a1b3").unwrap();
    let n_c2 = Move::from_uci("a1c2").unwrap();
    let p_a3 = Move::from_uci("a2a3").unwrap();
    let mut weights = BTreeMap::new();
    weights.insert(n_b3, 0.6);
    weights.insert(n_c2, 0.4);
    weights.insert(p_a3, 1.0);

    let mut table = BTreeMap::new();
    table.insert(pos.apply_move_unchecked(n_b3).hash(), 55.0);
    table.insert(pos.apply_move_unchecked(n_c2).hash(), 45.0);
    table.insert(pos.apply_move_unchecked(p_a3).hash(), 52.0);
    // King moves get a poor table value so they never compete.
    for m in &legal {
        table.entry(pos.apply_move_unchecked(*m).hash()).or_insert(1.0);
    }

    let mut agent = Expector::new(
        ExpectorMode::Hb,
        2,
        std::sync::Arc::new(TableEvaluator::new(table)),
        None,
        None,
        None,
        None,
        Some(Box::new(HandTable { weights })),
    );
    assert_eq!(agent.hb_piece(&pos).unwrap(), PieceType::Pawn);
}

#[test]
fn hb_single_piece_type_short_circuits() {
    // Lone king: no evaluator entries needed at all.
    let pos = Position::from_fen("7k/8/8/8/8/8/8/K7 w - - 0 1").unwrap();
    let mut agent = Expector::new(
        ExpectorMode::Hb,
        3,
        std::sync::Arc::new(TableEvaluator::new(BTreeMap::new())),
        None,
        None,
        None,
        None,
        Some(Box::new(StubModel { seed: 3 })),
    );
    assert_eq!(agent.hb_piece(&pos).unwrap(), PieceType::King);
}

/// Sparse endgames keep two-ply subtrees small enough that the stub
/// values do not wash out into ties.
const SPARSE_FENS: [&str; 6] = [
    "8/5p2/5k2/8/8/5K2/5P2/8 w - - 0 1",
    "8/8/8/3k4/8/3K4/3P4/8 w - - 0 1",
    "8/p7/k7/8/8/K7/P7/8 w - - 0 1",
    "8/8/1k4p1/8/8/1K4P1/8/8 w - - 0 1",
    "8/2p5/2k5/8/8/5K2/5P2/8 b - - 0 1",
    "8/8/8/2k1p3/8/2K1P3/8/8 b - - 0 1",
];

fn check_tree_world(model: &StubModel, pos: &Position, depth: u16) -> Option<bool> {
    let branching = pos.legal_moves().len();
    if !(3..=40).contains(&branching) {
        return None;
    }
    let (expected, best_v, second_v) = oracle_best_move(model, pos, depth);
    if best_v - second_v < 0.15 {
        return None;
    }
    let params = TreeParams {
        model: Box::new(tandem_core::agent::AgentSpec::weak(100.0)),
        nodes: 6000,
        c_puct: 1.25,
        seed: None,
        max_depth: Some(depth),
    };
    let mut agent = TreeAgent::new(params, Box::new(model.clone()));
    let got = agent.search(pos).unwrap().root_move;
    assert_eq!(
        got,
        expected,
        "depth {depth} at {} (margin {:.3})",
        pos.to_fen(),
        best_v - second_v
    );
    Some(true)
}

#[test]
fn tree_search_matches_exhaustive_lookup_on_stub_trees() {
    // One-ply worlds: random stub tables over the sparse pool.
    let mut checked = 0;
    let mut seed = 0u64;
    while checked < 25 {
        seed += 1;
        assert!(seed < 900, "not enough gapped one-ply stub trees");
        let model = StubModel { seed: mix(seed, 0x7EE) };
        let fen = SPARSE_FENS[(seed % SPARSE_FENS.len() as u64) as usize];
        let pos = Position::from_fen(fen).unwrap();
        if check_tree_world(&model, &pos, 1).is_some() {
            checked += 1;
        }
    }

    // Two-ply worlds over sparse endgames.
    let mut checked = 0;
    let mut seed = 1000u64;
    while checked < 25 {
        seed += 1;
        assert!(seed < 1900, "not enough gapped two-ply stub trees");
        let model = StubModel { seed: mix(seed, 0x2EE) };
        let fen = SPARSE_FENS[(seed % SPARSE_FENS.len() as u64) as usize];
        let pos = Position::from_fen(fen).unwrap();
        if check_tree_world(&model, &pos, 2).is_some() {
            checked += 1;
        }
    }
}

#[test]
#[ignore]
fn probe_gap_distribution() {
    let mut pass = 0;
    let mut small_branch = 0;
    let mut no_gap = 0;
    for seed in 1..400u64 {
        let model = StubModel { seed: mix(seed, 0x7EE) };
        let pos = random_position(mix(seed, 0x7AB1E), 6 + (seed % 14) as usize);
        let branching = pos.legal_moves().len();
        if branching < 4 || branching > 30 {
            small_branch += 1;
            continue;
        }
        let depth = 1 + (seed % 2) as u16;
        let (_, best_v, second_v) = oracle_best_move(&model, &pos, depth);
        if best_v - second_v < 0.12 {
            no_gap += 1;
            continue;
        }
        pass += 1;
    }
    println!("pass={pass} small_branch={small_branch} no_gap={no_gap}");
}
