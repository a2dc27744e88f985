//! Legal move generation with explicit check and pin handling.
//!
//! Strategy: compute checkers and absolutely pinned pieces once, then emit
//! only moves that respect them. En-passant is validated by making the
//! capture and testing the king, since it can expose horizontal discovered
//! checks that the pin mask does not cover.

use super::bitboard::{
    between, bishop_attacks, bit, line, lsb, pawn_attacks, rook_attacks, Bitboard, Squares,
    KING_ATTACKS, KNIGHT_ATTACKS, RANK_1, RANK_8,
};
use super::position::{CASTLE_BK, CASTLE_BQ, CASTLE_WK, CASTLE_WQ};
use super::{Color, Move, MoveList, PieceType, Position, Square};
use alloc::vec::Vec;

const PROMOTIONS: [PieceType; 4] = [
    PieceType::Queen,
    PieceType::Rook,
    PieceType::Bishop,
    PieceType::Knight,
];

pub fn legal_moves(pos: &Position) -> MoveList {
    let mut moves = Vec::with_capacity(48);
    let us = pos.side_to_move();
    let them = us.flip();
    let occ = pos.occupied();
    let own = pos.color_occupancy(us);
    let king = pos.king_square(us);

    let checkers = pos.attackers_to(king, them, occ);
    let pinned = pinned_pieces(pos, us, king);

    // Target squares for non-king moves: anything when not in check,
    // otherwise capture the checker or block its line.
    let target_mask = match checkers.count_ones() {
        0 => !0u64,
        1 => {
            let checker = lsb(checkers);
            checkers | between(king, checker)
        }
        _ => 0,
    };

    if target_mask != 0 {
        gen_pawn_moves(pos, us, pinned, king, target_mask, &mut moves);
        gen_piece_moves(pos, us, pinned, king, target_mask, &mut moves);
        gen_en_passant(pos, us, &mut moves);
    }
    gen_king_moves(pos, us, king, occ, own, &mut moves);
    if checkers == 0 {
        gen_castling(pos, us, occ, &mut moves);
    }
    moves
}

/// Own pieces that may not leave the ray between an enemy slider and the king.
fn pinned_pieces(pos: &Position, us: Color, king: Square) -> Bitboard {
    let them = us.flip();
    let occ = pos.occupied();
    let own = pos.color_occupancy(us);
    let mut pinned = 0u64;

    let rook_like = pos.pieces(them, PieceType::Rook) | pos.pieces(them, PieceType::Queen);
    let bishop_like = pos.pieces(them, PieceType::Bishop) | pos.pieces(them, PieceType::Queen);

    // Scan with enemy occupancy only, so the ray x-rays through own pieces.
    let enemy_occ = pos.color_occupancy(them);
    let candidates = (rook_attacks(king, enemy_occ) & rook_like)
        | (bishop_attacks(king, enemy_occ) & bishop_like);
    for slider in Squares(candidates) {
        let blockers = between(king, slider) & occ;
        if blockers.count_ones() == 1 && blockers & own != 0 {
            pinned |= blockers;
        }
    }
    pinned
}

fn push_pawn_move(from: Square, to: Square, moves: &mut MoveList) {
    if bit(to) & (RANK_1 | RANK_8) != 0 {
        for promo in PROMOTIONS {
            moves.push(Move::promoting(from, to, promo));
        }
    } else {
        moves.push(Move::new(from, to));
    }
}

fn gen_pawn_moves(
    pos: &Position,
    us: Color,
    pinned: Bitboard,
    king: Square,
    target_mask: Bitboard,
    moves: &mut MoveList,
) {
    let them = us.flip();
    let occ = pos.occupied();
    let enemies = pos.color_occupancy(them);
    let (push_dir, start_rank): (i8, u8) = match us {
        Color::White => (8, 1),
        Color::Black => (-8, 6),
    };

    for from in Squares(pos.pieces(us, PieceType::Pawn)) {
        let pin_line = if pinned & bit(from) != 0 {
            line(king, from)
        } else {
            !0u64
        };

        let one = Square((from.0 as i8 + push_dir) as u8);
        if occ & bit(one) == 0 {
            if bit(one) & target_mask & pin_line != 0 {
                push_pawn_move(from, one, moves);
            }
            if from.rank() == start_rank {
                let two = Square((one.0 as i8 + push_dir) as u8);
                if occ & bit(two) == 0 && bit(two) & target_mask & pin_line != 0 {
                    moves.push(Move::new(from, two));
                }
            }
        }

        let captures = pawn_attacks(us, from) & enemies & target_mask & pin_line;
        for to in Squares(captures) {
            push_pawn_move(from, to, moves);
        }
    }
}

fn gen_en_passant(pos: &Position, us: Color, moves: &mut MoveList) {
    let Some(ep) = pos.en_passant_square() else {
        return;
    };
    let takers = pawn_attacks(us.flip(), ep) & pos.pieces(us, PieceType::Pawn);
    for from in Squares(takers) {
        let m = Move::new(from, ep);
        // Rare; full make + king-safety test covers every edge case.
        let next = pos.apply_move_unchecked(m);
        if !next.is_attacked(next.king_square(us), us.flip()) {
            moves.push(m);
        }
    }
}

fn gen_piece_moves(
    pos: &Position,
    us: Color,
    pinned: Bitboard,
    king: Square,
    target_mask: Bitboard,
    moves: &mut MoveList,
) {
    let occ = pos.occupied();
    let own = pos.color_occupancy(us);

    for pt in [
        PieceType::Knight,
        PieceType::Bishop,
        PieceType::Rook,
        PieceType::Queen,
    ] {
        for from in Squares(pos.pieces(us, pt)) {
            let mut targets = match pt {
                PieceType::Knight => KNIGHT_ATTACKS[from.index()],
                PieceType::Bishop => bishop_attacks(from, occ),
                PieceType::Rook => rook_attacks(from, occ),
                _ => rook_attacks(from, occ) | bishop_attacks(from, occ),
            } & !own
                & target_mask;
            if pinned & bit(from) != 0 {
                targets &= line(king, from);
            }
            for to in Squares(targets) {
                moves.push(Move::new(from, to));
            }
        }
    }
}

fn gen_king_moves(
    pos: &Position,
    us: Color,
    king: Square,
    occ: Bitboard,
    own: Bitboard,
    moves: &mut MoveList,
) {
    let them = us.flip();
    // Remove the king so sliders see through it when testing destinations.
    let occ_without_king = occ ^ bit(king);
    let targets = KING_ATTACKS[king.index()] & !own;
    for to in Squares(targets) {
        if pos.attackers_to(to, them, occ_without_king) == 0 {
            moves.push(Move::new(king, to));
        }
    }
}

fn gen_castling(pos: &Position, us: Color, occ: Bitboard, moves: &mut MoveList) {
    let them = us.flip();
    let (rank, short_right, long_right) = match us {
        Color::White => (0u8, CASTLE_WK, CASTLE_WQ),
        Color::Black => (7u8, CASTLE_BK, CASTLE_BQ),
    };
    let king = Square::new(4, rank);

    if pos.castling_rights() & short_right != 0 {
        let f = Square::new(5, rank);
        let g = Square::new(6, rank);
        if occ & (bit(f) | bit(g)) == 0 && !pos.is_attacked(f, them) && !pos.is_attacked(g, them) {
            moves.push(Move::new(king, g));
        }
    }
    if pos.castling_rights() & long_right != 0 {
        let d = Square::new(3, rank);
        let c = Square::new(2, rank);
        let b = Square::new(1, rank);
        if occ & (bit(d) | bit(c) | bit(b)) == 0
            && !pos.is_attacked(d, them)
            && !pos.is_attacked(c, them)
        {
            moves.push(Move::new(king, c));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::perft;
    use super::*;

    #[test]
    fn start_position_has_twenty_moves() {
        assert_eq!(Position::start().legal_moves().len(), 20);
    }

    #[test]
    fn perft_start_shallow() {
        let pos = Position::start();
        assert_eq!(perft(&pos, 1), 20);
        assert_eq!(perft(&pos, 2), 400);
        assert_eq!(perft(&pos, 3), 8902);
    }

    #[test]
    fn fools_mate_is_checkmate() {
        let mut pos = Position::start();
        for uci in ["f2f3", "e7e5", "g2g4", "d8h4"] {
            let m = Move::from_uci(uci).unwrap();
            pos = pos.apply_move(m).unwrap();
        }
        assert!(pos.legal_moves().is_empty());
        assert_eq!(pos.positional_status(), super::super::GameStatus::Checkmate);
    }

    #[test]
    fn en_passant_pin_on_rank() {
        // Taking en passant would clear rank 5 and expose the king to the rook.
        let pos = Position::from_fen("8/8/8/K2pP2r/8/8/8/7k w - d6 0 1").unwrap();
        assert!(!pos
            .legal_moves()
            .contains(&Move::from_uci("e5d6").unwrap()));
    }

    #[test]
    fn mover_never_left_in_check() {
        let pos =
            Position::from_fen("r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1")
                .unwrap();
        for m in pos.legal_moves() {
            let next = pos.apply_move_unchecked(m);
            assert!(
                !next.is_attacked(next.king_square(pos.side_to_move()), next.side_to_move()),
                "{} leaves king en prise",
                m.uci()
            );
        }
    }
}
