//! Hand-tuned material + piece-square evaluation, tapered between middle
//! and endgame by remaining non-pawn material. Scores are centipawns from
//! the side to move's perspective.

use crate::board::bitboard::Squares;
use crate::board::{Color, PieceType, Position};

pub const PIECE_VALUES: [i32; 6] = [100, 320, 330, 500, 900, 0];

#[rustfmt::skip]
const PAWN_PST: [i32; 64] = [
     0,  0,  0,  0,  0,  0,  0,  0,
    50, 50, 50, 50, 50, 50, 50, 50,
    10, 10, 20, 30, 30, 20, 10, 10,
     5,  5, 10, 25, 25, 10,  5,  5,
     0,  0,  0, 20, 20,  0,  0,  0,
     5, -5,-10,  0,  0,-10, -5,  5,
     5, 10, 10,-20,-20, 10, 10,  5,
     0,  0,  0,  0,  0,  0,  0,  0,
];

#[rustfmt::skip]
const KNIGHT_PST: [i32; 64] = [
   -50,-40,-30,-30,-30,-30,-40,-50,
   -40,-20,  0,  0,  0,  0,-20,-40,
   -30,  0, 10, 15, 15, 10,  0,-30,
   -30,  5, 15, 20, 20, 15,  5,-30,
   -30,  0, 15, 20, 20, 15,  0,-30,
   -30,  5, 10, 15, 15, 10,  5,-30,
   -40,-20,  0,  5,  5,  0,-20,-40,
   -50,-40,-30,-30,-30,-30,-40,-50,
];

#[rustfmt::skip]
const BISHOP_PST: [i32; 64] = [
   -20,-10,-10,-10,-10,-10,-10,-20,
   -10,  0,  0,  0,  0,  0,  0,-10,
   -10,  0,  5, 10, 10,  5,  0,-10,
   -10,  5,  5, 10, 10,  5,  5,-10,
   -10,  0, 10, 10, 10, 10,  0,-10,
   -10, 10, 10, 10, 10, 10, 10,-10,
   -10,  5,  0,  0,  0,  0,  5,-10,
   -20,-10,-10,-10,-10,-10,-10,-20,
];

#[rustfmt::skip]
const ROOK_PST: [i32; 64] = [
     0,  0,  0,  0,  0,  0,  0,  0,
     5, 10, 10, 10, 10, 10, 10,  5,
    -5,  0,  0,  0,  0,  0,  0, -5,
    -5,  0,  0,  0,  0,  0,  0, -5,
    -5,  0,  0,  0,  0,  0,  0, -5,
    -5,  0,  0,  0,  0,  0,  0, -5,
    -5,  0,  0,  0,  0,  0,  0, -5,
     0,  0,  0,  5,  5,  0,  0,  0,
];

#[rustfmt::skip]
const QUEEN_PST: [i32; 64] = [
   -20,-10,-10, -5, -5,-10,-10,-20,
   -10,  0,  0,  0,  0,  0,  0,-10,
   -10,  0,  5,  5,  5,  5,  0,-10,
    -5,  0,  5,  5,  5,  5,  0, -5,
     0,  0,  5,  5,  5,  5,  0, -5,
   -10,  5,  5,  5,  5,  5,  0,-10,
   -10,  0,  5,  0,  0,  0,  0,-10,
   -20,-10,-10, -5, -5,-10,-10,-20,
];

#[rustfmt::skip]
const KING_MG_PST: [i32; 64] = [
   -30,-40,-40,-50,-50,-40,-40,-30,
   -30,-40,-40,-50,-50,-40,-40,-30,
   -30,-40,-40,-50,-50,-40,-40,-30,
   -30,-40,-40,-50,-50,-40,-40,-30,
   -20,-30,-30,-40,-40,-30,-30,-20,
   -10,-20,-20,-20,-20,-20,-20,-10,
    20, 20,  0,  0,  0,  0, 20, 20,
    20, 30, 10,  0,  0, 10, 30, 20,
];

#[rustfmt::skip]
const KING_EG_PST: [i32; 64] = [
   -50,-40,-30,-20,-20,-30,-40,-50,
   -30,-20,-10,  0,  0,-10,-20,-30,
   -30,-10, 20, 30, 30, 20,-10,-30,
   -30,-10, 30, 40, 40, 30,-10,-30,
   -30,-10, 30, 40, 40, 30,-10,-30,
   -30,-10, 20, 30, 30, 20,-10,-30,
   -30,-30,  0,  0,  0,  0,-30,-30,
   -50,-30,-30,-30,-30,-30,-50,-50,
];

// Tables above are written with rank 8 on top; white squares flip.
#[inline]
fn pst(table: &[i32; 64], sq: usize, color: Color) -> i32 {
    match color {
        Color::White => table[sq ^ 56],
        Color::Black => table[sq],
    }
}

/// Phase weight of remaining non-pawn material, 24 = full board.
fn game_phase(pos: &Position) -> i32 {
    let mut phase = 0;
    for color in [Color::White, Color::Black] {
        phase += pos.pieces(color, PieceType::Knight).count_ones() as i32;
        phase += pos.pieces(color, PieceType::Bishop).count_ones() as i32;
        phase += 2 * pos.pieces(color, PieceType::Rook).count_ones() as i32;
        phase += 4 * pos.pieces(color, PieceType::Queen).count_ones() as i32;
    }
    phase.min(24)
}

/// Centipawn score from the side to move's perspective.
pub fn static_eval(pos: &Position) -> i32 {
    let mut mg = 0i32;
    let mut eg = 0i32;
    for color in [Color::White, Color::Black] {
        let sign = if color == pos.side_to_move() { 1 } else { -1 };
        for pt in PieceType::ALL {
            let table = match pt {
                PieceType::Pawn => &PAWN_PST,
                PieceType::Knight => &KNIGHT_PST,
                PieceType::Bishop => &BISHOP_PST,
                PieceType::Rook => &ROOK_PST,
                PieceType::Queen => &QUEEN_PST,
                PieceType::King => &KING_MG_PST,
            };
            for sq in Squares(pos.pieces(color, pt)) {
                let material = PIECE_VALUES[pt.index()];
                mg += sign * (material + pst(table, sq.index(), color));
                let eg_table = if pt == PieceType::King {
                    &KING_EG_PST
                } else {
                    table
                };
                eg += sign * (material + pst(eg_table, sq.index(), color));
            }
        }
    }
    let phase = game_phase(pos);
    (mg * phase + eg * (24 - phase)) / 24
}
