use super::bitboard::{
    bishop_attacks, bit, pawn_attacks, rook_attacks, Bitboard, Squares, KING_ATTACKS,
    KNIGHT_ATTACKS,
};
use super::{zobrist, Color, GameStatus, Move, MoveList, PieceType, Square};
use thiserror::Error;

pub const START_FEN: &str = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1";

/// Games are adjudicated drawn once they reach this many plies.
pub const DEFAULT_MAX_PLIES: usize = 512;

pub const CASTLE_WK: u8 = 1;
pub const CASTLE_WQ: u8 = 2;
pub const CASTLE_BK: u8 = 4;
pub const CASTLE_BQ: u8 = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("illegal move {0}")]
    Illegal(alloc::string::String),
}

/// Immutable chess state. Cheap to copy; `apply_move` returns a new value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub(crate) by_type: [Bitboard; 6],
    pub(crate) by_color: [Bitboard; 2],
    pub(crate) side: Color,
    pub(crate) castling: u8,
    pub(crate) en_passant: Option<Square>,
    pub(crate) halfmove_clock: u16,
    pub(crate) fullmove_number: u16,
    pub(crate) hash: u64,
}

impl Position {
    pub fn start() -> Position {
        Position::from_fen(START_FEN).expect("start FEN is valid")
    }

    pub fn side_to_move(&self) -> Color {
        self.side
    }

    pub fn castling_rights(&self) -> u8 {
        self.castling
    }

    pub fn en_passant_square(&self) -> Option<Square> {
        self.en_passant
    }

    pub fn halfmove_clock(&self) -> u16 {
        self.halfmove_clock
    }

    pub fn fullmove_number(&self) -> u16 {
        self.fullmove_number
    }

    /// Zobrist hash over placement, side, castling and en-passant file.
    pub fn hash(&self) -> u64 {
        self.hash
    }

    pub fn occupied(&self) -> Bitboard {
        self.by_color[0] | self.by_color[1]
    }

    pub fn pieces(&self, color: Color, pt: PieceType) -> Bitboard {
        self.by_color[color.index()] & self.by_type[pt.index()]
    }

    pub fn color_occupancy(&self, color: Color) -> Bitboard {
        self.by_color[color.index()]
    }

    pub fn king_square(&self, color: Color) -> Square {
        super::bitboard::lsb(self.pieces(color, PieceType::King))
    }

    pub fn piece_on(&self, sq: Square) -> Option<(PieceType, Color)> {
        let mask = bit(sq);
        if self.occupied() & mask == 0 {
            return None;
        }
        let color = if self.by_color[0] & mask != 0 {
            Color::White
        } else {
            Color::Black
        };
        for pt in PieceType::ALL {
            if self.by_type[pt.index()] & mask != 0 {
                return Some((pt, color));
            }
        }
        unreachable!("occupancy and type boards out of sync")
    }

    pub(crate) fn compute_hash(&self) -> u64 {
        let mut h = 0u64;
        for color in [Color::White, Color::Black] {
            for pt in PieceType::ALL {
                for sq in Squares(self.pieces(color, pt)) {
                    h ^= zobrist::piece(color.index(), pt.index(), sq.index());
                }
            }
        }
        h ^= zobrist::castling(self.castling);
        if let Some(ep) = self.en_passant {
            h ^= zobrist::en_passant_file(ep.file());
        }
        if self.side == Color::Black {
            h ^= zobrist::side_to_move();
        }
        h
    }

    /// All attackers of `sq` belonging to `by`, given `occupied` blockers.
    pub fn attackers_to(&self, sq: Square, by: Color, occupied: Bitboard) -> Bitboard {
        let mut att = 0u64;
        att |= KNIGHT_ATTACKS[sq.index()] & self.pieces(by, PieceType::Knight);
        att |= KING_ATTACKS[sq.index()] & self.pieces(by, PieceType::King);
        // A pawn of `by` attacks sq iff sq is attacked "backwards".
        att |= pawn_attacks(by.flip(), sq) & self.pieces(by, PieceType::Pawn);
        let rooks = self.pieces(by, PieceType::Rook) | self.pieces(by, PieceType::Queen);
        att |= rook_attacks(sq, occupied) & rooks;
        let bishops = self.pieces(by, PieceType::Bishop) | self.pieces(by, PieceType::Queen);
        att |= bishop_attacks(sq, occupied) & bishops;
        att
    }

    pub fn is_attacked(&self, sq: Square, by: Color) -> bool {
        self.attackers_to(sq, by, self.occupied()) != 0
    }

    pub fn in_check(&self) -> bool {
        self.is_attacked(self.king_square(self.side), self.side.flip())
    }

    fn clear_square(&mut self, sq: Square) {
        if let Some((pt, color)) = self.piece_on(sq) {
            let mask = bit(sq);
            self.by_type[pt.index()] ^= mask;
            self.by_color[color.index()] ^= mask;
            self.hash ^= zobrist::piece(color.index(), pt.index(), sq.index());
        }
    }

    fn put_piece(&mut self, sq: Square, pt: PieceType, color: Color) {
        let mask = bit(sq);
        self.by_type[pt.index()] |= mask;
        self.by_color[color.index()] |= mask;
        self.hash ^= zobrist::piece(color.index(), pt.index(), sq.index());
    }

    /// Apply `m` after checking it against the legal move list.
    pub fn apply_move(&self, m: Move) -> Result<Position, MoveError> {
        if !self.legal_moves().contains(&m) {
            return Err(MoveError::Illegal(m.uci()));
        }
        Ok(self.apply_move_unchecked(m))
    }

    /// Apply a move that is known to be legal.
    pub fn apply_move_unchecked(&self, m: Move) -> Position {
        let mut next = *self;
        let us = self.side;
        let them = us.flip();
        let (moving, _) = self.piece_on(m.from).expect("move from empty square");
        let captured = self.piece_on(m.to).map(|(pt, _)| pt);
        let is_pawn = moving == PieceType::Pawn;

        // Half-move clock resets on captures and pawn moves.
        let is_ep_capture = is_pawn && Some(m.to) == self.en_passant;
        if is_pawn || captured.is_some() || is_ep_capture {
            next.halfmove_clock = 0;
        } else {
            next.halfmove_clock += 1;
        }

        next.clear_square(m.from);
        if captured.is_some() {
            next.clear_square(m.to);
        }
        if is_ep_capture {
            let victim = Square::new(m.to.file(), m.from.rank());
            next.clear_square(victim);
        }

        match m.promotion {
            Some(promo) => next.put_piece(m.to, promo, us),
            None => next.put_piece(m.to, moving, us),
        }

        // Castling: move the rook alongside the two-square king move.
        if moving == PieceType::King && m.from.file() == 4 && m.to.file().abs_diff(4) == 2 {
            let rank = m.from.rank();
            let (rook_from, rook_to) = if m.to.file() == 6 {
                (Square::new(7, rank), Square::new(5, rank))
            } else {
                (Square::new(0, rank), Square::new(3, rank))
            };
            next.clear_square(rook_from);
            next.put_piece(rook_to, PieceType::Rook, us);
        }

        // Castling rights decay when king or rooks move or rooks are taken.
        next.hash ^= zobrist::castling(next.castling);
        next.castling &= !castling_touched(m.from) & !castling_touched(m.to);
        next.hash ^= zobrist::castling(next.castling);

        if let Some(ep) = next.en_passant {
            next.hash ^= zobrist::en_passant_file(ep.file());
        }
        next.en_passant = None;
        if is_pawn && m.from.rank().abs_diff(m.to.rank()) == 2 {
            let ep = Square::new(m.from.file(), (m.from.rank() + m.to.rank()) / 2);
            next.en_passant = Some(ep);
            next.hash ^= zobrist::en_passant_file(ep.file());
        }

        next.side = them;
        next.hash ^= zobrist::side_to_move();
        if us == Color::Black {
            next.fullmove_number += 1;
        }
        next
    }

    /// Status ignoring history (no threefold, no ply cap): checkmate,
    /// stalemate, fifty-move rule and insufficient material.
    pub fn positional_status(&self) -> GameStatus {
        if self.legal_moves().is_empty() {
            return if self.in_check() {
                GameStatus::Checkmate
            } else {
                GameStatus::Stalemate
            };
        }
        if self.halfmove_clock >= 100 {
            return GameStatus::DrawFiftyMove;
        }
        if self.insufficient_material() {
            return GameStatus::DrawInsufficient;
        }
        GameStatus::Ongoing
    }

    /// K vs K, K+B vs K, or K+N vs K.
    pub fn insufficient_material(&self) -> bool {
        let occ = self.occupied();
        match occ.count_ones() {
            2 => true,
            3 => {
                let minors = self.by_type[PieceType::Bishop.index()]
                    | self.by_type[PieceType::Knight.index()];
                minors.count_ones() == 1
            }
            _ => false,
        }
    }

}

fn castling_touched(sq: Square) -> u8 {
    match sq.0 {
        0 => CASTLE_WQ,
        4 => CASTLE_WK | CASTLE_WQ,
        7 => CASTLE_WK,
        56 => CASTLE_BQ,
        60 => CASTLE_BK | CASTLE_BQ,
        63 => CASTLE_BK,
        _ => 0,
    }
}

/// Game-termination rules parameterized by the ply cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameRules {
    pub max_plies: usize,
}

impl Default for GameRules {
    fn default() -> Self {
        GameRules {
            max_plies: DEFAULT_MAX_PLIES,
        }
    }
}

impl GameRules {
    /// Full status of `pos` reached after `prior_hashes` (hashes of every
    /// earlier position in the game, oldest first).
    pub fn status(&self, pos: &Position, prior_hashes: &[u64]) -> GameStatus {
        let positional = pos.positional_status();
        if positional.is_terminal() {
            return positional;
        }
        if prior_hashes.len() >= self.max_plies {
            return GameStatus::DrawMaxPly;
        }
        let repeats = prior_hashes.iter().filter(|&&h| h == pos.hash).count();
        if repeats >= 2 {
            return GameStatus::DrawThreefold;
        }
        GameStatus::Ongoing
    }
}

impl Position {
    pub fn legal_moves(&self) -> MoveList {
        super::movegen::legal_moves(self)
    }
}
