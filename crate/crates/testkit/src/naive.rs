//! Independent mailbox move generator for perft cross-checks.
//!
//! Reads positions through the public accessors only; never touches the
//! kernel's move generation or make-move paths.

use tandem_core::{Color, Move, PieceType, Position, Square};

/// Minimal mailbox board, written without reference to the kernel's
/// bitboard internals. Slow on purpose.
#[derive(Clone)]
pub struct NaiveBoard {
    squares: [Option<(PieceType, Color)>; 64],
    side: Color,
    castling: u8, // 1 = WK, 2 = WQ, 4 = BK, 8 = BQ
    ep: Option<u8>,
}

impl NaiveBoard {
    pub fn from_position(pos: &Position) -> NaiveBoard {
        let mut squares = [None; 64];
        for i in 0..64 {
            squares[i] = pos.piece_on(Square(i as u8));
        }
        NaiveBoard {
            squares,
            side: pos.side_to_move(),
            castling: pos.castling_rights(),
            ep: pos.en_passant_square().map(|s| s.0),
        }
    }

    fn king_of(&self, color: Color) -> u8 {
        for i in 0..64u8 {
            if self.squares[i as usize] == Some((PieceType::King, color)) {
                return i;
            }
        }
        panic!("no king");
    }

    fn attacked_by(&self, target: u8, by: Color) -> bool {
        for from in 0..64u8 {
            let Some((pt, color)) = self.squares[from as usize] else {
                continue;
            };
            if color != by {
                continue;
            }
            if self.piece_attacks(from, target, pt, color) {
                return true;
            }
        }
        false
    }

    fn piece_attacks(&self, from: u8, to: u8, pt: PieceType, color: Color) -> bool {
        let (ff, fr) = ((from % 8) as i8, (from / 8) as i8);
        let (tf, tr) = ((to % 8) as i8, (to / 8) as i8);
        let (df, dr) = (tf - ff, tr - fr);
        match pt {
            PieceType::Pawn => {
                let fwd = if color == Color::White { 1 } else { -1 };
                dr == fwd && df.abs() == 1
            }
            PieceType::Knight => (df.abs() == 1 && dr.abs() == 2) || (df.abs() == 2 && dr.abs() == 1),
            PieceType::King => df.abs() <= 1 && dr.abs() <= 1 && (df, dr) != (0, 0),
            PieceType::Bishop => df.abs() == dr.abs() && df != 0 && self.clear_ray(ff, fr, tf, tr),
            PieceType::Rook => {
                (df == 0) != (dr == 0) && self.clear_ray(ff, fr, tf, tr)
            }
            PieceType::Queen => {
                ((df == 0) != (dr == 0) || (df.abs() == dr.abs() && df != 0))
                    && self.clear_ray(ff, fr, tf, tr)
            }
        }
    }

    fn clear_ray(&self, ff: i8, fr: i8, tf: i8, tr: i8) -> bool {
        let sf = (tf - ff).signum();
        let sr = (tr - fr).signum();
        let (mut f, mut r) = (ff + sf, fr + sr);
        while (f, r) != (tf, tr) {
            if self.squares[(r * 8 + f) as usize].is_some() {
                return false;
            }
            f += sf;
            r += sr;
        }
        true
    }

    fn pseudo_moves(&self) -> Vec<Move> {
        let mut moves = Vec::new();
        let us = self.side;
        for from in 0..64u8 {
            let Some((pt, color)) = self.squares[from as usize] else {
                continue;
            };
            if color != us {
                continue;
            }
            match pt {
                PieceType::Pawn => self.pawn_moves(from, &mut moves),
                _ => {
                    for to in 0..64u8 {
                        if let Some((_, c)) = self.squares[to as usize] {
                            if c == us {
                                continue;
                            }
                        }
                        if self.piece_attacks(from, to, pt, us) {
                            moves.push(Move::new(Square(from), Square(to)));
                        }
                    }
                }
            }
        }
        self.castle_moves(&mut moves);
        moves
    }

    fn pawn_moves(&self, from: u8, moves: &mut Vec<Move>) {
        let us = self.side;
        let (fwd, start, last): (i8, i8, i8) = if us == Color::White {
            (1, 1, 7)
        } else {
            (-1, 6, 0)
        };
        let (f, r) = ((from % 8) as i8, (from / 8) as i8);
        let push = |tf: i8, tr: i8, moves: &mut Vec<Move>| {
            let to = Square::new(tf as u8, tr as u8);
            if tr == last {
                for p in [
                    PieceType::Queen,
                    PieceType::Rook,
                    PieceType::Bishop,
                    PieceType::Knight,
                ] {
                    moves.push(Move::promoting(Square(from), to, p));
                }
            } else {
                moves.push(Move::new(Square(from), to));
            }
        };
        if self.squares[((r + fwd) * 8 + f) as usize].is_none() {
            push(f, r + fwd, moves);
            if r == start && self.squares[((r + 2 * fwd) * 8 + f) as usize].is_none() {
                moves.push(Move::new(
                    Square(from),
                    Square::new(f as u8, (r + 2 * fwd) as u8),
                ));
            }
        }
        for df in [-1i8, 1] {
            let (tf, tr) = (f + df, r + fwd);
            if !(0..8).contains(&tf) || !(0..8).contains(&tr) {
                continue;
            }
            let to = (tr * 8 + tf) as u8;
            let occupied_by_enemy =
                matches!(self.squares[to as usize], Some((_, c)) if c != us);
            if occupied_by_enemy || Some(to) == self.ep {
                push(tf, tr, moves);
            }
        }
    }

    fn castle_moves(&self, moves: &mut Vec<Move>) {
        let us = self.side;
        let them = match us {
            Color::White => Color::Black,
            Color::Black => Color::White,
        };
        let (rank, short, long) = match us {
            Color::White => (0u8, 1u8, 2u8),
            Color::Black => (7u8, 4u8, 8u8),
        };
        let base = rank * 8;
        if self.castling & short != 0
            && self.squares[(base + 5) as usize].is_none()
            && self.squares[(base + 6) as usize].is_none()
            && !self.attacked_by(base + 4, them)
            && !self.attacked_by(base + 5, them)
            && !self.attacked_by(base + 6, them)
        {
            moves.push(Move::new(Square(base + 4), Square(base + 6)));
        }
        if self.castling & long != 0
            && self.squares[(base + 3) as usize].is_none()
            && self.squares[(base + 2) as usize].is_none()
            && self.squares[(base + 1) as usize].is_none()
            && !self.attacked_by(base + 4, them)
            && !self.attacked_by(base + 3, them)
            && !self.attacked_by(base + 2, them)
        {
            moves.push(Move::new(Square(base + 4), Square(base + 2)));
        }
    }

    pub fn make(&self, m: Move) -> NaiveBoard {
        let mut next = self.clone();
        let us = self.side;
        let (pt, _) = self.squares[m.from.index()].expect("move from empty");
        next.squares[m.from.index()] = None;
        next.squares[m.to.index()] = Some((m.promotion.unwrap_or(pt), us));
        if pt == PieceType::Pawn && Some(m.to.0) == self.ep {
            let victim = (m.from.rank() * 8 + m.to.file()) as usize;
            next.squares[victim] = None;
        }
        if pt == PieceType::King && m.from.file() == 4 && m.to.file().abs_diff(4) == 2 {
            let rank = m.from.rank();
            let (rf, rt) = if m.to.file() == 6 { (7, 5) } else { (0, 3) };
            next.squares[(rank * 8 + rt) as usize] = next.squares[(rank * 8 + rf) as usize];
            next.squares[(rank * 8 + rf) as usize] = None;
        }
        next.ep = if pt == PieceType::Pawn && m.from.rank().abs_diff(m.to.rank()) == 2 {
            Some(((m.from.0 + m.to.0) / 2) as u8)
        } else {
            None
        };
        for sq in [m.from.0, m.to.0] {
            next.castling &= match sq {
                0 => !2,
                4 => !3,
                7 => !1,
                56 => !8,
                60 => !12,
                63 => !4,
                _ => !0,
            };
        }
        next.side = match us {
            Color::White => Color::Black,
            Color::Black => Color::White,
        };
        next
    }

    pub fn legal_moves(&self) -> Vec<Move> {
        let us = self.side;
        let them = match us {
            Color::White => Color::Black,
            Color::Black => Color::White,
        };
        self.pseudo_moves()
            .into_iter()
            .filter(|&m| {
                let next = self.make(m);
                !next.attacked_by(next.king_of(us), them)
            })
            .collect()
    }

    pub fn perft(&self, depth: u32) -> u64 {
        if depth == 0 {
            return 1;
        }
        let moves = self.legal_moves();
        if depth == 1 {
            return moves.len() as u64;
        }
        moves.iter().map(|&m| self.make(m).perft(depth - 1)).sum()
    }
}

