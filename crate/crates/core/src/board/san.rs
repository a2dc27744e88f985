use super::{GameStatus, Move, PieceType, Position};
use alloc::string::{String, ToString};

impl Position {
    /// Standard algebraic notation for a legal move, including `+`/`#`.
    pub fn san(&self, m: Move) -> String {
        let mut out = String::with_capacity(8);
        let (piece, _) = self.piece_on(m.from).expect("san of empty square");
        let capture = self.piece_on(m.to).is_some()
            || (piece == PieceType::Pawn && Some(m.to) == self.en_passant_square());

        if piece == PieceType::King && m.from.file() == 4 && m.to.file().abs_diff(4) == 2 {
            out.push_str(if m.to.file() == 6 { "O-O" } else { "O-O-O" });
        } else if piece == PieceType::Pawn {
            if capture {
                out.push((b'a' + m.from.file()) as char);
                out.push('x');
            }
            out.push_str(&m.to.to_string());
            if let Some(promo) = m.promotion {
                out.push('=');
                out.push(promo.letter().to_ascii_uppercase());
            }
        } else {
            out.push(piece.letter().to_ascii_uppercase());
            out.push_str(&self.disambiguation(m, piece));
            if capture {
                out.push('x');
            }
            out.push_str(&m.to.to_string());
        }

        let next = self.apply_move_unchecked(m);
        if next.in_check() {
            out.push(if next.positional_status() == GameStatus::Checkmate {
                '#'
            } else {
                '+'
            });
        }
        out
    }

    fn disambiguation(&self, m: Move, piece: PieceType) -> String {
        let mut same_file = false;
        let mut same_rank = false;
        let mut others = false;
        for other in self.legal_moves() {
            if other.to == m.to && other.from != m.from {
                if let Some((pt, _)) = self.piece_on(other.from) {
                    if pt == piece {
                        others = true;
                        if other.from.file() == m.from.file() {
                            same_file = true;
                        }
                        if other.from.rank() == m.from.rank() {
                            same_rank = true;
                        }
                    }
                }
            }
        }
        let mut out = String::new();
        if !others {
            return out;
        }
        if !same_file {
            out.push((b'a' + m.from.file()) as char);
        } else if !same_rank {
            out.push((b'1' + m.from.rank()) as char);
        } else {
            out.push((b'a' + m.from.file()) as char);
            out.push((b'1' + m.from.rank()) as char);
        }
        out
    }
}
