use super::position::{CASTLE_BK, CASTLE_BQ, CASTLE_WK, CASTLE_WQ};
use super::{Color, PieceType, Position, Square};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FenError {
    #[error("expected 6 fields, found {0}")]
    FieldCount(usize),
    #[error("bad placement field: {0}")]
    Placement(String),
    #[error("bad side-to-move field: {0}")]
    Side(String),
    #[error("bad castling field: {0}")]
    Castling(String),
    #[error("bad en-passant field: {0}")]
    EnPassant(String),
    #[error("bad counter field: {0}")]
    Counter(String),
    #[error("each side needs exactly one king")]
    Kings,
    #[error("side not to move is in check")]
    OppositeCheck,
    #[error("pawn on back rank")]
    PawnOnBackRank,
}

impl Position {
    /// Parse a 6-field FEN string, validating the kernel invariants.
    pub fn from_fen(text: &str) -> Result<Position, FenError> {
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(FenError::FieldCount(fields.len()));
        }

        let mut pos = Position {
            by_type: [0; 6],
            by_color: [0; 2],
            side: Color::White,
            castling: 0,
            en_passant: None,
            halfmove_clock: 0,
            fullmove_number: 1,
            hash: 0,
        };

        let ranks: Vec<&str> = fields[0].split('/').collect();
        if ranks.len() != 8 {
            return Err(FenError::Placement(String::from(fields[0])));
        }
        for (i, rank_text) in ranks.iter().enumerate() {
            let rank = 7 - i as u8;
            let mut file = 0u8;
            for c in rank_text.chars() {
                if let Some(d) = c.to_digit(10) {
                    if d == 0 || d > 8 {
                        return Err(FenError::Placement(String::from(*rank_text)));
                    }
                    file += d as u8;
                } else {
                    let pt = PieceType::from_letter(c)
                        .ok_or_else(|| FenError::Placement(String::from(*rank_text)))?;
                    if file >= 8 {
                        return Err(FenError::Placement(String::from(*rank_text)));
                    }
                    let color = if c.is_ascii_uppercase() {
                        Color::White
                    } else {
                        Color::Black
                    };
                    let sq = Square::new(file, rank);
                    pos.by_type[pt.index()] |= 1u64 << sq.0;
                    pos.by_color[color.index()] |= 1u64 << sq.0;
                    file += 1;
                }
            }
            if file != 8 {
                return Err(FenError::Placement(String::from(*rank_text)));
            }
        }

        pos.side = match fields[1] {
            "w" => Color::White,
            "b" => Color::Black,
            other => return Err(FenError::Side(String::from(other))),
        };

        if fields[2] != "-" {
            for c in fields[2].chars() {
                pos.castling |= match c {
                    'K' => CASTLE_WK,
                    'Q' => CASTLE_WQ,
                    'k' => CASTLE_BK,
                    'q' => CASTLE_BQ,
                    _ => return Err(FenError::Castling(String::from(fields[2]))),
                };
            }
        }

        if fields[3] != "-" {
            let sq = Square::from_name(fields[3])
                .ok_or_else(|| FenError::EnPassant(String::from(fields[3])))?;
            if sq.rank() != 2 && sq.rank() != 5 {
                return Err(FenError::EnPassant(String::from(fields[3])));
            }
            pos.en_passant = Some(sq);
        }

        pos.halfmove_clock = fields[4]
            .parse()
            .map_err(|_| FenError::Counter(String::from(fields[4])))?;
        pos.fullmove_number = fields[5]
            .parse()
            .map_err(|_| FenError::Counter(String::from(fields[5])))?;
        if pos.fullmove_number == 0 {
            return Err(FenError::Counter(String::from(fields[5])));
        }

        for color in [Color::White, Color::Black] {
            if pos.pieces(color, PieceType::King).count_ones() != 1 {
                return Err(FenError::Kings);
            }
        }
        if pos.by_type[PieceType::Pawn.index()] & (super::bitboard::RANK_1 | super::bitboard::RANK_8)
            != 0
        {
            return Err(FenError::PawnOnBackRank);
        }
        if pos.is_attacked(pos.king_square(pos.side.flip()), pos.side) {
            return Err(FenError::OppositeCheck);
        }

        pos.hash = pos.compute_hash();
        Ok(pos)
    }

    pub fn to_fen(&self) -> String {
        let mut out = String::with_capacity(80);
        for rank in (0..8).rev() {
            let mut empty = 0;
            for file in 0..8 {
                match self.piece_on(Square::new(file, rank)) {
                    Some((pt, color)) => {
                        if empty > 0 {
                            out.push((b'0' + empty) as char);
                            empty = 0;
                        }
                        let c = pt.letter();
                        out.push(if color == Color::White {
                            c.to_ascii_uppercase()
                        } else {
                            c
                        });
                    }
                    None => empty += 1,
                }
            }
            if empty > 0 {
                out.push((b'0' + empty) as char);
            }
            if rank > 0 {
                out.push('/');
            }
        }
        out.push(' ');
        out.push(if self.side == Color::White { 'w' } else { 'b' });
        out.push(' ');
        if self.castling == 0 {
            out.push('-');
        } else {
            for (flag, c) in [
                (CASTLE_WK, 'K'),
                (CASTLE_WQ, 'Q'),
                (CASTLE_BK, 'k'),
                (CASTLE_BQ, 'q'),
            ] {
                if self.castling & flag != 0 {
                    out.push(c);
                }
            }
        }
        match self.en_passant {
            Some(sq) => out.push_str(&format!(" {sq}")),
            None => out.push_str(" -"),
        }
        out.push_str(&format!(" {} {}", self.halfmove_clock, self.fullmove_number));
        out
    }
}
