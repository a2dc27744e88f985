//! Chess rules kernel: board state, legal move generation, game status.

pub(crate) mod bitboard;
mod fen;
mod movegen;
mod position;
mod san;
mod zobrist;

pub use fen::FenError;
pub use position::{GameRules, Position, DEFAULT_MAX_PLIES, START_FEN};

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use serde::{Deserialize, Serialize};

/// Side to move or piece owner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    White,
    Black,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::White => Color::Black,
            Color::Black => Color::White,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::White => "white",
            Color::Black => "black",
        })
    }
}

/// The six piece kinds. Enum order is the tie-break order used when a
/// brain's piece choices are otherwise equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PieceType {
    Pawn,
    Knight,
    Bishop,
    Rook,
    Queen,
    King,
}

impl PieceType {
    pub const ALL: [PieceType; 6] = [
        PieceType::Pawn,
        PieceType::Knight,
        PieceType::Bishop,
        PieceType::Rook,
        PieceType::Queen,
        PieceType::King,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Lowercase piece letter as used in FEN and UCI promotion suffixes.
    pub fn letter(self) -> char {
        match self {
            PieceType::Pawn => 'p',
            PieceType::Knight => 'n',
            PieceType::Bishop => 'b',
            PieceType::Rook => 'r',
            PieceType::Queen => 'q',
            PieceType::King => 'k',
        }
    }

    pub fn from_letter(c: char) -> Option<PieceType> {
        Some(match c.to_ascii_lowercase() {
            'p' => PieceType::Pawn,
            'n' => PieceType::Knight,
            'b' => PieceType::Bishop,
            'r' => PieceType::Rook,
            'q' => PieceType::Queen,
            'k' => PieceType::King,
            _ => return None,
        })
    }
}

/// Board square, 0 = a1 .. 63 = h8 (rank-major).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Square(pub u8);

impl Square {
    pub fn new(file: u8, rank: u8) -> Square {
        debug_assert!(file < 8 && rank < 8);
        Square(rank * 8 + file)
    }

    pub fn file(self) -> u8 {
        self.0 & 7
    }

    pub fn rank(self) -> u8 {
        self.0 >> 3
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_name(s: &str) -> Option<Square> {
        let mut chars = s.chars();
        let f = chars.next()?;
        let r = chars.next()?;
        if chars.next().is_some() {
            return None;
        }
        if !('a'..='h').contains(&f) || !('1'..='8').contains(&r) {
            return None;
        }
        Some(Square::new(f as u8 - b'a', r as u8 - b'1'))
    }
}

impl fmt::Display for Square {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}",
            (b'a' + self.file()) as char,
            (b'1' + self.rank()) as char
        )
    }
}

/// A chess move in coordinate form. Castling is encoded as the two-square
/// king move. `Ord` follows UCI string order so that deterministic
/// tie-breaks can sort moves without formatting them. Serializes as the
/// UCI string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Move {
    pub from: Square,
    pub to: Square,
    pub promotion: Option<PieceType>,
}

impl Serialize for Move {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.uci())
    }
}

impl<'de> Deserialize<'de> for Move {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Move, D::Error> {
        let text = <&str>::deserialize(deserializer)?;
        Move::from_uci(text)
            .ok_or_else(|| serde::de::Error::custom(alloc::format!("bad uci move {text:?}")))
    }
}

impl Move {
    pub fn new(from: Square, to: Square) -> Move {
        Move {
            from,
            to,
            promotion: None,
        }
    }

    pub fn promoting(from: Square, to: Square, piece: PieceType) -> Move {
        Move {
            from,
            to,
            promotion: Some(piece),
        }
    }

    /// UCI long algebraic form, e.g. `e2e4`, `e7e8q`.
    pub fn uci(&self) -> String {
        use core::fmt::Write;
        let mut s = String::with_capacity(5);
        let _ = write!(s, "{}{}", self.from, self.to);
        if let Some(p) = self.promotion {
            s.push(p.letter());
        }
        s
    }

    pub fn from_uci(s: &str) -> Option<Move> {
        if s.len() < 4 || s.len() > 5 {
            return None;
        }
        let from = Square::from_name(&s[0..2])?;
        let to = Square::from_name(&s[2..4])?;
        let promotion = match s.len() {
            5 => {
                let p = PieceType::from_letter(s.chars().nth(4)?)?;
                if !matches!(
                    p,
                    PieceType::Knight | PieceType::Bishop | PieceType::Rook | PieceType::Queen
                ) {
                    return None;
                }
                Some(p)
            }
            _ => None,
        };
        Some(Move {
            from,
            to,
            promotion,
        })
    }

    fn uci_key(&self) -> (u8, u8, u8, u8, u8) {
        // Promotion letters sort as their ASCII would in the UCI string;
        // the move without a suffix sorts first.
        let promo = match self.promotion {
            None => 0,
            Some(PieceType::Bishop) => b'b',
            Some(PieceType::Knight) => b'n',
            Some(PieceType::Queen) => b'q',
            Some(PieceType::Rook) => b'r',
            Some(p) => p.letter() as u8,
        };
        (
            self.from.file(),
            self.from.rank(),
            self.to.file(),
            self.to.rank(),
            promo,
        )
    }
}

impl Ord for Move {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.uci_key().cmp(&other.uci_key())
    }
}

impl PartialOrd for Move {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.from, self.to)?;
        if let Some(p) = self.promotion {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}

/// Terminal state classification of a position within a game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GameStatus {
    Ongoing,
    Checkmate,
    Stalemate,
    DrawFiftyMove,
    DrawThreefold,
    DrawInsufficient,
    DrawMaxPly,
}

impl GameStatus {
    pub fn is_terminal(self) -> bool {
        !matches!(self, GameStatus::Ongoing)
    }

    pub fn is_draw(self) -> bool {
        matches!(
            self,
            GameStatus::Stalemate
                | GameStatus::DrawFiftyMove
                | GameStatus::DrawThreefold
                | GameStatus::DrawInsufficient
                | GameStatus::DrawMaxPly
        )
    }
}

/// Count of leaf nodes of the legal move tree at `depth`.
pub fn perft(pos: &Position, depth: u32) -> u64 {
    if depth == 0 {
        return 1;
    }
    let moves = pos.legal_moves();
    if depth == 1 {
        return moves.len() as u64;
    }
    let mut total = 0;
    for m in moves {
        let child = pos.apply_move_unchecked(m);
        total += perft(&child, depth - 1);
    }
    total
}

/// Moving piece of `m`, assuming `m` is legal in `pos`: castling is a king
/// move, promotions are pawn moves.
pub fn piece_type_of(pos: &Position, m: Move) -> Option<PieceType> {
    pos.piece_on(m.from).map(|(pt, _)| pt)
}

pub(crate) type MoveList = Vec<Move>;
