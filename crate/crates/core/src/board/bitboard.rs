//! Bitboard primitives and precomputed attack tables.
//!
//! All tables are built at compile time so the kernel has no init step.

use super::{Color, Square};

pub type Bitboard = u64;

pub const RANK_1: Bitboard = 0xff;
pub const RANK_8: Bitboard = RANK_1 << 56;

#[inline]
pub fn bit(sq: Square) -> Bitboard {
    1u64 << sq.0
}

#[inline]
pub fn lsb(bb: Bitboard) -> Square {
    debug_assert!(bb != 0);
    Square(bb.trailing_zeros() as u8)
}

#[inline]
pub fn msb(bb: Bitboard) -> Square {
    debug_assert!(bb != 0);
    Square(63 - bb.leading_zeros() as u8)
}

/// Iterate over set squares, low to high.
pub struct Squares(pub Bitboard);

impl Iterator for Squares {
    type Item = Square;

    #[inline]
    fn next(&mut self) -> Option<Square> {
        if self.0 == 0 {
            return None;
        }
        let sq = lsb(self.0);
        self.0 &= self.0 - 1;
        Some(sq)
    }
}

// Direction indices into RAYS. The first four increase square index
// (scan with lsb for the nearest blocker), the last four decrease (msb).
pub const DIR_N: usize = 0;
pub const DIR_NE: usize = 1;
pub const DIR_E: usize = 2;
pub const DIR_NW: usize = 3;
pub const DIR_S: usize = 4;
pub const DIR_SW: usize = 5;
pub const DIR_W: usize = 6;
pub const DIR_SE: usize = 7;

const DIR_OFFSETS: [(i8, i8); 8] = [
    (0, 1),
    (1, 1),
    (1, 0),
    (-1, 1),
    (0, -1),
    (-1, -1),
    (-1, 0),
    (1, -1),
];

const fn ray_from(file: i8, rank: i8, df: i8, dr: i8) -> u64 {
    let mut bb = 0u64;
    let mut f = file + df;
    let mut r = rank + dr;
    while f >= 0 && f < 8 && r >= 0 && r < 8 {
        bb |= 1u64 << (r * 8 + f);
        f += df;
        r += dr;
    }
    bb
}

const fn build_rays() -> [[u64; 64]; 8] {
    let mut rays = [[0u64; 64]; 8];
    let mut dir = 0;
    while dir < 8 {
        let (df, dr) = DIR_OFFSETS[dir];
        let mut sq = 0;
        while sq < 64 {
            rays[dir][sq] = ray_from((sq % 8) as i8, (sq / 8) as i8, df, dr);
            sq += 1;
        }
        dir += 1;
    }
    rays
}

pub static RAYS: [[u64; 64]; 8] = build_rays();

const fn step_targets(sq: usize, steps: &[(i8, i8)]) -> u64 {
    let f = (sq % 8) as i8;
    let r = (sq / 8) as i8;
    let mut bb = 0u64;
    let mut i = 0;
    while i < steps.len() {
        let (df, dr) = steps[i];
        let nf = f + df;
        let nr = r + dr;
        if nf >= 0 && nf < 8 && nr >= 0 && nr < 8 {
            bb |= 1u64 << (nr * 8 + nf);
        }
        i += 1;
    }
    bb
}

const fn build_step_table(steps: &[(i8, i8)]) -> [u64; 64] {
    let mut table = [0u64; 64];
    let mut sq = 0;
    while sq < 64 {
        table[sq] = step_targets(sq, steps);
        sq += 1;
    }
    table
}

pub static KNIGHT_ATTACKS: [u64; 64] = build_step_table(&[
    (1, 2),
    (2, 1),
    (2, -1),
    (1, -2),
    (-1, -2),
    (-2, -1),
    (-2, 1),
    (-1, 2),
]);

pub static KING_ATTACKS: [u64; 64] = build_step_table(&[
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, -1),
    (-1, 0),
    (-1, 1),
]);

// Squares a pawn of the given color attacks from sq (capture targets).
pub static PAWN_ATTACKS: [[u64; 64]; 2] = [
    build_step_table(&[(-1, 1), (1, 1)]),
    build_step_table(&[(-1, -1), (1, -1)]),
];

const fn build_between() -> [[u64; 64]; 64] {
    let rays = build_rays();
    let mut table = [[0u64; 64]; 64];
    let mut a = 0;
    while a < 64 {
        let mut dir = 0;
        while dir < 8 {
            let ray = rays[dir][a];
            let mut targets = ray;
            while targets != 0 {
                let b = targets.trailing_zeros() as usize;
                // Everything on the ray from a, strictly before b.
                table[a][b] = ray & !rays[dir][b] & !(1u64 << b);
                targets &= targets - 1;
            }
            dir += 1;
        }
        a += 1;
    }
    table
}

const fn build_lines() -> [[u64; 64]; 64] {
    let mut table = [[0u64; 64]; 64];
    let rays = build_rays();
    let mut a = 0;
    while a < 64 {
        let mut dir = 0;
        while dir < 8 {
            let opposite = (dir + 4) % 8;
            let mut targets = rays[dir][a];
            while targets != 0 {
                let b = targets.trailing_zeros() as usize;
                table[a][b] = rays[dir][a] | rays[opposite][a] | (1u64 << a);
                targets &= targets - 1;
            }
            dir += 1;
        }
        a += 1;
    }
    table
}

/// Squares strictly between two aligned squares (empty if not aligned).
pub static BETWEEN: [[u64; 64]; 64] = build_between();

/// Full line through two aligned squares, including both (empty if not aligned).
pub static LINES: [[u64; 64]; 64] = build_lines();

#[inline]
pub fn between(a: Square, b: Square) -> Bitboard {
    BETWEEN[a.index()][b.index()]
}

#[inline]
pub fn line(a: Square, b: Square) -> Bitboard {
    LINES[a.index()][b.index()]
}

#[inline]
fn ray_attack(dir: usize, sq: Square, occupied: Bitboard) -> Bitboard {
    let ray = RAYS[dir][sq.index()];
    let blockers = ray & occupied;
    if blockers == 0 {
        return ray;
    }
    let nearest = if dir < 4 { lsb(blockers) } else { msb(blockers) };
    ray ^ RAYS[dir][nearest.index()]
}

#[inline]
pub fn rook_attacks(sq: Square, occupied: Bitboard) -> Bitboard {
    ray_attack(DIR_N, sq, occupied)
        | ray_attack(DIR_E, sq, occupied)
        | ray_attack(DIR_S, sq, occupied)
        | ray_attack(DIR_W, sq, occupied)
}

#[inline]
pub fn bishop_attacks(sq: Square, occupied: Bitboard) -> Bitboard {
    ray_attack(DIR_NE, sq, occupied)
        | ray_attack(DIR_NW, sq, occupied)
        | ray_attack(DIR_SE, sq, occupied)
        | ray_attack(DIR_SW, sq, occupied)
}

#[inline]
pub fn pawn_attacks(color: Color, sq: Square) -> Bitboard {
    PAWN_ATTACKS[color.index()][sq.index()]
}
