use crate::board::DEFAULT_MAX_PLIES;
use alloc::string::String;
use alloc::vec::Vec;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

/// Per-ply senior/junior schedule for one tag-team game: '1' means the
/// senior moves at that ply, '0' the junior. Both teams consult the same
/// schedule, so a color-swapped replay faces identical coin flips.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bitstring {
    pub id: u32,
    pub bits: String,
}

impl Bitstring {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn senior_at(&self, ply: usize) -> bool {
        self.bits.as_bytes()[ply] == b'1'
    }
}

/// A reproducible set of schedules shared by every experiment in a suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitstringPool {
    pub seed: u64,
    pub length: usize,
    pub pool_id: String,
    pub bitstrings: Vec<Bitstring>,
}

impl BitstringPool {
    pub fn generate(seed: u64, length: usize, count: usize) -> BitstringPool {
        let length = if length == 0 { DEFAULT_MAX_PLIES } else { length };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut bitstrings = Vec::with_capacity(count);
        for id in 0..count {
            let mut bits = String::with_capacity(length);
            let mut word = 0u64;
            for i in 0..length {
                if i % 64 == 0 {
                    word = rng.next_u64();
                }
                bits.push(if word & 1 == 1 { '1' } else { '0' });
                word >>= 1;
            }
            bitstrings.push(Bitstring {
                id: id as u32,
                bits,
            });
        }
        let mut pool = BitstringPool {
            seed,
            length,
            pool_id: String::new(),
            bitstrings,
        };
        pool.pool_id = pool.fingerprint();
        pool
    }

    /// FNV-1a over the header and contents; stable identifier recorded in
    /// every artifact that consumed this pool.
    pub fn fingerprint(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |byte: u8| {
            h ^= byte as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        };
        for b in self.seed.to_le_bytes() {
            eat(b);
        }
        for b in (self.length as u64).to_le_bytes() {
            eat(b);
        }
        for bs in &self.bitstrings {
            for b in bs.bits.as_bytes() {
                eat(*b);
            }
        }
        alloc::format!("{h:016x}")
    }

    pub fn len(&self) -> usize {
        self.bitstrings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bitstrings.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_seed_deterministic() {
        let a = BitstringPool::generate(7, 512, 4);
        let b = BitstringPool::generate(7, 512, 4);
        assert_eq!(a, b);
        assert_eq!(a.pool_id, b.pool_id);
        let c = BitstringPool::generate(8, 512, 4);
        assert_ne!(a.pool_id, c.pool_id);
        assert_eq!(a.bitstrings[0].len(), 512);
    }

    #[test]
    fn bits_look_like_coin_flips() {
        let pool = BitstringPool::generate(42, 512, 8);
        let ones: usize = pool
            .bitstrings
            .iter()
            .map(|b| b.bits.bytes().filter(|&c| c == b'1').count())
            .sum();
        let total = 512 * 8;
        let share = ones as f64 / total as f64;
        assert!((share - 0.5).abs() < 0.05, "ones share {share}");
    }
}
