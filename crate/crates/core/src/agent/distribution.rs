use super::AgentError;
use crate::board::{piece_type_of, Move, PieceType, Position};
use alloc::vec::Vec;
use rand_core::RngCore;

/// Probability distribution over the legal moves of one position.
///
/// Entries cover the full legal move set (probability may be zero) and are
/// kept in UCI string order so argmax ties and sampling are deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct MoveDistribution {
    entries: Vec<(Move, f64)>,
}

impl MoveDistribution {
    /// Build from raw weights; normalizes to sum 1 and sorts by UCI order.
    /// Weights must be non-negative, finite, and not all zero.
    pub fn from_weights(mut entries: Vec<(Move, f64)>) -> MoveDistribution {
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let total: f64 = entries.iter().map(|(_, w)| *w).sum();
        assert!(
            total.is_finite() && total > 0.0,
            "distribution weights must have positive finite mass"
        );
        for (_, w) in &mut entries {
            *w /= total;
        }
        MoveDistribution { entries }
    }

    /// All probability on one move out of the given legal set.
    pub fn point_mass(legal: &[Move], chosen: Move) -> MoveDistribution {
        let entries = legal
            .iter()
            .map(|&m| (m, if m == chosen { 1.0 } else { 0.0 }))
            .collect();
        MoveDistribution::from_weights_pre_normalized(entries)
    }

    fn from_weights_pre_normalized(mut entries: Vec<(Move, f64)>) -> MoveDistribution {
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        MoveDistribution { entries }
    }

    pub fn entries(&self) -> &[(Move, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn probability_of(&self, m: Move) -> Option<f64> {
        self.entries
            .iter()
            .find(|(mv, _)| *mv == m)
            .map(|(_, p)| *p)
    }

    /// Highest-probability move; ties go to the UCI-lexicographically
    /// smallest because entries are sorted and the comparison is strict.
    pub fn argmax(&self) -> Option<Move> {
        let mut best: Option<(Move, f64)> = None;
        for &(m, p) in &self.entries {
            match best {
                Some((_, bp)) if p <= bp => {}
                _ => best = Some((m, p)),
            }
        }
        best.map(|(m, _)| m)
    }

    /// Draw one move proportionally to probability.
    pub fn sample(&self, rng: &mut dyn RngCore) -> Option<Move> {
        if self.entries.is_empty() {
            return None;
        }
        let u = uniform_f64(rng);
        let mut acc = 0.0;
        let mut last = self.entries[0].0;
        for &(m, p) in &self.entries {
            if p <= 0.0 {
                continue;
            }
            last = m;
            acc += p;
            if u < acc {
                return Some(m);
            }
        }
        // Rounding can leave acc slightly below 1; fall back to the last
        // move with positive mass.
        Some(last)
    }

    /// The k highest-probability moves, ties broken by UCI order.
    pub fn top_k(&self, k: usize) -> Vec<(Move, f64)> {
        let mut sorted = self.entries.clone();
        sorted.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        sorted.truncate(k);
        sorted
    }

    pub fn total_mass(&self) -> f64 {
        self.entries.iter().map(|(_, p)| *p).sum()
    }
}

/// Uniform in [0, 1) with 53 bits of precision, stable across platforms.
pub(crate) fn uniform_f64(rng: &mut dyn RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Restrict `dist` to moves of piece type `t` in `pos` and renormalize.
pub fn conditional_policy(
    dist: &MoveDistribution,
    pos: &Position,
    t: PieceType,
) -> Result<MoveDistribution, AgentError> {
    let restricted: Vec<(Move, f64)> = dist
        .entries()
        .iter()
        .filter(|(m, _)| piece_type_of(pos, *m) == Some(t))
        .copied()
        .collect();
    if restricted.is_empty() {
        return Err(AgentError::EmptyPieceRestriction(t));
    }
    let mass: f64 = restricted.iter().map(|(_, p)| *p).sum();
    if mass <= 0.0 {
        // All mass sat on other piece types; fall back to uniform over the
        // restriction so the result is still a distribution.
        let n = restricted.len() as f64;
        return Ok(MoveDistribution::from_weights_pre_normalized(
            restricted.into_iter().map(|(m, _)| (m, 1.0 / n)).collect(),
        ));
    }
    Ok(MoveDistribution::from_weights_pre_normalized(
        restricted.into_iter().map(|(m, p)| (m, p / mass)).collect(),
    ))
}
