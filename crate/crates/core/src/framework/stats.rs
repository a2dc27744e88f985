use super::record::GameRecord;
use alloc::string::String;
use serde::{Deserialize, Serialize};

/// Win-share in percent: 100 * (W + D/2) / n.
pub fn win_share(wins: u64, draws: u64, losses: u64) -> f64 {
    let n = (wins + draws + losses) as f64;
    (wins as f64 + 0.5 * draws as f64) * 100.0 / n
}

/// Standard error of the win-share in percent, treating (W, D, L) as a
/// trinomial sample: 50 * sqrt((w + l - (w - l)^2) / n).
pub fn win_share_se(wins: u64, losses: u64, n: u64) -> f64 {
    let nf = n as f64;
    let w = wins as f64 / nf;
    let l = losses as f64 / nf;
    50.0 * libm::sqrt((w + l - (w - l) * (w - l)) / nf)
}

/// Derived per-game RNG seed; depends only on the master seed and game
/// index so results are identical across worker schedules.
pub fn derive_game_seed(master_seed: u64, game_id: u64) -> u64 {
    let mut z = master_seed ^ game_id.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Color/schedule/seed assignment of one game within a match.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GamePlan {
    pub game_id: u64,
    /// Even games give the focal team white; odd games swap. Tag-team
    /// pairs (2k, 2k+1) share bitstring k with opposite colors.
    pub focal_is_white: bool,
    pub bitstring_index: Option<usize>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchResult {
    /// Scored games (aborted games are excluded).
    pub games: u64,
    pub wins: u64,
    pub draws: u64,
    pub losses: u64,
    /// Percent, focal perspective.
    pub win_share: f64,
    /// Percent.
    pub se: f64,
    pub aborted: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pool_id: Option<String>,
}

impl MatchResult {
    pub fn summary_line(&self) -> String {
        alloc::format!(
            "{} games: W {} D {} L {} -> win-share {:.2}% +/- {:.2}% ({} aborted)",
            self.games,
            self.wins,
            self.draws,
            self.losses,
            self.win_share,
            self.se,
            self.aborted
        )
    }
}

/// Fold finished games into a focal-perspective score line.
pub fn aggregate(records: &[GameRecord]) -> MatchResult {
    let mut wins = 0;
    let mut draws = 0;
    let mut losses = 0;
    let mut aborted = 0;
    for record in records {
        match record.focal_points() {
            Some(points) if points == 1.0 => wins += 1,
            Some(points) if points == 0.5 => draws += 1,
            Some(_) => losses += 1,
            None => aborted += 1,
        }
    }
    let games = wins + draws + losses;
    let (win_share_pct, se) = if games == 0 {
        (f64::NAN, f64::NAN)
    } else {
        (
            win_share(wins, draws, losses),
            win_share_se(wins, losses, games),
        )
    };
    MatchResult {
        games,
        wins,
        draws,
        losses,
        win_share: win_share_pct,
        se,
        aborted,
        pool_id: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn supplement_error_bound_values() {
        // w = l = 0.5, n = 10000 => se = 0.5 exactly.
        assert_eq!(win_share_se(5000, 5000, 10_000), 0.5);
        // All draws => win-share 50 regardless of n.
        assert_eq!(win_share(0, 7, 0), 50.0);
        assert_eq!(win_share(0, 10_000, 0), 50.0);
        // Realized composition behind a 66.5% line.
        assert_eq!(win_share(665, 0, 335), 66.5);
    }

    #[test]
    fn se_bounded_by_half_over_sqrt_n() {
        for (w, l, n) in [(0, 0, 100u64), (30, 20, 100), (100, 0, 100), (50, 50, 100)] {
            let se = win_share_se(w, l, n);
            assert!(se <= 50.0 / libm::sqrt(n as f64) + 1e-12);
        }
    }

    #[test]
    fn seeds_differ_per_game_and_reproduce() {
        assert_eq!(derive_game_seed(1, 0), derive_game_seed(1, 0));
        assert_ne!(derive_game_seed(1, 0), derive_game_seed(1, 1));
        assert_ne!(derive_game_seed(1, 0), derive_game_seed(2, 0));
    }
}
