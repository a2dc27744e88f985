//! Team game frameworks: coin-flip tag team, hand-and-brain, and plain
//! head-to-head, plus paired-match orchestration and scoring.

mod bitstring;
mod game;
mod record;
mod stats;

pub use bitstring::{Bitstring, BitstringPool};
pub use game::{GameWorker, MatchError, MatchSpec, TeamSpec};
pub use record::{
    ActorLabel, Framework, GameOutcome, GameRecord, HbPly, InteractionType, PlyRecord, TeamLabel,
    TeamRole, Termination, RECORD_SCHEMA_VERSION,
};
pub use stats::{aggregate, derive_game_seed, win_share, win_share_se, GamePlan, MatchResult};
