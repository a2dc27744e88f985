use crate::agent::{AgentError, Evaluate};
use crate::framework::{ActorLabel, Framework, GameRecord, InteractionType, TeamRole};
use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const LOSS_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("game {game_id} is not replayable at ply {ply}")]
    Unreplayable { game_id: u64, ply: usize },
    #[error("evaluator failed: {0}")]
    Evaluator(#[from] AgentError),
    #[error("empty condition cell")]
    EmptyCell,
    #[error("records lack hand-and-brain annotations")]
    MissingHbAnnotations,
}

/// Who played a move, in focal/alter terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActorRole {
    FocalSenior,
    FocalJunior,
    AlterSenior,
    AlterJunior,
    FocalTeam,
    AlterTeam,
}

impl ActorRole {
    pub fn team(self) -> TeamRole {
        match self {
            ActorRole::FocalSenior | ActorRole::FocalJunior | ActorRole::FocalTeam => {
                TeamRole::Focal
            }
            _ => TeamRole::Alter,
        }
    }

    fn from_ply(role: TeamRole, actor: Option<ActorLabel>) -> ActorRole {
        match (role, actor) {
            (TeamRole::Focal, Some(ActorLabel::Senior)) => ActorRole::FocalSenior,
            (TeamRole::Focal, Some(ActorLabel::Junior)) => ActorRole::FocalJunior,
            (TeamRole::Alter, Some(ActorLabel::Senior)) => ActorRole::AlterSenior,
            (TeamRole::Alter, Some(ActorLabel::Junior)) => ActorRole::AlterJunior,
            (TeamRole::Focal, None) => ActorRole::FocalTeam,
            (TeamRole::Alter, None) => ActorRole::AlterTeam,
        }
    }
}

/// One move's win-probability accounting. Probabilities are percentages;
/// `wp_before`/`wp_after` are from the mover's perspective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveLossRecord {
    pub game_id: u64,
    pub ply: usize,
    pub role: ActorRole,
    pub wp_before: f64,
    pub wp_after: f64,
    /// clamp(wp_before - wp_after, 0, 100).
    pub loss: f64,
    /// Unclamped wp_before - wp_after.
    pub raw_delta: f64,
    /// Chronological senior/junior labels of up to the two preceding
    /// plies (both teams interleaved); empty outside tag-team games.
    pub preceding: String,
    /// Ten-point bucket of the focal-perspective wp_before.
    pub bucket: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interaction: Option<InteractionType>,
    /// Loss the hand's unconstrained sample would have incurred.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypothetical_loss: Option<f64>,
    /// Loss of the opponent's reply (next ply), when one exists.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub next_opponent_loss: Option<f64>,
}

impl MoveLossRecord {
    pub fn wp_before_focal(&self) -> f64 {
        match self.role.team() {
            TeamRole::Focal => self.wp_before,
            TeamRole::Alter => 100.0 - self.wp_before,
        }
    }

    /// Hypothetical minus actual loss; positive means the brain's
    /// constraint improved on the hand's intention.
    pub fn savings(&self) -> Option<f64> {
        self.hypothetical_loss.map(|h| h - self.loss)
    }

    pub fn was_clamped(&self) -> bool {
        self.raw_delta < 0.0
    }
}

pub(crate) fn bucket_of(wp: f64) -> usize {
    ((wp / 10.0) as usize).min(9)
}

/// Annotate every ply of a finished game with win-probability losses.
pub fn annotate_losses(
    record: &GameRecord,
    evaluator: &dyn Evaluate,
) -> Result<Vec<MoveLossRecord>, AnalysisError> {
    let positions = record
        .replay()
        .map_err(|ply| AnalysisError::Unreplayable {
            game_id: record.game_id,
            ply,
        })?;

    let mut out: Vec<MoveLossRecord> = Vec::with_capacity(record.plies.len());
    for (t, ply) in record.plies.iter().enumerate() {
        let mover = positions[t].side_to_move();
        let wp_before = evaluator.winprob(&positions[t], mover)?.value();
        let wp_after = evaluator.winprob(&positions[t + 1], mover)?.value();
        let raw_delta = wp_before - wp_after;
        let loss = raw_delta.clamp(0.0, 100.0);

        let mut preceding = String::new();
        if record.framework == Framework::TagTeam {
            for back in (1..=2usize.min(t)).rev() {
                if let Some(actor) = record.plies[t - back].actor {
                    preceding.push(actor.bit_char());
                }
            }
        }

        let role = ActorRole::from_ply(ply.role, ply.actor);
        let wp_before_focal = match role.team() {
            TeamRole::Focal => wp_before,
            TeamRole::Alter => 100.0 - wp_before,
        };

        let (interaction, hypothetical_loss) = match &ply.hb {
            Some(hb) => {
                let hyp_wp = if hb.hand_sample == ply.mv {
                    wp_after
                } else {
                    if !positions[t].legal_moves().contains(&hb.hand_sample) {
                        return Err(AnalysisError::Unreplayable {
                            game_id: record.game_id,
                            ply: t,
                        });
                    }
                    let hyp_pos = positions[t].apply_move_unchecked(hb.hand_sample);
                    evaluator.winprob(&hyp_pos, mover)?.value()
                };
                (
                    Some(hb.interaction),
                    Some((wp_before - hyp_wp).clamp(0.0, 100.0)),
                )
            }
            None => (None, None),
        };

        out.push(MoveLossRecord {
            game_id: record.game_id,
            ply: t,
            role,
            wp_before,
            wp_after,
            loss,
            raw_delta,
            preceding,
            bucket: bucket_of(wp_before_focal),
            interaction,
            hypothetical_loss,
            next_opponent_loss: None,
        });
    }

    for t in 0..out.len().saturating_sub(1) {
        out[t].next_opponent_loss = Some(out[t + 1].loss);
    }
    Ok(out)
}

/// Fraction of records whose raw delta was negative (clamped to zero).
pub fn clamp_rate(records: &[MoveLossRecord]) -> f64 {
    if records.is_empty() {
        return 0.0;
    }
    records.iter().filter(|r| r.was_clamped()).count() as f64 / records.len() as f64
}

