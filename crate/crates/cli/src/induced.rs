//! Standardized-distribution counterfactual (method-2 style): measure the
//! junior loss each senior induces on the board multisets both teams
//! actually faced, eliminating distribution effects from the comparison.

use anyhow::{anyhow, Result};
use std::sync::Arc;
use tandem_core::agent::{AgentFactory, AgentSpec, Evaluate};
use tandem_core::analysis::{induced_loss_counterfactual, InducedLoss};
use tandem_core::framework::{GameRecord, TeamRole};
use tandem_core::Position;

/// Boards a team faced: positions where that team was to move.
pub fn boards_faced(records: &[GameRecord], team: TeamRole) -> Result<Vec<Position>> {
    let mut boards = Vec::new();
    for record in records {
        if record.is_aborted() {
            continue;
        }
        let positions = record
            .replay()
            .map_err(|ply| anyhow!("game {} unreplayable at ply {ply}", record.game_id))?;
        let team_color = match team {
            TeamRole::Focal => record.focal_color,
            TeamRole::Alter => record.focal_color.flip(),
        };
        for pos in &positions[..positions.len().saturating_sub(1)] {
            if pos.side_to_move() == team_color {
                boards.push(*pos);
            }
        }
    }
    Ok(boards)
}

/// Deterministic thinning to at most `cap` boards (uniform stride).
pub fn subsample(boards: &[Position], cap: usize) -> Vec<Position> {
    if boards.len() <= cap || cap == 0 {
        return boards.to_vec();
    }
    let stride = boards.len() as f64 / cap as f64;
    (0..cap)
        .map(|i| boards[(i as f64 * stride) as usize])
        .collect()
}

/// The four-cell table: each senior on each team's board distribution.
pub fn induced_table(
    records: &[GameRecord],
    focal_senior: &AgentSpec,
    alter_senior: &AgentSpec,
    junior: &AgentSpec,
    evaluator: &Arc<dyn Evaluate>,
    factory: &dyn AgentFactory,
    cap: usize,
) -> Result<Vec<(String, String, InducedLoss)>> {
    let focal_boards = subsample(&boards_faced(records, TeamRole::Focal)?, cap);
    let alter_boards = subsample(&boards_faced(records, TeamRole::Alter)?, cap);

    let mut rows = Vec::with_capacity(4);
    for (senior_label, senior_spec) in [("alter-senior", alter_senior), ("focal-senior", focal_senior)] {
        for (dist_label, boards) in [("alter-team", &alter_boards), ("focal-team", &focal_boards)] {
            let mut senior = factory.build(senior_spec)?;
            let mut weak = factory.build(junior)?;
            let row = induced_loss_counterfactual(
                boards,
                senior.as_mut(),
                weak.as_mut(),
                evaluator.as_ref(),
            )?;
            rows.push((senior_label.to_string(), dist_label.to_string(), row));
        }
    }
    Ok(rows)
}
