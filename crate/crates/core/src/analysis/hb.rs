use super::loss::{AnalysisError, MoveLossRecord};
use super::metrics::MetricValue;
use crate::framework::{InteractionType, TeamRole};
use alloc::vec::Vec;

/// Team loss versus the hypothetical unconstrained-hand loss.
#[derive(Debug, Clone, PartialEq)]
pub struct HbSavings {
    pub team: TeamRole,
    /// Mean loss of the moves actually played.
    pub true_loss: MetricValue,
    /// Mean loss the hand's own samples would have incurred.
    pub hypothetical_loss: MetricValue,
    /// Mean of the paired differences (hypothetical - actual); equals the
    /// difference of the two means because both run over the same moves.
    pub savings: MetricValue,
}

fn team_records<'a>(
    records: &'a [MoveLossRecord],
    team: TeamRole,
) -> impl Iterator<Item = &'a MoveLossRecord> {
    records
        .iter()
        .filter(move |r| r.interaction.is_some() && r.role.team() == team)
}

/// Intra-team effect of the brain on its hand, one team at a time.
pub fn hb_savings(records: &[MoveLossRecord], team: TeamRole) -> Result<HbSavings, AnalysisError> {
    let rows: Vec<&MoveLossRecord> = team_records(records, team).collect();
    if rows.is_empty() {
        return Err(AnalysisError::EmptyCell);
    }
    if rows.iter().any(|r| r.hypothetical_loss.is_none()) {
        return Err(AnalysisError::MissingHbAnnotations);
    }
    let actual: Vec<f64> = rows.iter().map(|r| r.loss).collect();
    let hypothetical: Vec<f64> = rows.iter().map(|r| r.hypothetical_loss.unwrap()).collect();
    let paired: Vec<f64> = rows.iter().map(|r| r.savings().unwrap()).collect();
    Ok(HbSavings {
        team,
        true_loss: MetricValue::from_samples(&actual)?,
        hypothetical_loss: MetricValue::from_samples(&hypothetical)?,
        savings: MetricValue::from_samples(&paired)?,
    })
}

/// One (team, interaction) cell of the taxonomy table.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionCell {
    pub team: TeamRole,
    pub interaction: InteractionType,
    /// Percentage of the team's moves with this interaction.
    pub share: f64,
    pub count: usize,
    /// None when the cell is empty.
    pub savings: Option<MetricValue>,
    /// Mean loss of the opponent's next move after this interaction.
    pub opponent_next_loss: Option<MetricValue>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InteractionTable {
    pub cells: Vec<InteractionCell>,
}

impl InteractionTable {
    pub fn cell(&self, team: TeamRole, interaction: InteractionType) -> &InteractionCell {
        self.cells
            .iter()
            .find(|c| c.team == team && c.interaction == interaction)
            .expect("table has all eight cells")
    }

    /// Shares of one team, in interaction order; sums to 100 when the
    /// team played any move.
    pub fn shares(&self, team: TeamRole) -> Vec<f64> {
        self.cells
            .iter()
            .filter(|c| c.team == team)
            .map(|c| c.share)
            .collect()
    }
}

/// Frequency, savings, and opponent-reply loss per interaction type.
pub fn hb_interaction_table(records: &[MoveLossRecord]) -> Result<InteractionTable, AnalysisError> {
    if !records.iter().any(|r| r.interaction.is_some()) {
        return Err(AnalysisError::MissingHbAnnotations);
    }
    let mut cells = Vec::with_capacity(8);
    for team in [TeamRole::Focal, TeamRole::Alter] {
        let team_rows: Vec<&MoveLossRecord> = team_records(records, team).collect();
        let total = team_rows.len();
        for interaction in InteractionType::ALL {
            let rows: Vec<&&MoveLossRecord> = team_rows
                .iter()
                .filter(|r| r.interaction == Some(interaction))
                .collect();
            let savings_samples: Vec<f64> = rows.iter().filter_map(|r| r.savings()).collect();
            let reply_samples: Vec<f64> =
                rows.iter().filter_map(|r| r.next_opponent_loss).collect();
            cells.push(InteractionCell {
                team,
                interaction,
                share: if total == 0 {
                    0.0
                } else {
                    rows.len() as f64 * 100.0 / total as f64
                },
                count: rows.len(),
                savings: MetricValue::from_samples(&savings_samples).ok(),
                opponent_next_loss: MetricValue::from_samples(&reply_samples).ok(),
            });
        }
    }
    Ok(InteractionTable { cells })
}
