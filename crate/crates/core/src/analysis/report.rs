use super::hb::{hb_interaction_table, hb_savings};
use super::loss::{clamp_rate, ActorRole, AnalysisError, MoveLossRecord};
use super::metrics::{
    bucket_label, bucketed_delta, delta_loss, exceedance_ratio, influence_panel, mean_loss,
    mean_loss_roles, Condition, InducedLoss, MetricValue, SeniorEffects,
};
use crate::framework::{InteractionType, MatchResult, TeamRole};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

pub struct ReportInputs<'a> {
    pub title: &'a str,
    pub framework: crate::framework::Framework,
    pub config_hash: Option<&'a str>,
    pub pool_id: Option<&'a str>,
    pub match_result: Option<&'a MatchResult>,
    pub losses: &'a [MoveLossRecord],
    /// Games adjudicated at the ply cap, flagged separately.
    pub maxply_games: u64,
    /// Precomputed counterfactual induced-loss rows: (senior label,
    /// board-distribution label, result).
    pub induced: &'a [(String, String, InducedLoss)],
    pub bucket_edges: &'a [f64],
    pub thresholds: &'a [f64],
}

/// A deterministic plain-text report plus named CSV/curve files.
pub struct RenderedReport {
    pub text: String,
    /// (file name, contents) pairs; callers decide where they land.
    pub files: Vec<(String, String)>,
}

fn cell(value: &Result<MetricValue, AnalysisError>) -> String {
    match value {
        Ok(v) => format!("{:.4} +/- {:.4} (n={})", v.mean, v.se, v.count),
        Err(AnalysisError::EmptyCell) => String::from("n/a (0 moves)"),
        Err(e) => format!("error: {e}"),
    }
}

fn opt_cell(value: &Option<MetricValue>) -> String {
    match value {
        Some(v) => format!("{:.4} +/- {:.4} (n={})", v.mean, v.se, v.count),
        None => String::from("n/a (0 moves)"),
    }
}

pub fn render_report(inputs: &ReportInputs<'_>) -> RenderedReport {
    let mut text = String::with_capacity(4096);
    let mut files: Vec<(String, String)> = Vec::new();
    let losses = inputs.losses;

    let _ = writeln!(text, "==== {} ====", inputs.title);
    let _ = writeln!(text, "framework: {}", inputs.framework);
    if let Some(hash) = inputs.config_hash {
        let _ = writeln!(text, "config-hash: {hash}");
    }
    if let Some(pool) = inputs.pool_id {
        let _ = writeln!(text, "bitstring-pool: {pool}");
    }

    if let Some(result) = inputs.match_result {
        let _ = writeln!(text, "\n-- match result (focal perspective) --");
        let _ = writeln!(text, "{}", result.summary_line());
    }

    let _ = writeln!(text, "\n-- data quality --");
    let _ = writeln!(text, "annotated moves: {}", losses.len());
    let _ = writeln!(
        text,
        "clamped-loss rate: {:.4} (negative raw deltas clamped to 0)",
        clamp_rate(losses)
    );
    let _ = writeln!(
        text,
        "games adjudicated at the ply cap: {}",
        inputs.maxply_games
    );
    if let Some(result) = inputs.match_result {
        let _ = writeln!(text, "aborted games (excluded from scores): {}", result.aborted);
    }

    // Sections follow the data: a mixed record set renders every
    // applicable section, an STT-only set gets no hand-brain tables.
    let has_tag_team = losses.iter().any(|r| {
        matches!(
            r.role,
            ActorRole::FocalSenior
                | ActorRole::FocalJunior
                | ActorRole::AlterSenior
                | ActorRole::AlterJunior
        )
    });
    let has_hand_brain = losses.iter().any(|r| r.interaction.is_some());
    let has_plain = losses
        .iter()
        .any(|r| matches!(r.role, ActorRole::FocalTeam | ActorRole::AlterTeam) && r.interaction.is_none());
    if has_tag_team {
        render_tag_team(&mut text, &mut files, inputs);
    }
    if has_hand_brain {
        render_hand_brain(&mut text, losses);
    }
    if has_plain {
        render_plain(&mut text, losses);
    }

    if !inputs.induced.is_empty() {
        let _ = writeln!(text, "\n-- induced junior loss on standardized boards --");
        let mut csv = String::from("senior,distribution,mean,se,count,skipped\n");
        for (senior, distribution, row) in inputs.induced {
            let _ = writeln!(
                text,
                "{senior} on {distribution} boards: {:.4} +/- {:.4} (n={}, skipped {})",
                row.value.mean, row.value.se, row.value.count, row.skipped
            );
            let _ = writeln!(
                csv,
                "{senior},{distribution},{:.6},{:.6},{},{}",
                row.value.mean, row.value.se, row.value.count, row.skipped
            );
        }
        files.push((String::from("induced_loss.csv"), csv));
    }

    RenderedReport { text, files }
}

fn render_tag_team(text: &mut String, files: &mut Vec<(String, String)>, inputs: &ReportInputs<'_>) {
    let losses = inputs.losses;
    let star = Condition::default();

    let _ = writeln!(text, "\n-- mean loss per agent (all moves) --");
    let mut csv = String::from("role,mean,se,count\n");
    for role in [
        ActorRole::AlterSenior,
        ActorRole::FocalSenior,
        ActorRole::AlterJunior,
        ActorRole::FocalJunior,
    ] {
        let value = mean_loss(losses, role, &star);
        let _ = writeln!(text, "{}: {}", role_name(role), cell(&value));
        if let Ok(v) = value {
            let _ = writeln!(csv, "{},{:.6},{:.6},{}", role_name(role), v.mean, v.se, v.count);
        } else {
            let _ = writeln!(csv, "{},,,0", role_name(role));
        }
    }
    files.push((String::from("losses_by_role.csv"), csv));

    let _ = writeln!(text, "\n-- loss gaps --");
    let senior_gap = delta_loss(losses, ActorRole::AlterSenior, ActorRole::FocalSenior, &star);
    let junior_gap = delta_loss(losses, ActorRole::AlterJunior, ActorRole::FocalJunior, &star);
    let _ = writeln!(text, "delta(alter-senior, focal-senior, *): {}", cell(&senior_gap));
    let _ = writeln!(text, "delta(alter-junior, focal-junior, *): {}", cell(&junior_gap));
    let team = |records, a: &[ActorRole], b: &[ActorRole]| -> Result<MetricValue, AnalysisError> {
        let left = mean_loss_roles(records, a, &star)?;
        let right = mean_loss_roles(records, b, &star)?;
        Ok(MetricValue {
            mean: left.mean - right.mean,
            se: libm::sqrt(left.se * left.se + right.se * right.se),
            count: left.count + right.count,
        })
    };
    let team_gap = team(
        losses,
        &[ActorRole::AlterSenior, ActorRole::AlterJunior],
        &[ActorRole::FocalSenior, ActorRole::FocalJunior],
    );
    let _ = writeln!(text, "delta(alter-team, focal-team, *): {}", cell(&team_gap));

    let _ = writeln!(text, "\n-- influence of each senior on the juniors --");
    let panel = influence_panel(losses);
    let senior_block = |text: &mut String, label: &str, effects: &SeniorEffects| {
        let _ = writeln!(text, "{label}:");
        let _ = writeln!(text, "  tricking (opposing junior, next ply): {}", cell(&effects.tricking));
        let _ = writeln!(
            text,
            "  helping, junior intercedes: {}",
            cell(&effects.helping_junior_intercedes)
        );
        let _ = writeln!(
            text,
            "  helping, senior intercedes: {}",
            cell(&effects.helping_senior_intercedes)
        );
    };
    senior_block(text, "focal senior", &panel.focal_senior);
    senior_block(text, "alter senior", &panel.alter_senior);
    let _ = writeln!(
        text,
        "indirect (junior gap, no senior within 2 plies): {}",
        cell(&panel.indirect)
    );

    // Junior gap by board strength (focal-perspective win probability).
    let buckets = bucketed_delta(losses, inputs.bucket_edges, ActorRole::AlterJunior, ActorRole::FocalJunior);
    let mut curve = String::from("# lo hi delta se count\n");
    let mut csv = String::from("lo,hi,delta,se,count\n");
    for point in &buckets {
        match &point.value {
            Ok(v) => {
                let _ = writeln!(curve, "{} {} {:.6} {:.6} {}", point.lo, point.hi, v.mean, v.se, v.count);
                let _ = writeln!(csv, "{},{},{:.6},{:.6},{}", point.lo, point.hi, v.mean, v.se, v.count);
            }
            Err(_) => {
                let _ = writeln!(curve, "# {} gap (empty bucket)", bucket_label(point.lo, point.hi));
                let _ = writeln!(csv, "{},{},,,0", point.lo, point.hi);
            }
        }
    }
    files.push((String::from("junior_gap_by_strength.dat"), curve));
    files.push((String::from("junior_gap_by_strength.csv"), csv));

    // Exceedance-probability ratio of the junior loss tails. The exact
    // ratio definition is our interpretation: P(loss >= t) for the alter
    // junior over the focal junior.
    let ratios = exceedance_ratio(losses, inputs.thresholds);
    let mut curve = String::from("# threshold ratio alter_count focal_count\n");
    let mut csv = String::from("threshold,ratio,alter_count,focal_count\n");
    for point in &ratios {
        match point.ratio {
            Some(r) => {
                let _ = writeln!(
                    curve,
                    "{} {:.6} {} {}",
                    point.threshold, r, point.numerator_count, point.denominator_count
                );
                let _ = writeln!(
                    csv,
                    "{},{:.6},{},{}",
                    point.threshold, r, point.numerator_count, point.denominator_count
                );
            }
            None => {
                let _ = writeln!(curve, "# {} gap (zero denominator)", point.threshold);
                let _ = writeln!(csv, "{},,{},{}", point.threshold, point.numerator_count, point.denominator_count);
            }
        }
    }
    files.push((String::from("loss_exceedance_ratio.dat"), curve));
    files.push((String::from("loss_exceedance_ratio.csv"), csv));
}

fn render_hand_brain(text: &mut String, losses: &[MoveLossRecord]) {
    let _ = writeln!(text, "\n-- team loss vs hypothetical unconstrained hand --");
    for team in [TeamRole::Alter, TeamRole::Focal] {
        match hb_savings(losses, team) {
            Ok(s) => {
                let _ = writeln!(text, "{} team:", team_name(team));
                let _ = writeln!(text, "  true loss:         {}", opt_cell(&Some(s.true_loss)));
                let _ = writeln!(
                    text,
                    "  hypothetical loss: {}",
                    opt_cell(&Some(s.hypothetical_loss))
                );
                let _ = writeln!(text, "  savings:           {}", opt_cell(&Some(s.savings)));
            }
            Err(e) => {
                let _ = writeln!(text, "{} team: {}", team_name(team), cell(&Err(e)));
            }
        }
    }

    let _ = writeln!(text, "\n-- interaction taxonomy --");
    match hb_interaction_table(losses) {
        Ok(table) => {
            for team in [TeamRole::Alter, TeamRole::Focal] {
                let _ = writeln!(text, "{} team:", team_name(team));
                for interaction in InteractionType::ALL {
                    let c = table.cell(team, interaction);
                    let _ = writeln!(
                        text,
                        "  {:<12} share {:>6.2}% (n={:>4})  savings {}  opponent-next-loss {}",
                        interaction_name(interaction),
                        c.share,
                        c.count,
                        opt_cell(&c.savings),
                        opt_cell(&c.opponent_next_loss)
                    );
                }
            }
        }
        Err(e) => {
            let _ = writeln!(text, "{}", cell(&Err(e)));
        }
    }
}

fn render_plain(text: &mut String, losses: &[MoveLossRecord]) {
    let star = Condition::default();
    let _ = writeln!(text, "\n-- mean loss per side --");
    for role in [ActorRole::AlterTeam, ActorRole::FocalTeam] {
        let value = mean_loss(losses, role, &star);
        let _ = writeln!(text, "{}: {}", role_name(role), cell(&value));
    }
}

fn role_name(role: ActorRole) -> &'static str {
    match role {
        ActorRole::FocalSenior => "focal-senior",
        ActorRole::FocalJunior => "focal-junior",
        ActorRole::AlterSenior => "alter-senior",
        ActorRole::AlterJunior => "alter-junior",
        ActorRole::FocalTeam => "focal",
        ActorRole::AlterTeam => "alter",
    }
}

fn team_name(team: TeamRole) -> &'static str {
    match team {
        TeamRole::Focal => "focal",
        TeamRole::Alter => "alter",
    }
}

fn interaction_name(interaction: InteractionType) -> &'static str {
    match interaction {
        InteractionType::Agreement => "agreement",
        InteractionType::Blindsiding => "blindsiding",
        InteractionType::Correction => "correction",
        InteractionType::Disagreement => "disagreement",
    }
}
