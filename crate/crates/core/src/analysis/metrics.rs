use super::loss::{ActorRole, AnalysisError, MoveLossRecord};
use crate::agent::{Agent, Evaluate, SamplingMode};
use crate::board::Position;
use crate::framework::InteractionType;
use alloc::string::String;
use alloc::vec::Vec;
use rand_core::SeedableRng;
use serde::{Deserialize, Serialize};

/// Sample mean with its standard error (sample stddev over sqrt(n)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricValue {
    pub mean: f64,
    pub se: f64,
    pub count: usize,
}

impl MetricValue {
    pub fn from_samples(samples: &[f64]) -> Result<MetricValue, AnalysisError> {
        if samples.is_empty() {
            return Err(AnalysisError::EmptyCell);
        }
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let se = if samples.len() < 2 {
            0.0
        } else {
            let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
            libm::sqrt(var / n)
        };
        Ok(MetricValue {
            mean,
            se,
            count: samples.len(),
        })
    }
}

/// Composable move filter; `Condition::default()` is the everything
/// filter ("*").
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Condition {
    /// Chronological senior/junior labels that must immediately precede
    /// the move, e.g. "1" (previous ply by a senior) or "10".
    pub preceding: Option<String>,
    /// Half-open [lo, hi) interval on the focal-perspective wp_before;
    /// intervals reaching 100 include it.
    pub wp_range: Option<(f64, f64)>,
    pub interaction: Option<InteractionType>,
    pub min_ply: Option<usize>,
}

impl Condition {
    pub fn preceded_by(s: &str) -> Condition {
        Condition {
            preceding: Some(String::from(s)),
            ..Condition::default()
        }
    }

    pub fn matches(&self, record: &MoveLossRecord) -> bool {
        if let Some(s) = &self.preceding {
            if record.preceding.len() < s.len() || !record.preceding.ends_with(s.as_str()) {
                return false;
            }
        }
        if let Some((lo, hi)) = self.wp_range {
            let wp = record.wp_before_focal();
            let inside = if hi >= 100.0 {
                wp >= lo && wp <= hi
            } else {
                wp >= lo && wp < hi
            };
            if !inside {
                return false;
            }
        }
        if let Some(kind) = self.interaction {
            if record.interaction != Some(kind) {
                return false;
            }
        }
        if let Some(min) = self.min_ply {
            if record.ply < min {
                return false;
            }
        }
        true
    }
}

fn losses_matching<'a>(
    records: &'a [MoveLossRecord],
    roles: &'a [ActorRole],
    condition: &'a Condition,
) -> impl Iterator<Item = &'a MoveLossRecord> {
    records
        .iter()
        .filter(move |r| roles.contains(&r.role) && condition.matches(r))
}

/// Mean loss of moves played by `role` under `condition`.
pub fn mean_loss(
    records: &[MoveLossRecord],
    role: ActorRole,
    condition: &Condition,
) -> Result<MetricValue, AnalysisError> {
    mean_loss_roles(records, &[role], condition)
}

/// Mean loss pooled over several roles (e.g. a whole team).
pub fn mean_loss_roles(
    records: &[MoveLossRecord],
    roles: &[ActorRole],
    condition: &Condition,
) -> Result<MetricValue, AnalysisError> {
    let samples: Vec<f64> = losses_matching(records, roles, condition)
        .map(|r| r.loss)
        .collect();
    MetricValue::from_samples(&samples)
}

/// L(a1, condition) - L(a2, condition), standard errors in quadrature.
pub fn delta_loss(
    records: &[MoveLossRecord],
    a1: ActorRole,
    a2: ActorRole,
    condition: &Condition,
) -> Result<MetricValue, AnalysisError> {
    let left = mean_loss(records, a1, condition)?;
    let right = mean_loss(records, a2, condition)?;
    Ok(MetricValue {
        mean: left.mean - right.mean,
        se: libm::sqrt(left.se * left.se + right.se * right.se),
        count: left.count + right.count,
    })
}

/// Loss gap induced by a senior versus its junior occupying a schedule
/// slot: L(role, "1" + s) - L(role, "0" + s), where s standardizes the
/// plies in between.
pub fn influence(
    records: &[MoveLossRecord],
    role: ActorRole,
    interposed: &str,
) -> Result<MetricValue, AnalysisError> {
    let senior_led = mean_loss(
        records,
        role,
        &Condition::preceded_by(&alloc::format!("1{interposed}")),
    )?;
    let junior_led = mean_loss(
        records,
        role,
        &Condition::preceded_by(&alloc::format!("0{interposed}")),
    )?;
    Ok(MetricValue {
        mean: senior_led.mean - junior_led.mean,
        se: libm::sqrt(senior_led.se * senior_led.se + junior_led.se * junior_led.se),
        count: senior_led.count + junior_led.count,
    })
}

/// The immediate and indirect senior-on-junior effects of one game set.
#[derive(Debug, Clone, PartialEq)]
pub struct SeniorEffects {
    /// Extra loss induced in the opposing junior one ply later.
    pub tricking: Result<MetricValue, AnalysisError>,
    /// Partner-junior loss gap two plies later, opposing junior between.
    pub helping_junior_intercedes: Result<MetricValue, AnalysisError>,
    /// Partner-junior loss gap two plies later, opposing senior between.
    pub helping_senior_intercedes: Result<MetricValue, AnalysisError>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfluencePanel {
    pub focal_senior: SeniorEffects,
    pub alter_senior: SeniorEffects,
    /// Junior loss gap on moves not preceded by any senior for 2 plies.
    pub indirect: Result<MetricValue, AnalysisError>,
}

/// Tricking/helping/indirect effects for both seniors.
pub fn influence_panel(records: &[MoveLossRecord]) -> InfluencePanel {
    let effects = |opponent_junior: ActorRole, partner_junior: ActorRole| SeniorEffects {
        tricking: influence(records, opponent_junior, ""),
        helping_junior_intercedes: influence(records, partner_junior, "0"),
        helping_senior_intercedes: influence(records, partner_junior, "1"),
    };
    InfluencePanel {
        focal_senior: effects(ActorRole::AlterJunior, ActorRole::FocalJunior),
        alter_senior: effects(ActorRole::FocalJunior, ActorRole::AlterJunior),
        indirect: delta_loss(
            records,
            ActorRole::AlterJunior,
            ActorRole::FocalJunior,
            &Condition::preceded_by("00"),
        ),
    }
}

pub fn default_bucket_edges() -> Vec<f64> {
    (0..=10).map(|i| i as f64 * 10.0).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BucketPoint {
    pub lo: f64,
    pub hi: f64,
    /// Gap when either side of the bucket is empty.
    pub value: Result<MetricValue, AnalysisError>,
}

/// Junior loss gap per board-strength bucket (focal-perspective
/// wp_before). Buckets are half-open except the last.
pub fn bucketed_delta(
    records: &[MoveLossRecord],
    edges: &[f64],
    a1: ActorRole,
    a2: ActorRole,
) -> Vec<BucketPoint> {
    let mut points = Vec::with_capacity(edges.len().saturating_sub(1));
    for window in edges.windows(2) {
        let condition = Condition {
            wp_range: Some((window[0], window[1])),
            ..Condition::default()
        };
        points.push(BucketPoint {
            lo: window[0],
            hi: window[1],
            value: delta_loss(records, a1, a2, &condition),
        });
    }
    points
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioPoint {
    pub threshold: f64,
    /// None marks an undefined point (zero denominator).
    pub ratio: Option<f64>,
    pub numerator_count: usize,
    pub denominator_count: usize,
}

/// P(loss >= t | alter junior) / P(loss >= t | focal junior) per
/// threshold: how much likelier the opposing junior is to incur a loss of
/// at least each magnitude.
pub fn exceedance_ratio(records: &[MoveLossRecord], thresholds: &[f64]) -> Vec<RatioPoint> {
    let alter: Vec<f64> = records
        .iter()
        .filter(|r| r.role == ActorRole::AlterJunior)
        .map(|r| r.loss)
        .collect();
    let focal: Vec<f64> = records
        .iter()
        .filter(|r| r.role == ActorRole::FocalJunior)
        .map(|r| r.loss)
        .collect();
    thresholds
        .iter()
        .map(|&t| {
            let num = alter.iter().filter(|&&l| l >= t).count();
            let den = focal.iter().filter(|&&l| l >= t).count();
            let ratio = if alter.is_empty() || focal.is_empty() || den == 0 {
                None
            } else {
                let p_num = num as f64 / alter.len() as f64;
                let p_den = den as f64 / focal.len() as f64;
                Some(p_num / p_den)
            };
            RatioPoint {
                threshold: t,
                ratio,
                numerator_count: num,
                denominator_count: den,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct InducedLoss {
    pub value: MetricValue,
    /// Boards skipped because the senior's move ended the game or an
    /// agent failed on them.
    pub skipped: usize,
}

/// Standardized-distribution counterfactual: on each board the senior
/// moves, the weak agent replies, and the weak reply's loss is measured.
/// Callers pass the board multiset faced by a team to fix the
/// distribution.
pub fn induced_loss_counterfactual(
    boards: &[Position],
    senior: &mut dyn Agent,
    weak: &mut dyn Agent,
    evaluator: &dyn Evaluate,
) -> Result<InducedLoss, AnalysisError> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
    let mut losses = Vec::with_capacity(boards.len());
    let mut skipped = 0usize;
    for board in boards {
        if board.positional_status().is_terminal() {
            skipped += 1;
            continue;
        }
        let senior_move = match senior.select_with(board, SamplingMode::Argmax, &mut rng) {
            Ok(m) => m,
            Err(_) => {
                skipped += 1;
                continue;
            }
        };
        let after_senior = board.apply_move_unchecked(senior_move);
        if after_senior.positional_status().is_terminal() {
            skipped += 1;
            continue;
        }
        let weak_side = after_senior.side_to_move();
        let reply = match weak.select_with(&after_senior, SamplingMode::Argmax, &mut rng) {
            Ok(m) => m,
            Err(_) => {
                skipped += 1;
                continue;
            }
        };
        let after_reply = after_senior.apply_move_unchecked(reply);
        let before = evaluator.winprob(&after_senior, weak_side)?.value();
        let after = evaluator.winprob(&after_reply, weak_side)?.value();
        losses.push((before - after).clamp(0.0, 100.0));
    }
    Ok(InducedLoss {
        value: MetricValue::from_samples(&losses)?,
        skipped,
    })
}

pub(crate) fn bucket_label(lo: f64, hi: f64) -> String {
    alloc::format!("[{lo:.0},{hi:.0}{}", if hi >= 100.0 { "]" } else { ")" })
}
