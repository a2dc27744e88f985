//! Move-level measurement pipeline: win-probability loss annotation,
//! conditional means and influence metrics, hand-and-brain savings and
//! taxonomy, counterfactual induced loss, curves, and report rendering.

mod hb;
mod loss;
mod metrics;
mod report;

pub use hb::{hb_interaction_table, hb_savings, HbSavings, InteractionCell, InteractionTable};
pub use loss::{annotate_losses, clamp_rate, ActorRole, AnalysisError, MoveLossRecord, LOSS_SCHEMA_VERSION};
pub use metrics::{
    bucketed_delta, default_bucket_edges, delta_loss, exceedance_ratio, induced_loss_counterfactual,
    influence, influence_panel, mean_loss, mean_loss_roles, BucketPoint, Condition, InducedLoss,
    InfluencePanel, MetricValue, RatioPoint, SeniorEffects,
};
pub use report::{render_report, RenderedReport, ReportInputs};
