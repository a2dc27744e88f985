use super::search::SearchEngine;
use super::spec::{AgentSpec, EvaluatorSpec};
use super::AgentError;
use crate::board::{Color, GameStatus, Position};
use alloc::format;

/// Win probability in [0, 100] from a stated side's perspective.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct WinProb(pub f64);

impl WinProb {
    pub fn new(value: f64) -> WinProb {
        debug_assert!((0.0..=100.0).contains(&value), "win prob {value} out of range");
        WinProb(value.clamp(0.0, 100.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Same position seen from the other side.
    pub fn flip(self) -> WinProb {
        WinProb(100.0 - self.0)
    }
}

/// Logistic centipawn-to-win-probability map: 100 / (1 + e^(-lambda * cp)).
pub fn cp_to_winprob(cp: f64, lambda: f64) -> f64 {
    100.0 / (1.0 + libm::exp(-lambda * cp))
}

/// Win probability of a terminal position from the side to move.
pub fn terminal_winprob(status: GameStatus) -> Option<f64> {
    match status {
        GameStatus::Ongoing => None,
        GameStatus::Checkmate => Some(0.0),
        _ => Some(50.0),
    }
}

/// Board evaluation service used for all loss accounting. Implementations
/// must be deterministic for a fixed spec; repeated calls return
/// bit-identical values.
pub trait Evaluate: Send + Sync {
    fn winprob(&self, pos: &Position, perspective: Color) -> Result<WinProb, AgentError>;

    fn spec(&self) -> &EvaluatorSpec;
}

/// Uncached evaluator over a built-in engine. The companion crate wraps
/// this with a concurrent transposition cache for real runs.
pub struct PlainEvaluator {
    spec: EvaluatorSpec,
    nodes: u64,
}

impl PlainEvaluator {
    pub fn new(spec: EvaluatorSpec) -> Result<PlainEvaluator, AgentError> {
        let nodes = match spec.engine.as_ref() {
            AgentSpec::BuiltinStrong { .. } | AgentSpec::BuiltinWeak { .. } => spec.nodes,
            other => {
                return Err(AgentError::Unsupported(kind_name(other)));
            }
        };
        Ok(PlainEvaluator { spec, nodes })
    }

    /// Centipawn score from the side to move; `None` for terminal positions.
    pub fn centipawns(&self, pos: &Position) -> Option<i32> {
        if pos.positional_status().is_terminal() {
            return None;
        }
        let budget = match self.spec.engine.as_ref() {
            AgentSpec::BuiltinWeak { .. } => 1,
            _ => self.nodes,
        };
        let rs = SearchEngine::sized_for(budget)
            .root_scores(pos, budget)
            .expect("non-terminal position has moves");
        Some(rs.best().1)
    }
}

impl Evaluate for PlainEvaluator {
    fn winprob(&self, pos: &Position, perspective: Color) -> Result<WinProb, AgentError> {
        let stm = pos.side_to_move();
        let wp_stm = match terminal_winprob(pos.positional_status()) {
            Some(wp) => wp,
            None => {
                let cp = self.centipawns(pos).ok_or_else(|| {
                    AgentError::Engine(format!("no score for {}", pos.to_fen()))
                })? as f64;
                cp_to_winprob(cp, self.spec.lambda)
            }
        };
        Ok(if perspective == stm {
            WinProb::new(wp_stm)
        } else {
            WinProb::new(wp_stm).flip()
        })
    }

    fn spec(&self) -> &EvaluatorSpec {
        &self.spec
    }
}

fn kind_name(spec: &AgentSpec) -> &'static str {
    match spec {
        AgentSpec::BuiltinStrong { .. } => "builtin-strong",
        AgentSpec::BuiltinWeak { .. } => "builtin-weak",
        AgentSpec::Uci { .. } => "uci",
        AgentSpec::Tree { .. } => "tree",
        AgentSpec::ExpectorStt { .. } => "expector-stt",
        AgentSpec::ExpectorHb { .. } => "expector-hb",
    }
}
