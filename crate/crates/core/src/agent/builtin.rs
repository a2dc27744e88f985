use super::distribution::MoveDistribution;
use super::search::{RootScores, SearchEngine};
use super::spec::{DEFAULT_LAMBDA, DEFAULT_STRONG_NODES, DEFAULT_STRONG_TEMPERATURE, DEFAULT_WEAK_TEMPERATURE};
use super::winprob::{cp_to_winprob, terminal_winprob, WinProb};
use super::{Agent, AgentError, SamplingMode};
use crate::board::Position;
use alloc::vec::Vec;

/// Heuristic stand-in engine.
///
/// The strong profile runs fixed-node alpha-beta and concentrates its
/// policy mass on the best line; the weak profile softmaxes one-ply
/// quiescence scores at a high temperature, which plays plausibly but
/// blunders often. Both derive policy, value, and move choice from the
/// same per-move score vector.
pub struct BuiltinEngine {
    engine: SearchEngine,
    nodes: u64,
    temperature: f64,
    sampling: Option<SamplingMode>,
}

/// Marker constructors so call sites read like the agent taxonomy.
pub struct BuiltinStrong;
pub struct BuiltinWeak;

impl BuiltinStrong {
    pub fn with(nodes: u64, temperature: f64) -> BuiltinEngine {
        BuiltinEngine::new(nodes, temperature, None)
    }
}

impl BuiltinWeak {
    pub fn with(temperature: f64) -> BuiltinEngine {
        // One-ply-plus-quiescence: the depth-1 iteration always completes,
        // so a budget of 1 stops the search right after it.
        BuiltinEngine::new(1, temperature, None)
    }
}

impl BuiltinEngine {
    pub fn new(nodes: u64, temperature: f64, sampling: Option<SamplingMode>) -> BuiltinEngine {
        assert!(nodes >= 1, "node budget must be at least 1");
        assert!(
            temperature.is_finite() && temperature > 0.0,
            "softmax temperature must be positive"
        );
        BuiltinEngine {
            engine: SearchEngine::sized_for(nodes),
            nodes,
            temperature,
            sampling,
        }
    }

    pub fn strong_default() -> BuiltinEngine {
        BuiltinStrong::with(DEFAULT_STRONG_NODES, DEFAULT_STRONG_TEMPERATURE)
    }

    pub fn weak_default() -> BuiltinEngine {
        BuiltinWeak::with(DEFAULT_WEAK_TEMPERATURE)
    }

    pub fn set_sampling(&mut self, sampling: Option<SamplingMode>) {
        self.sampling = sampling;
    }

    pub fn scores(&mut self, pos: &Position) -> Result<RootScores, AgentError> {
        self.engine
            .root_scores(pos, self.nodes)
            .ok_or(AgentError::TerminalPosition)
    }
}

/// Softmax over centipawn scores at temperature `tau` (centipawns).
pub(crate) fn softmax_scores(scores: &[(crate::board::Move, i32)], tau: f64) -> MoveDistribution {
    let max = scores.iter().map(|(_, s)| *s).max().unwrap_or(0) as f64;
    let weights: Vec<_> = scores
        .iter()
        .map(|&(m, s)| (m, libm::exp((s as f64 - max) / tau)))
        .collect();
    MoveDistribution::from_weights(weights)
}

impl Agent for BuiltinEngine {
    fn policy(&mut self, pos: &Position) -> Result<MoveDistribution, AgentError> {
        let rs = self.scores(pos)?;
        Ok(softmax_scores(&rs.scores, self.temperature))
    }

    fn value(&mut self, pos: &Position) -> Result<WinProb, AgentError> {
        if let Some(wp) = terminal_winprob(pos.positional_status()) {
            return Ok(WinProb::new(wp));
        }
        let rs = self.scores(pos)?;
        Ok(WinProb::new(cp_to_winprob(rs.best().1 as f64, DEFAULT_LAMBDA)))
    }

    fn sampling_override(&self) -> Option<SamplingMode> {
        self.sampling
    }
}

/// Fraction of corpus positions on which both agents' argmax moves agree.
pub fn agreement_rate(
    a: &mut dyn Agent,
    b: &mut dyn Agent,
    corpus: &[Position],
) -> Result<f64, AgentError> {
    if corpus.is_empty() {
        return Err(AgentError::Engine(alloc::string::String::from(
            "empty corpus",
        )));
    }
    let mut agree = 0usize;
    for pos in corpus {
        let ma = a.policy(pos)?.argmax().ok_or(AgentError::TerminalPosition)?;
        let mb = b.policy(pos)?.argmax().ok_or(AgentError::TerminalPosition)?;
        if ma == mb {
            agree += 1;
        }
    }
    Ok(agree as f64 / corpus.len() as f64)
}
