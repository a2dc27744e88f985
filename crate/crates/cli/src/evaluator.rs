//! Shared concurrent win-probability cache.
//!
//! Values are stored from white's perspective keyed by position hash, so
//! both perspectives hit the same entry and their sum is exactly 100.
//! The wrapped evaluator is deterministic, which makes cache contents
//! independent of thread scheduling.

use dashmap::DashMap;
use std::sync::Mutex;
use tandem_core::agent::{AgentError, Evaluate, EvaluatorSpec, WinProb};
use tandem_core::{Color, Position};

pub struct CachedEvaluator<I: Evaluate> {
    inner: I,
    cache: DashMap<u64, f64>,
    capacity: usize,
}

impl<I: Evaluate> CachedEvaluator<I> {
    pub fn new(inner: I) -> CachedEvaluator<I> {
        let capacity = inner.spec().cache_capacity.max(1);
        CachedEvaluator {
            inner,
            cache: DashMap::new(),
            capacity,
        }
    }

    pub fn cached_positions(&self) -> usize {
        self.cache.len()
    }
}

impl<I: Evaluate> Evaluate for CachedEvaluator<I> {
    fn winprob(&self, pos: &Position, perspective: Color) -> Result<WinProb, AgentError> {
        let white = match self.cache.get(&pos.hash()) {
            Some(hit) => *hit,
            None => {
                let computed = self.inner.winprob(pos, Color::White)?.value();
                if self.cache.len() < self.capacity {
                    self.cache.insert(pos.hash(), computed);
                }
                computed
            }
        };
        Ok(match perspective {
            Color::White => WinProb::new(white),
            Color::Black => WinProb::new(white).flip(),
        })
    }

    fn spec(&self) -> &EvaluatorSpec {
        self.inner.spec()
    }
}

/// Evaluator over an external UCI engine. The engine process is shared
/// behind a mutex; combined with the cache this keeps one engine serving
/// many workers.
pub struct UciEvaluator {
    engine: Mutex<crate::uci::UciEngine>,
    spec: EvaluatorSpec,
    lambda: f64,
}

impl UciEvaluator {
    pub fn new(engine: crate::uci::UciEngine, spec: EvaluatorSpec) -> UciEvaluator {
        let lambda = spec.lambda;
        UciEvaluator {
            engine: Mutex::new(engine),
            spec,
            lambda,
        }
    }
}

impl Evaluate for UciEvaluator {
    fn winprob(&self, pos: &Position, perspective: Color) -> Result<WinProb, AgentError> {
        if let Some(wp) = tandem_core::agent::terminal_winprob(pos.positional_status()) {
            let stm = pos.side_to_move();
            let value = WinProb::new(wp);
            return Ok(if perspective == stm { value } else { value.flip() });
        }
        let mut engine = self
            .engine
            .lock()
            .map_err(|_| AgentError::Engine("uci evaluator mutex poisoned".into()))?;
        let cp = engine
            .best_score(pos, self.spec.nodes)
            .map_err(|e| AgentError::Engine(e.to_string()))?;
        let wp_stm = tandem_core::agent::cp_to_winprob(cp as f64, self.lambda);
        let stm = pos.side_to_move();
        let value = WinProb::new(wp_stm);
        Ok(if perspective == stm { value } else { value.flip() })
    }

    fn spec(&self) -> &EvaluatorSpec {
        &self.spec
    }
}
