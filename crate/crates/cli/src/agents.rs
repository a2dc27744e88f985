//! Agent factory with UCI support and a per-run evaluator registry, so
//! identical evaluator specs share one cache across workers.

use crate::evaluator::{CachedEvaluator, UciEvaluator};
use crate::uci::UciEngine;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use tandem_core::agent::{
    build_with, Agent, AgentFactory, AgentSpec, Evaluate, EvaluatorSpec, PlainEvaluator,
    SpecError,
};

#[derive(Default)]
pub struct CliFactory {
    evaluators: Mutex<HashMap<String, Arc<dyn Evaluate>>>,
}

impl CliFactory {
    pub fn new() -> CliFactory {
        CliFactory::default()
    }
}

fn spec_key(spec: &EvaluatorSpec) -> String {
    serde_json::to_string(spec).expect("evaluator spec serializes")
}

impl AgentFactory for CliFactory {
    fn build(&self, spec: &AgentSpec) -> Result<Box<dyn Agent + Send>, SpecError> {
        match spec {
            AgentSpec::Uci {
                params,
                nodes,
                temperature,
                sampling,
                ..
            } => {
                spec.validate()?;
                let engine = UciEngine::connect(params, *nodes, *temperature, *sampling)
                    .map_err(|e| SpecError::Invalid(format!("uci connect: {e:#}")))?;
                Ok(Box::new(engine))
            }
            other => build_with(self, other),
        }
    }

    fn build_evaluator(&self, spec: &EvaluatorSpec) -> Result<Arc<dyn Evaluate>, SpecError> {
        spec.validate()?;
        let key = spec_key(spec);
        let mut registry = self
            .evaluators
            .lock()
            .map_err(|_| SpecError::Invalid("evaluator registry poisoned".into()))?;
        if let Some(shared) = registry.get(&key) {
            return Ok(Arc::clone(shared));
        }
        let built: Arc<dyn Evaluate> = match spec.engine.as_ref() {
            AgentSpec::Uci {
                params,
                temperature,
                ..
            } => {
                let engine = UciEngine::connect(params, spec.nodes, *temperature, None)
                    .map_err(|e| SpecError::Invalid(format!("uci evaluator connect: {e:#}")))?;
                Arc::new(CachedEvaluator::new(UciEvaluator::new(engine, spec.clone())))
            }
            _ => {
                let plain = PlainEvaluator::new(spec.clone())
                    .map_err(|e| SpecError::Invalid(format!("evaluator: {e}")))?;
                Arc::new(CachedEvaluator::new(plain))
            }
        };
        registry.insert(key, Arc::clone(&built));
        Ok(built)
    }
}
