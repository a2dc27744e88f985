//! Declarative agent descriptions: what the experiment config file holds
//! and what factories turn into live agents.

use super::winprob::{Evaluate, PlainEvaluator};
use super::{Agent, SamplingMode};
use crate::focal::{Expector, TreeAgent};
use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_STRONG_NODES: u64 = 50_000;
pub const DEFAULT_STRONG_TEMPERATURE: f64 = 15.0;
pub const DEFAULT_WEAK_TEMPERATURE: f64 = 100.0;
pub const DEFAULT_LAMBDA: f64 = 0.004;
pub const DEFAULT_TREE_NODES: u64 = 1500;
pub const DEFAULT_CPUCT: f64 = 1.25;
pub const DEFAULT_STT_CANDIDATES: usize = 5;
pub const DEFAULT_HB_CANDIDATES: usize = 3;
pub const DEFAULT_STT_EVAL_NODES: u64 = 300;
pub const DEFAULT_HB_EVAL_NODES: u64 = 50;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("invalid agent spec: {0}")]
    Invalid(String),
    #[error("agent kind {0} is not available in this context")]
    Unsupported(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AgentKind {
    BuiltinStrong,
    BuiltinWeak,
    Uci,
    Tree,
    ExpectorStt,
    ExpectorHb,
}

/// External UCI engine parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UciParams {
    pub path: String,
    #[serde(default)]
    pub options: BTreeMap<String, String>,
    /// Width of the multipv window used to approximate a policy.
    #[serde(default = "default_multipv")]
    pub multipv: u32,
}

fn default_multipv() -> u32 {
    8
}

/// Search-tree agent parameters (policy-guided MCTS over a weak model).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    pub model: Box<AgentSpec>,
    #[serde(default = "default_tree_nodes")]
    pub nodes: u64,
    #[serde(default = "default_cpuct")]
    pub c_puct: f64,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Optional depth cap; plies beyond it are valued by the model.
    #[serde(default)]
    pub max_depth: Option<u16>,
}

fn default_tree_nodes() -> u64 {
    DEFAULT_TREE_NODES
}

fn default_cpuct() -> f64 {
    DEFAULT_CPUCT
}

/// Which schedule set the tag-team expector averages over, or hand-and-
/// brain piece selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpectorMode {
    /// Opponent and own ply both uncertain: schedules {00, 01, 10, 11}.
    Full,
    /// One ply ahead only: schedules {0, 1}.
    Tricking,
    /// Opponent assumed strong, own ply uncertain: schedules {10, 11}.
    Helping,
    /// Hand-and-brain piece selection.
    Hb,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectorParams {
    pub mode: ExpectorMode,
    /// Top-k candidate moves (tag team) or top-j hand moves per piece (HB).
    pub candidates: usize,
    pub evaluator: EvaluatorSpec,
    #[serde(default)]
    pub base_strong: Option<Box<AgentSpec>>,
    #[serde(default)]
    pub opponent_senior: Option<Box<AgentSpec>>,
    #[serde(default)]
    pub opponent_junior: Option<Box<AgentSpec>>,
    #[serde(default)]
    pub partner_junior: Option<Box<AgentSpec>>,
    #[serde(default)]
    pub own_hand: Option<Box<AgentSpec>>,
}

/// Strong-engine win-probability evaluator description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluatorSpec {
    pub engine: Box<AgentSpec>,
    pub nodes: u64,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    #[serde(default = "default_cache_capacity")]
    pub cache_capacity: usize,
}

fn default_lambda() -> f64 {
    DEFAULT_LAMBDA
}

fn default_cache_capacity() -> usize {
    1 << 20
}

impl EvaluatorSpec {
    pub fn builtin(nodes: u64) -> EvaluatorSpec {
        EvaluatorSpec {
            engine: Box::new(AgentSpec::strong(nodes)),
            nodes,
            lambda: DEFAULT_LAMBDA,
            cache_capacity: 1 << 20,
        }
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        if self.nodes < 1 {
            return Err(SpecError::Invalid(String::from(
                "evaluator node budget must be >= 1",
            )));
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(SpecError::Invalid(String::from("lambda must be > 0")));
        }
        match self.engine.as_ref() {
            AgentSpec::BuiltinStrong { .. } | AgentSpec::BuiltinWeak { .. } | AgentSpec::Uci { .. } => {}
            _ => {
                return Err(SpecError::Invalid(String::from(
                    "evaluator engine must expose centipawn scores (builtin or uci)",
                )))
            }
        }
        self.engine.validate()
    }
}

/// Everything needed to instantiate one agent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AgentSpec {
    BuiltinStrong {
        #[serde(default = "default_strong_nodes")]
        nodes: u64,
        #[serde(default = "default_strong_temperature")]
        temperature: f64,
        #[serde(default)]
        sampling: Option<SamplingMode>,
        #[serde(default)]
        seed: Option<u64>,
    },
    BuiltinWeak {
        #[serde(default = "default_weak_temperature")]
        temperature: f64,
        #[serde(default)]
        sampling: Option<SamplingMode>,
        #[serde(default)]
        seed: Option<u64>,
    },
    Uci {
        #[serde(flatten)]
        params: UciParams,
        #[serde(default = "default_strong_nodes")]
        nodes: u64,
        #[serde(default = "default_strong_temperature")]
        temperature: f64,
        #[serde(default)]
        sampling: Option<SamplingMode>,
        #[serde(default)]
        seed: Option<u64>,
    },
    Tree {
        #[serde(flatten)]
        params: TreeParams,
        #[serde(default)]
        sampling: Option<SamplingMode>,
    },
    ExpectorStt {
        #[serde(flatten)]
        params: ExpectorParams,
    },
    ExpectorHb {
        #[serde(flatten)]
        params: ExpectorParams,
    },
}

fn default_strong_nodes() -> u64 {
    DEFAULT_STRONG_NODES
}

fn default_strong_temperature() -> f64 {
    DEFAULT_STRONG_TEMPERATURE
}

fn default_weak_temperature() -> f64 {
    DEFAULT_WEAK_TEMPERATURE
}

impl AgentSpec {
    pub fn strong(nodes: u64) -> AgentSpec {
        AgentSpec::BuiltinStrong {
            nodes,
            temperature: DEFAULT_STRONG_TEMPERATURE,
            sampling: None,
            seed: None,
        }
    }

    pub fn weak(temperature: f64) -> AgentSpec {
        AgentSpec::BuiltinWeak {
            temperature,
            sampling: None,
            seed: None,
        }
    }

    pub fn kind(&self) -> AgentKind {
        match self {
            AgentSpec::BuiltinStrong { .. } => AgentKind::BuiltinStrong,
            AgentSpec::BuiltinWeak { .. } => AgentKind::BuiltinWeak,
            AgentSpec::Uci { .. } => AgentKind::Uci,
            AgentSpec::Tree { .. } => AgentKind::Tree,
            AgentSpec::ExpectorStt { .. } => AgentKind::ExpectorStt,
            AgentSpec::ExpectorHb { .. } => AgentKind::ExpectorHb,
        }
    }

    pub fn sampling(&self) -> Option<SamplingMode> {
        match self {
            AgentSpec::BuiltinStrong { sampling, .. }
            | AgentSpec::BuiltinWeak { sampling, .. }
            | AgentSpec::Uci { sampling, .. }
            | AgentSpec::Tree { sampling, .. } => *sampling,
            // Deliberate one-move outputs: sampling has nothing to vary.
            AgentSpec::ExpectorStt { .. } | AgentSpec::ExpectorHb { .. } => {
                Some(SamplingMode::Argmax)
            }
        }
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        fn positive_temp(t: f64) -> Result<(), SpecError> {
            if t.is_finite() && t > 0.0 {
                Ok(())
            } else {
                Err(SpecError::Invalid(String::from(
                    "softmax temperature must be finite and > 0",
                )))
            }
        }
        match self {
            AgentSpec::BuiltinStrong { nodes, temperature, .. } => {
                if *nodes < 1 {
                    return Err(SpecError::Invalid(String::from("node budget must be >= 1")));
                }
                positive_temp(*temperature)
            }
            AgentSpec::BuiltinWeak { temperature, .. } => positive_temp(*temperature),
            AgentSpec::Uci {
                params,
                nodes,
                temperature,
                ..
            } => {
                if *nodes < 1 {
                    return Err(SpecError::Invalid(String::from("node budget must be >= 1")));
                }
                if params.path.is_empty() {
                    return Err(SpecError::Invalid(String::from("uci path must be set")));
                }
                if params.multipv < 1 {
                    return Err(SpecError::Invalid(String::from("multipv must be >= 1")));
                }
                positive_temp(*temperature)
            }
            AgentSpec::Tree { params, .. } => {
                if params.nodes < 1 {
                    return Err(SpecError::Invalid(String::from("node budget must be >= 1")));
                }
                if !(params.c_puct.is_finite() && params.c_puct > 0.0) {
                    return Err(SpecError::Invalid(String::from("c_puct must be > 0")));
                }
                params.model.validate()
            }
            AgentSpec::ExpectorStt { params } => {
                if params.mode == ExpectorMode::Hb {
                    return Err(SpecError::Invalid(String::from(
                        "expector-stt cannot use hb mode",
                    )));
                }
                params_common(params)?;
                let need = |opt: &Option<Box<AgentSpec>>, name: &str| {
                    opt.as_ref()
                        .map(|s| s.validate())
                        .transpose()?
                        .ok_or_else(|| {
                            SpecError::Invalid(alloc::format!("expector-stt requires {name} model"))
                        })
                        .map(|_| ())
                };
                need(&params.base_strong, "base-strong")?;
                need(&params.opponent_senior, "opponent-senior")?;
                need(&params.opponent_junior, "opponent-junior")?;
                if params.mode != ExpectorMode::Tricking {
                    need(&params.partner_junior, "partner-junior")?;
                }
                Ok(())
            }
            AgentSpec::ExpectorHb { params } => {
                if params.mode != ExpectorMode::Hb {
                    return Err(SpecError::Invalid(String::from(
                        "expector-hb requires hb mode",
                    )));
                }
                params_common(params)?;
                match &params.own_hand {
                    Some(spec) => spec.validate(),
                    None => Err(SpecError::Invalid(String::from(
                        "expector-hb requires own-hand model",
                    ))),
                }
            }
        }
    }
}

fn params_common(params: &ExpectorParams) -> Result<(), SpecError> {
    if params.candidates < 1 {
        return Err(SpecError::Invalid(String::from(
            "candidate width must be >= 1",
        )));
    }
    params.evaluator.validate()
}

/// Builds live agents from specs. The core factory covers everything that
/// runs in-process; the companion crate's factory adds UCI subprocesses.
pub trait AgentFactory {
    fn build(&self, spec: &AgentSpec) -> Result<Box<dyn Agent + Send>, SpecError>;

    fn build_evaluator(&self, spec: &EvaluatorSpec) -> Result<Arc<dyn Evaluate>, SpecError>;
}

pub struct BuiltinFactory;

impl AgentFactory for BuiltinFactory {
    fn build(&self, spec: &AgentSpec) -> Result<Box<dyn Agent + Send>, SpecError> {
        build_with(self, spec)
    }

    fn build_evaluator(&self, spec: &EvaluatorSpec) -> Result<Arc<dyn Evaluate>, SpecError> {
        spec.validate()?;
        let eval = PlainEvaluator::new(spec.clone())
            .map_err(|_| SpecError::Unsupported("uci evaluator"))?;
        Ok(Arc::new(eval))
    }
}

/// Shared construction for every in-process kind; `factory` resolves
/// nested model specs, so an extended factory gets its UCI models back.
pub fn build_with(
    factory: &dyn AgentFactory,
    spec: &AgentSpec,
) -> Result<Box<dyn Agent + Send>, SpecError> {
    spec.validate()?;
    match spec {
        AgentSpec::BuiltinStrong {
            nodes,
            temperature,
            sampling,
            ..
        } => Ok(Box::new(super::builtin::BuiltinEngine::new(
            *nodes,
            *temperature,
            *sampling,
        ))),
        AgentSpec::BuiltinWeak {
            temperature,
            sampling,
            ..
        } => Ok(Box::new(super::builtin::BuiltinEngine::new(
            1,
            *temperature,
            *sampling,
        ))),
        AgentSpec::Uci { .. } => Err(SpecError::Unsupported("uci")),
        AgentSpec::Tree { params, .. } => {
            let model = factory.build(&params.model)?;
            Ok(Box::new(TreeAgent::new(params.clone(), model)))
        }
        AgentSpec::ExpectorStt { params } | AgentSpec::ExpectorHb { params } => {
            let evaluator = factory.build_evaluator(&params.evaluator)?;
            let build_opt = |spec: &Option<Box<AgentSpec>>| -> Result<_, SpecError> {
                spec.as_ref().map(|s| factory.build(s)).transpose()
            };
            Ok(Box::new(Expector::new(
                params.mode,
                params.candidates,
                evaluator,
                build_opt(&params.base_strong)?,
                build_opt(&params.opponent_senior)?,
                build_opt(&params.opponent_junior)?,
                build_opt(&params.partner_junior)?,
                build_opt(&params.own_hand)?,
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_catches_bad_budgets() {
        assert!(AgentSpec::strong(0).validate().is_err());
        assert!(AgentSpec::strong(1).validate().is_ok());
        assert!(AgentSpec::weak(-1.0).validate().is_err());
    }

    #[test]
    fn expector_model_requirements() {
        let mut params = ExpectorParams {
            mode: ExpectorMode::Full,
            candidates: 5,
            evaluator: EvaluatorSpec::builtin(300),
            base_strong: Some(Box::new(AgentSpec::strong(100))),
            opponent_senior: Some(Box::new(AgentSpec::strong(100))),
            opponent_junior: Some(Box::new(AgentSpec::weak(100.0))),
            partner_junior: None,
            own_hand: None,
        };
        assert!(AgentSpec::ExpectorStt { params: params.clone() }.validate().is_err());
        params.partner_junior = Some(Box::new(AgentSpec::weak(100.0)));
        assert!(AgentSpec::ExpectorStt { params: params.clone() }.validate().is_ok());
        params.mode = ExpectorMode::Tricking;
        params.partner_junior = None;
        assert!(AgentSpec::ExpectorStt { params }.validate().is_ok());
    }

    #[test]
    fn uci_kind_is_unsupported_in_core() {
        let spec = AgentSpec::Uci {
            params: UciParams {
                path: String::from("/bin/true"),
                options: BTreeMap::new(),
                multipv: 4,
            },
            nodes: 100,
            temperature: 50.0,
            sampling: None,
            seed: None,
        };
        assert_eq!(
            BuiltinFactory.build(&spec).err(),
            Some(SpecError::Unsupported("uci"))
        );
    }
}
