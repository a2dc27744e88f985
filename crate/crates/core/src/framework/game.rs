use super::bitstring::BitstringPool;
use super::record::{
    ActorLabel, Framework, GameOutcome, GameRecord, HbPly, InteractionType, PlyRecord, TeamLabel,
    TeamRole, Termination, RECORD_SCHEMA_VERSION,
};
use super::stats::{aggregate, derive_game_seed, GamePlan, MatchResult};
use crate::agent::{
    conditional_policy, Agent, AgentError, AgentFactory, AgentKind, AgentSpec, BrainPick,
    SamplingMode, SpecError,
};
use crate::board::{piece_type_of, Color, GameRules, GameStatus, Position};
use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchError {
    #[error("invalid match spec: {0}")]
    Invalid(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
}

/// The two members of one team. Plain head-to-head matches use the senior
/// only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamSpec {
    pub senior: AgentSpec,
    #[serde(default)]
    pub junior: Option<AgentSpec>,
}

impl TeamSpec {
    pub fn label(&self) -> TeamLabel {
        TeamLabel {
            senior: kind_label(&self.senior).to_string(),
            junior: self
                .junior
                .as_ref()
                .map(|j| kind_label(j).to_string())
                .unwrap_or_else(|| String::from("-")),
        }
    }
}

fn kind_label(spec: &AgentSpec) -> &'static str {
    match spec.kind() {
        AgentKind::BuiltinStrong => "builtin-strong",
        AgentKind::BuiltinWeak => "builtin-weak",
        AgentKind::Uci => "uci",
        AgentKind::Tree => "tree",
        AgentKind::ExpectorStt => "expector-stt",
        AgentKind::ExpectorHb => "expector-hb",
    }
}

/// One match between a focal and an alter team.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchSpec {
    pub framework: Framework,
    pub games: u64,
    pub focal: TeamSpec,
    pub alter: TeamSpec,
    pub master_seed: u64,
    #[serde(default = "default_max_plies")]
    pub max_plies: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pool: Option<BitstringPool>,
}

fn default_max_plies() -> usize {
    crate::board::DEFAULT_MAX_PLIES
}

impl MatchSpec {
    pub fn validate(&self) -> Result<(), MatchError> {
        if self.games == 0 {
            return Err(MatchError::Invalid(String::from("games must be >= 1")));
        }
        if self.max_plies == 0 {
            return Err(MatchError::Invalid(String::from("max_plies must be >= 1")));
        }
        for (team, name) in [(&self.focal, "focal"), (&self.alter, "alter")] {
            team.senior.validate().map_err(MatchError::Spec)?;
            if let Some(junior) = &team.junior {
                junior.validate().map_err(MatchError::Spec)?;
            }
            match self.framework {
                Framework::TagTeam | Framework::HandBrain => {
                    if team.junior.is_none() {
                        return Err(MatchError::Invalid(format!(
                            "{name} team needs a junior for {}",
                            self.framework
                        )));
                    }
                }
                Framework::Plain => {}
            }
            if self.framework != Framework::HandBrain
                && team.senior.kind() == AgentKind::ExpectorHb
            {
                return Err(MatchError::Invalid(String::from(
                    "expector-hb emits piece choices and can only play as a brain",
                )));
            }
            if let Some(junior) = &team.junior {
                if junior.kind() == AgentKind::ExpectorHb {
                    return Err(MatchError::Invalid(String::from(
                        "expector-hb cannot play as junior/hand",
                    )));
                }
            }
        }
        if self.framework == Framework::TagTeam {
            if self.games % 2 != 0 {
                return Err(MatchError::Invalid(String::from(
                    "tag-team matches need an even game count for color-swapped pairs",
                )));
            }
            let pool = self.pool.as_ref().ok_or_else(|| {
                MatchError::Invalid(String::from("tag-team matches need a bitstring pool"))
            })?;
            if pool.len() < (self.games / 2) as usize {
                return Err(MatchError::Invalid(format!(
                    "pool has {} bitstrings but {} pairs are needed",
                    pool.len(),
                    self.games / 2
                )));
            }
            if pool.length < self.max_plies {
                return Err(MatchError::Invalid(format!(
                    "bitstrings of length {} cannot schedule {}-ply games",
                    pool.length, self.max_plies
                )));
            }
        }
        Ok(())
    }

    /// Deterministic per-game assignment. Tag-team pairs (2k, 2k+1) share
    /// bitstring k and swap colors; other frameworks alternate colors.
    pub fn plan(&self, game_id: u64) -> GamePlan {
        GamePlan {
            game_id,
            focal_is_white: game_id % 2 == 0,
            bitstring_index: match self.framework {
                Framework::TagTeam => Some((game_id / 2) as usize),
                _ => None,
            },
            seed: derive_game_seed(self.master_seed, game_id),
        }
    }

    /// Play the whole match sequentially with one worker.
    pub fn play_match(
        &self,
        factory: &dyn AgentFactory,
    ) -> Result<(MatchResult, Vec<GameRecord>), MatchError> {
        self.validate()?;
        let mut worker = GameWorker::new(self, factory)?;
        let mut records = Vec::with_capacity(self.games as usize);
        for game_id in 0..self.games {
            records.push(worker.play(self, self.plan(game_id)));
        }
        let mut result = aggregate(&records);
        result.pool_id = self.pool.as_ref().map(|p| p.pool_id.clone());
        Ok((result, records))
    }
}

struct BuiltAgent {
    agent: Box<dyn Agent + Send>,
    mode: SamplingMode,
}

struct TeamAgents {
    senior: BuiltAgent,
    junior: Option<BuiltAgent>,
    label: TeamLabel,
    role: TeamRole,
}

/// Owns the live agents of both teams and plays assigned games one at a
/// time. Each worker must be used by a single thread; spawn one per
/// thread for parallel matches.
pub struct GameWorker {
    focal: TeamAgents,
    alter: TeamAgents,
    rules: GameRules,
}

impl GameWorker {
    pub fn new(spec: &MatchSpec, factory: &dyn AgentFactory) -> Result<GameWorker, MatchError> {
        let build_team = |team: &TeamSpec, role: TeamRole| -> Result<TeamAgents, MatchError> {
            let senior = BuiltAgent {
                agent: factory.build(&team.senior)?,
                mode: team.senior.sampling().unwrap_or(SamplingMode::Argmax),
            };
            let junior = match (&team.junior, spec.framework) {
                (Some(junior_spec), Framework::TagTeam | Framework::HandBrain) => {
                    Some(BuiltAgent {
                        agent: factory.build(junior_spec)?,
                        mode: junior_spec.sampling().unwrap_or(SamplingMode::Sample),
                    })
                }
                _ => None,
            };
            Ok(TeamAgents {
                senior,
                junior,
                label: team.label(),
                role,
            })
        };
        Ok(GameWorker {
            focal: build_team(&spec.focal, TeamRole::Focal)?,
            alter: build_team(&spec.alter, TeamRole::Alter)?,
            rules: GameRules {
                max_plies: spec.max_plies,
            },
        })
    }

    /// Play one game; agent failures yield a flagged aborted record
    /// rather than an error.
    pub fn play(&mut self, spec: &MatchSpec, plan: GamePlan) -> GameRecord {
        let focal_color = if plan.focal_is_white {
            Color::White
        } else {
            Color::Black
        };
        let bits = plan
            .bitstring_index
            .and_then(|i| spec.pool.as_ref().map(|p| &p.bitstrings[i]));

        let mut record = GameRecord {
            schema: RECORD_SCHEMA_VERSION,
            game_id: plan.game_id,
            framework: spec.framework,
            focal_color,
            white_team: if plan.focal_is_white {
                self.focal.label.clone()
            } else {
                self.alter.label.clone()
            },
            black_team: if plan.focal_is_white {
                self.alter.label.clone()
            } else {
                self.focal.label.clone()
            },
            bitstring_id: bits.map(|b| b.id),
            bitstring: bits.map(|b| b.bits.clone()),
            seed: plan.seed,
            plies: Vec::new(),
            result: None,
            termination: Termination::Aborted,
            abort_reason: None,
        };

        let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
        for team in [&mut self.focal, &mut self.alter] {
            if let Err(err) = team.new_game() {
                record.abort_reason = Some(format!("new_game failed: {err}"));
                return record;
            }
        }

        let rules = self.rules;
        let GameWorker { focal, alter, .. } = self;
        let (white, black) = if plan.focal_is_white {
            (&mut *focal, &mut *alter)
        } else {
            (&mut *alter, &mut *focal)
        };

        let mut pos = Position::start();
        let mut prior_hashes: Vec<u64> = Vec::with_capacity(rules.max_plies);
        let status = loop {
            let status = rules.status(&pos, &prior_hashes);
            if status.is_terminal() {
                break status;
            }
            let ply_index = prior_hashes.len();
            let team = if pos.side_to_move() == Color::White {
                &mut *white
            } else {
                &mut *black
            };
            let step = match spec.framework {
                Framework::TagTeam => {
                    let senior_turn = bits.expect("validated pool").senior_at(ply_index);
                    tag_team_ply(team, &pos, senior_turn, &mut rng)
                }
                Framework::HandBrain => hand_brain_ply(team, &pos, &mut rng),
                Framework::Plain => plain_ply(team, &pos, &mut rng),
            };
            match step {
                Ok(ply) => {
                    prior_hashes.push(pos.hash());
                    pos = pos.apply_move_unchecked(ply.mv);
                    record.plies.push(ply);
                }
                Err(err) => {
                    record.abort_reason = Some(format!("ply {ply_index}: {err}"));
                    return record;
                }
            }
        };

        record.termination = Termination::from_status(status).expect("loop exits on terminal");
        record.result = Some(match status {
            GameStatus::Checkmate => match pos.side_to_move() {
                Color::White => GameOutcome::Black,
                Color::Black => GameOutcome::White,
            },
            _ => GameOutcome::Draw,
        });
        record
    }
}

impl TeamAgents {
    fn new_game(&mut self) -> Result<(), AgentError> {
        self.senior.agent.new_game()?;
        if let Some(junior) = &mut self.junior {
            junior.agent.new_game()?;
        }
        Ok(())
    }
}

fn tag_team_ply(
    team: &mut TeamAgents,
    pos: &Position,
    senior_turn: bool,
    rng: &mut ChaCha8Rng,
) -> Result<PlyRecord, AgentError> {
    let (actor, label) = if senior_turn {
        (&mut team.senior, ActorLabel::Senior)
    } else {
        (
            team.junior.as_mut().ok_or(AgentError::MissingModel("junior"))?,
            ActorLabel::Junior,
        )
    };
    let mv = actor.agent.select_with(pos, actor.mode, rng)?;
    if !pos.legal_moves().contains(&mv) {
        return Err(AgentError::Engine(format!("illegal move {}", mv.uci())));
    }
    Ok(PlyRecord {
        mv,
        actor: Some(label),
        role: team.role,
        hb: None,
    })
}

fn hand_brain_ply(
    team: &mut TeamAgents,
    pos: &Position,
    rng: &mut ChaCha8Rng,
) -> Result<PlyRecord, AgentError> {
    let legal = pos.legal_moves();
    let pick = team.senior.agent.brain_pick(pos)?;
    let (intended, piece) = match pick {
        BrainPick::Move(m) => {
            if !legal.contains(&m) {
                return Err(AgentError::Engine(format!(
                    "brain intended illegal move {}",
                    m.uci()
                )));
            }
            let pt = piece_type_of(pos, m).expect("legal move has a mover");
            (Some(m), pt)
        }
        BrainPick::Piece(pt) => (None, pt),
    };
    if !legal.iter().any(|&m| piece_type_of(pos, m) == Some(piece)) {
        return Err(AgentError::EmptyPieceRestriction(piece));
    }

    let hand = team
        .junior
        .as_mut()
        .ok_or(AgentError::MissingModel("hand"))?;
    let dist = hand.agent.policy(pos)?;
    let pick_from = |d: &crate::agent::MoveDistribution, rng: &mut ChaCha8Rng| match hand.mode {
        SamplingMode::Argmax => d.argmax(),
        SamplingMode::Sample => d.sample(rng),
    };
    let hand_sample = pick_from(&dist, rng).ok_or(AgentError::TerminalPosition)?;

    let (mv, interaction) = if piece_type_of(pos, hand_sample) == Some(piece) {
        let interaction = if intended == Some(hand_sample) {
            InteractionType::Agreement
        } else {
            InteractionType::Blindsiding
        };
        (hand_sample, interaction)
    } else {
        let constrained = conditional_policy(&dist, pos, piece)?;
        let resampled = pick_from(&constrained, rng).ok_or(AgentError::TerminalPosition)?;
        let interaction = if intended == Some(resampled) {
            InteractionType::Correction
        } else {
            InteractionType::Disagreement
        };
        (resampled, interaction)
    };

    Ok(PlyRecord {
        mv,
        actor: None,
        role: team.role,
        hb: Some(HbPly {
            intended,
            piece,
            hand_sample,
            interaction,
        }),
    })
}

fn plain_ply(
    team: &mut TeamAgents,
    pos: &Position,
    rng: &mut ChaCha8Rng,
) -> Result<PlyRecord, AgentError> {
    let mv = team.senior.agent.select_with(pos, team.senior.mode, rng)?;
    if !pos.legal_moves().contains(&mv) {
        return Err(AgentError::Engine(format!("illegal move {}", mv.uci())));
    }
    Ok(PlyRecord {
        mv,
        actor: None,
        role: team.role,
        hb: None,
    })
}
