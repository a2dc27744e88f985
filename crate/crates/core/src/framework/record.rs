use crate::board::{Color, GameStatus, Move, PieceType, Position};
use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

/// Bumped whenever the JSON-lines record layout changes.
pub const RECORD_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Framework {
    TagTeam,
    HandBrain,
    Plain,
}

impl core::fmt::Display for Framework {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Framework::TagTeam => "tag-team",
            Framework::HandBrain => "hand-brain",
            Framework::Plain => "plain",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TeamRole {
    Focal,
    Alter,
}

impl TeamRole {
    pub fn other(self) -> TeamRole {
        match self {
            TeamRole::Focal => TeamRole::Alter,
            TeamRole::Alter => TeamRole::Focal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActorLabel {
    Senior,
    Junior,
}

impl ActorLabel {
    pub fn bit_char(self) -> char {
        match self {
            ActorLabel::Senior => '1',
            ActorLabel::Junior => '0',
        }
    }
}

/// The four hand/brain interaction outcomes of one move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InteractionType {
    /// Hand's unconstrained sample equals the brain's intended move.
    Agreement,
    /// Same piece type, different move: the hand's own move stands.
    Blindsiding,
    /// Forced resample landed on the brain's intended move.
    Correction,
    /// Forced resample chose some other move of the piece.
    Disagreement,
}

impl InteractionType {
    pub const ALL: [InteractionType; 4] = [
        InteractionType::Agreement,
        InteractionType::Blindsiding,
        InteractionType::Correction,
        InteractionType::Disagreement,
    ];

    pub fn letter(self) -> char {
        match self {
            InteractionType::Agreement => 'A',
            InteractionType::Blindsiding => 'B',
            InteractionType::Correction => 'C',
            InteractionType::Disagreement => 'D',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GameOutcome {
    White,
    Black,
    Draw,
}

impl GameOutcome {
    pub fn winner(self) -> Option<Color> {
        match self {
            GameOutcome::White => Some(Color::White),
            GameOutcome::Black => Some(Color::Black),
            GameOutcome::Draw => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    Checkmate,
    Stalemate,
    FiftyMove,
    Threefold,
    InsufficientMaterial,
    MaxPly,
    Aborted,
}

impl Termination {
    pub fn from_status(status: GameStatus) -> Option<Termination> {
        Some(match status {
            GameStatus::Ongoing => return None,
            GameStatus::Checkmate => Termination::Checkmate,
            GameStatus::Stalemate => Termination::Stalemate,
            GameStatus::DrawFiftyMove => Termination::FiftyMove,
            GameStatus::DrawThreefold => Termination::Threefold,
            GameStatus::DrawInsufficient => Termination::InsufficientMaterial,
            GameStatus::DrawMaxPly => Termination::MaxPly,
        })
    }
}

/// Hand-and-brain annotations of one ply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HbPly {
    /// Brain's intended move, when the brain emits moves.
    pub intended: Option<Move>,
    /// Piece type the brain conveyed (binding for the hand).
    pub piece: PieceType,
    /// Hand's unconstrained first sample, recorded before the constraint.
    pub hand_sample: Move,
    pub interaction: InteractionType,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlyRecord {
    pub mv: Move,
    /// Senior/junior label for tag-team plies.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actor: Option<ActorLabel>,
    /// Which team moved.
    pub role: TeamRole,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hb: Option<HbPly>,
}

/// Short description of a team member for record files; the full spec
/// lives in the experiment config, linked by config hash.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TeamLabel {
    pub senior: String,
    pub junior: String,
}

/// Everything needed to replay and analyze one finished game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameRecord {
    pub schema: u32,
    pub game_id: u64,
    pub framework: Framework,
    pub focal_color: Color,
    pub white_team: TeamLabel,
    pub black_team: TeamLabel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bitstring_id: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bitstring: Option<String>,
    pub seed: u64,
    pub plies: Vec<PlyRecord>,
    /// None only for aborted games.
    pub result: Option<GameOutcome>,
    pub termination: Termination,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abort_reason: Option<String>,
}

impl GameRecord {
    pub fn is_aborted(&self) -> bool {
        self.termination == Termination::Aborted
    }

    /// Positions of the game: start, then one per ply. Errors with the
    /// offending ply if a recorded move is illegal.
    pub fn replay(&self) -> Result<Vec<Position>, usize> {
        let mut positions = Vec::with_capacity(self.plies.len() + 1);
        let mut pos = Position::start();
        positions.push(pos);
        for (i, ply) in self.plies.iter().enumerate() {
            if !pos.legal_moves().contains(&ply.mv) {
                return Err(i);
            }
            pos = pos.apply_move_unchecked(ply.mv);
            positions.push(pos);
        }
        Ok(positions)
    }

    /// Actor labels as a '1'/'0' string (tag-team games).
    pub fn actor_label_string(&self) -> String {
        self.plies
            .iter()
            .filter_map(|p| p.actor.map(ActorLabel::bit_char))
            .collect()
    }

    /// Interaction letters per ply (hand-and-brain games).
    pub fn interaction_string(&self) -> String {
        self.plies
            .iter()
            .filter_map(|p| p.hb.as_ref().map(|hb| hb.interaction.letter()))
            .collect()
    }

    /// Result from the focal team's point of view: 1 win, 0.5 draw, 0 loss.
    pub fn focal_points(&self) -> Option<f64> {
        let outcome = self.result?;
        Some(match outcome.winner() {
            None => 0.5,
            Some(color) if color == self.focal_color => 1.0,
            Some(_) => 0.0,
        })
    }
}
