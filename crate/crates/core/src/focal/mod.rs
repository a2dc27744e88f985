//! Focal senior/brain constructions: the policy-guided tree-search agent
//! and the expectation-maximizing lookahead family.

mod expector;
mod tree;

pub use expector::{expector_hb_piece, expector_stt_move, Expector};
pub use tree::{tree_move, TreeAgent, TreeSearch};
