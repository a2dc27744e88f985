//! Brute-force oracles and stub worlds used by the test suites.
//!
//! Everything here is deliberately slow and simple: an independent
//! mailbox move generator for perft cross-checks, hash-driven stub
//! agents, and plain re-enumerations of the deliberation rules that the
//! real agents must match exactly.

pub mod naive;
pub mod stub;

pub use naive::NaiveBoard;
pub use stub::{mix, move_key, oracle_argmax, oracle_best_move, oracle_hb_piece, oracle_negamax, oracle_top_k, random_position, terminal_w, StubEval, StubModel, StubWorld};
