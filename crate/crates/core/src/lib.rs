//! Core library for collaborative-chess team experiments.
//!
//! Everything in this crate is pure computation over immutable values:
//! the rules kernel, the built-in engines, the team frameworks and the
//! move-loss analysis pipeline. Process management, file formats and the
//! command-line surface live in the companion `tandem-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod agent;
pub mod analysis;
pub mod board;
pub mod fixtures;
pub mod focal;
pub mod framework;

pub use board::{Color, GameStatus, Move, PieceType, Position, Square};
