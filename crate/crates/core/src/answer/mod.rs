// SPDX-License-Identifier: Apache-2.0

//! Canonical answer structures, their text renderings, and deterministic
//! parsers for model responses.

mod extract;
mod ops;
mod parse;
pub mod render;

pub use extract::extract_final_answer;
pub use ops::{parse_operations, ParsedOps};
pub use parse::{parse_answer, parse_answer_sized};
pub use render::{render_answer, render_answer_typed};

use crate::scenario::Endpoint;
use crate::sim::{Card, Color, Direction, FileCommand, Pos};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One recalled operation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Step {
    Slide { from: Pos, direction: Direction },
    /// Unordered; stored with `a <= b`.
    Swap { a: Pos, b: Pos },
    /// Brace lists sorted.
    Command { cmd: FileCommand },
    Card { card: Card, pile: String },
    Chip { value: u32, cup: String },
}

impl Step {
    pub fn swap(a: Pos, b: Pos) -> Step {
        Step::Swap { a: a.min(b), b: a.max(b) }
    }
}

/// Normalised answer structure. Two answers to the same question are
/// equivalent exactly when they are `==`: parsers sort the set-like variants.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CanonicalAnswer {
    /// Ordinal-tagged operations, ascending ordinal.
    Steps { steps: Vec<(usize, Step)> },
    Directions { directions: Vec<Direction> },
    /// Positions before each matching move, sorted multiset.
    Occurrences { positions: Vec<Pos> },
    /// Per matching swap, the involved cups of the queried row; in swap order.
    Involvements { items: Vec<Vec<Pos>> },
    NumberCells { cells: Vec<(Pos, u8)> },
    ColorCells { cells: Vec<(Pos, Color)> },
    Coins { coins: Vec<Pos> },
    /// `true` marks a coin.
    CupContents { cells: Vec<(Pos, bool)> },
    Files { files: Vec<String> },
    /// Pile order for pile questions, sorted for set-like questions.
    Cards { cards: Vec<Card> },
    Chips { chips: Vec<u32> },
    /// `None` when both totals are equal.
    ChipCompare { higher: Option<Endpoint>, difference: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Error)]
#[error("parse failure at byte {position}: expected {expected}")]
pub struct ParseFailure {
    pub position: usize,
    pub expected: String,
}

impl ParseFailure {
    pub fn new(position: usize, expected: impl Into<String>) -> Self {
        ParseFailure { position, expected: expected.into() }
    }
}
