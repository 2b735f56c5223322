// SPDX-License-Identifier: Apache-2.0

//! State spaces of the six demonstrations and validated forward application
//! of operations.
//!
//! This module is the single transition function of the crate: scenario
//! generation, ground-truth derivation and answer verification all call
//! [`validate_op`] / [`apply_op`] / [`apply_sequence`].

pub mod card;
pub mod chip;
pub mod circle;
pub mod coord;
pub mod cup;
pub mod file;
pub mod number;

pub use card::{Action, Card, CardPiles, Rank, Suit};
pub use chip::{ChipCups, Chips, DENOMINATIONS};
pub use circle::{CircleGrid, Color};
pub use coord::{CoordStyle, Direction, Pos};
pub use cup::CupBoard;
pub use file::{FileCmdKind, FileCommand, FileSystem};
pub use number::NumberBoard;

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DemoKind {
    Number,
    Circle,
    Cup,
    File,
    Card,
    Chip,
}

impl DemoKind {
    pub const ALL: [DemoKind; 6] =
        [DemoKind::Number, DemoKind::Circle, DemoKind::Cup, DemoKind::File, DemoKind::Card, DemoKind::Chip];

    pub fn as_str(self) -> &'static str {
        match self {
            DemoKind::Number => "number",
            DemoKind::Circle => "circle",
            DemoKind::Cup => "cup",
            DemoKind::File => "file",
            DemoKind::Card => "card",
            DemoKind::Chip => "chip",
        }
    }

    /// Number, Circle and Cup live on an N×N board; the others hold 1-2 containers.
    pub fn is_board(self) -> bool {
        matches!(self, DemoKind::Number | DemoKind::Circle | DemoKind::Cup)
    }

    /// Prefix of container names (`path0`, `pile1`, ...). `None` for boards.
    pub fn container_prefix(self) -> Option<&'static str> {
        match self {
            DemoKind::File => Some("path"),
            DemoKind::Card => Some("pile"),
            DemoKind::Chip => Some("cup"),
            _ => None,
        }
    }
}

impl fmt::Display for DemoKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DemoKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DemoKind::ALL
            .into_iter()
            .find(|d| d.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown demonstration '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum State {
    Number(NumberBoard),
    Circle(CircleGrid),
    Cup(CupBoard),
    File(FileSystem),
    Card(CardPiles),
    Chip(ChipCups),
}

impl State {
    pub fn kind(&self) -> DemoKind {
        match self {
            State::Number(_) => DemoKind::Number,
            State::Circle(_) => DemoKind::Circle,
            State::Cup(_) => DemoKind::Cup,
            State::File(_) => DemoKind::File,
            State::Card(_) => DemoKind::Card,
            State::Chip(_) => DemoKind::Chip,
        }
    }

    /// Structural well-formedness (used on states read back from disk).
    pub fn check(&self) -> Result<(), StateError> {
        match self {
            State::Number(b) => b.check(),
            State::Circle(g) => g.check(),
            State::Cup(b) => b.check(),
            State::File(fs) => fs.check(),
            State::Card(p) => p.check(),
            State::Chip(c) => c.check(),
        }
    }

    /// Board side for board demos.
    pub fn board_size(&self) -> Option<u8> {
        match self {
            State::Number(b) => Some(b.size),
            State::Circle(g) => Some(g.size),
            State::Cup(b) => Some(b.size),
            _ => None,
        }
    }

    /// Names of containers, in order. Empty for board demos.
    pub fn container_names(&self) -> Vec<String> {
        match self {
            State::File(fs) => fs.paths.keys().cloned().collect(),
            State::Card(p) => p.piles.keys().cloned().collect(),
            State::Chip(c) => c.cups.keys().cloned().collect(),
            _ => Vec::new(),
        }
    }

    /// Equality restricted to one container; boards compare whole states.
    /// For Circle only the piece colours take part, the circle position does not.
    pub fn scoped_eq(&self, other: &State, container: Option<&str>) -> bool {
        match (self, other, container) {
            (State::Circle(a), State::Circle(b), _) => a.size == b.size && a.rows == b.rows,
            (State::File(a), State::File(b), Some(c)) => a.files(c).is_some() && a.files(c) == b.files(c),
            (State::Card(a), State::Card(b), Some(c)) => a.pile(c).is_some() && a.pile(c) == b.pile(c),
            (State::Chip(a), State::Chip(b), Some(c)) => a.cup(c).is_some() && a.cup(c) == b.cup(c),
            _ => self == other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Operation {
    /// The tile next to the gap moves in `direction` into the gap.
    Slide { direction: Direction },
    CircleMove { direction: Direction },
    CupSwap { a: Pos, b: Pos },
    FileCmd { cmd: FileCommand },
    CardAct { action: Action, card: Card, pile: String },
    ChipAct { action: Action, value: u32, cup: String },
}

impl Operation {
    pub fn kind(&self) -> DemoKind {
        match self {
            Operation::Slide { .. } => DemoKind::Number,
            Operation::CircleMove { .. } => DemoKind::Circle,
            Operation::CupSwap { .. } => DemoKind::Cup,
            Operation::FileCmd { .. } => DemoKind::File,
            Operation::CardAct { .. } => DemoKind::Card,
            Operation::ChipAct { .. } => DemoKind::Chip,
        }
    }

    /// Container touched by a container operation.
    pub fn container(&self) -> Option<&str> {
        match self {
            Operation::CardAct { pile, .. } => Some(pile),
            Operation::ChipAct { cup, .. } => Some(cup),
            Operation::FileCmd { cmd: FileCommand::Touch { path, .. } | FileCommand::Rm { path, .. } } => Some(path),
            _ => None,
        }
    }
}

/// Text form used in prompts, answers and vid2txt.
impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operation::Slide { direction } | Operation::CircleMove { direction } => write!(f, "{direction}"),
            Operation::CupSwap { a, b } => {
                write!(f, "({}, {})", a.fmt_style(CoordStyle::Compact), b.fmt_style(CoordStyle::Compact))
            }
            Operation::FileCmd { cmd } => write!(f, "{cmd}"),
            Operation::CardAct { action, card, pile } => {
                write!(f, "{} {card} {} {pile}", action.as_str(), action.preposition())
            }
            Operation::ChipAct { action, value, cup } => {
                write!(f, "{} {value} {} {cup}", action.as_str(), action.preposition())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Error)]
#[error("malformed state: {0}")]
pub struct StateError(pub String);

impl StateError {
    pub fn new(msg: impl Into<String>) -> Self {
        StateError(msg.into())
    }
}

/// Why a well-typed operation cannot be applied to a state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Error)]
#[serde(tag = "code", rename_all = "snake_case")]
pub enum InvalidOp {
    #[error("move crosses the board boundary")]
    OutOfBounds,
    #[error("position {pos:?} is off the board")]
    PositionOffBoard { pos: Pos },
    #[error("both coordinates name the same cup")]
    SamePosition,
    #[error("no container named '{name}'")]
    UnknownContainer { name: String },
    #[error("source and destination are the same path")]
    SameContainer,
    #[error("command has no file arguments")]
    EmptyArguments,
    #[error("'{name}' is listed twice")]
    DuplicateArgument { name: String },
    #[error("'{name}' is not a valid file name")]
    InvalidFileName { name: String },
    #[error("{path}/{file} already exists")]
    TargetExists { path: String, file: String },
    #[error("{path}/{file} does not exist")]
    TargetMissing { path: String, file: String },
    #[error("{path} already holds {file}")]
    DestinationOccupied { path: String, file: String },
    #[error("{pile} is empty")]
    EmptyPile { pile: String },
    #[error("bottom of {pile} is {bottom}, not {requested}")]
    NotBottomCard { pile: String, bottom: Card, requested: Card },
    #[error("{card} is already on the table")]
    CardInUse { card: Card },
    #[error("{cup} holds no {value} chip")]
    ChipAbsent { cup: String, value: u32 },
    #[error("{value} is not a chip denomination")]
    IllegalDenomination { value: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    /// Contract violation: the operation belongs to another demonstration.
    #[error("{op} operation applied to a {state} state")]
    KindMismatch { state: DemoKind, op: DemoKind },
    #[error(transparent)]
    Invalid(#[from] InvalidOp),
}

impl SimError {
    pub fn invalid(&self) -> Option<&InvalidOp> {
        match self {
            SimError::Invalid(r) => Some(r),
            SimError::KindMismatch { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("operation {index}: {error}")]
pub struct SequenceError {
    /// 1-based position of the first rejected operation.
    pub index: usize,
    pub error: SimError,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("states are not comparable: {0}")]
pub struct ShapeMismatch(pub String);

pub fn validate_op(state: &State, op: &Operation) -> Result<(), SimError> {
    match (state, op) {
        (State::Number(b), Operation::Slide { direction }) => b.validate(*direction)?,
        (State::Circle(g), Operation::CircleMove { direction }) => g.validate(*direction)?,
        (State::Cup(b), Operation::CupSwap { a, b: other }) => b.validate(*a, *other)?,
        (State::File(fs), Operation::FileCmd { cmd }) => fs.validate(cmd)?,
        (State::Card(p), Operation::CardAct { action, card, pile }) => p.validate(*action, *card, pile)?,
        (State::Chip(c), Operation::ChipAct { action, value, cup }) => c.validate(*action, *value, cup)?,
        _ => return Err(SimError::KindMismatch { state: state.kind(), op: op.kind() }),
    }
    Ok(())
}

/// Applies one operation. The input is never modified; an invalid operation
/// returns the validation error and no new state.
pub fn apply_op(state: &State, op: &Operation) -> Result<State, SimError> {
    validate_op(state, op)?;
    let mut next = state.clone();
    match (&mut next, op) {
        (State::Number(b), Operation::Slide { direction }) => b.apply(*direction),
        (State::Circle(g), Operation::CircleMove { direction }) => g.apply(*direction),
        (State::Cup(b), Operation::CupSwap { a, b: other }) => b.apply(*a, *other),
        (State::File(fs), Operation::FileCmd { cmd }) => fs.apply(cmd),
        (State::Card(p), Operation::CardAct { action, card, pile }) => p.apply(*action, *card, pile),
        (State::Chip(c), Operation::ChipAct { action, value, cup }) => c.apply(*action, *value, cup),
        _ => unreachable!("kind checked by validate_op"),
    }
    Ok(next)
}

pub fn apply_sequence(state: &State, ops: &[Operation]) -> Result<State, SequenceError> {
    ops.iter().enumerate().try_fold(state.clone(), |s, (i, op)| {
        apply_op(&s, op).map_err(|error| SequenceError { index: i + 1, error })
    })
}

/// Every intermediate state, starting with `state` itself.
pub fn trace(state: &State, ops: &[Operation]) -> Result<Vec<State>, SequenceError> {
    let mut out = Vec::with_capacity(ops.len() + 1);
    out.push(state.clone());
    for (i, op) in ops.iter().enumerate() {
        let next = apply_op(out.last().unwrap(), op).map_err(|error| SequenceError { index: i + 1, error })?;
        out.push(next);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDiff<T> {
    pub pos: Pos,
    pub first: T,
    pub second: T,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetDiff<T> {
    pub container: String,
    pub only_first: Vec<T>,
    pub only_second: Vec<T>,
    /// Same members in a different order (Card piles only).
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub reordered: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Higher {
    First,
    Second,
    Equal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChipDiff {
    pub cup: String,
    pub first_total: u32,
    pub second_total: u32,
    pub higher: Higher,
    pub difference: u32,
    pub removed: Vec<u32>,
    pub added: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StateDiff {
    Number { cells: Vec<CellDiff<u8>> },
    Circle { cells: Vec<CellDiff<Color>>, circle: Option<(Pos, Pos)> },
    /// `true` means the cup hides a coin.
    Cup { cells: Vec<CellDiff<bool>> },
    File { paths: Vec<SetDiff<String>> },
    Card { piles: Vec<SetDiff<Card>> },
    Chip { cups: Vec<ChipDiff> },
}

impl StateDiff {
    pub fn is_empty(&self) -> bool {
        match self {
            StateDiff::Number { cells } => cells.is_empty(),
            StateDiff::Circle { cells, circle } => cells.is_empty() && circle.is_none(),
            StateDiff::Cup { cells } => cells.is_empty(),
            StateDiff::File { paths } => paths.is_empty(),
            StateDiff::Card { piles } => piles.is_empty(),
            StateDiff::Chip { cups } => cups.is_empty(),
        }
    }
}

fn cell_diffs<T: PartialEq + Copy>(positions: impl Iterator<Item = Pos>, f: impl Fn(Pos) -> T, g: impl Fn(Pos) -> T) -> Vec<CellDiff<T>> {
    positions
        .filter_map(|pos| {
            let (first, second) = (f(pos), g(pos));
            (first != second).then_some(CellDiff { pos, first, second })
        })
        .collect()
}

fn same_keys<'a>(a: impl Iterator<Item = &'a String>, b: impl Iterator<Item = &'a String>) -> Result<(), ShapeMismatch> {
    let (a, b): (Vec<_>, Vec<_>) = (a.collect(), b.collect());
    if a == b {
        Ok(())
    } else {
        Err(ShapeMismatch(format!("containers {a:?} vs {b:?}")))
    }
}

fn multiset_minus(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut rest = b.to_vec();
    let mut out = Vec::new();
    for &v in a {
        match rest.iter().position(|&w| w == v) {
            Some(i) => {
                rest.swap_remove(i);
            }
            None => out.push(v),
        }
    }
    out.sort_unstable();
    out
}

pub fn diff_states(s1: &State, s2: &State) -> Result<StateDiff, ShapeMismatch> {
    if s1.kind() != s2.kind() {
        return Err(ShapeMismatch(format!("{} vs {}", s1.kind(), s2.kind())));
    }
    if s1.board_size() != s2.board_size() {
        return Err(ShapeMismatch(format!("board sizes {:?} vs {:?}", s1.board_size(), s2.board_size())));
    }
    Ok(match (s1, s2) {
        (State::Number(a), State::Number(b)) => StateDiff::Number { cells: cell_diffs(a.positions(), |p| a.get(p), |p| b.get(p)) },
        (State::Circle(a), State::Circle(b)) => StateDiff::Circle {
            cells: cell_diffs(a.positions(), |p| a.get(p), |p| b.get(p)),
            circle: (a.circle != b.circle).then_some((a.circle, b.circle)),
        },
        (State::Cup(a), State::Cup(b)) => StateDiff::Cup { cells: cell_diffs(a.positions(), |p| a.has_coin(p), |p| b.has_coin(p)) },
        (State::File(a), State::File(b)) => {
            same_keys(a.paths.keys(), b.paths.keys())?;
            let paths = a
                .paths
                .iter()
                .filter_map(|(name, fa)| {
                    let fb = &b.paths[name];
                    (fa != fb).then(|| SetDiff {
                        container: name.clone(),
                        only_first: fa.difference(fb).cloned().collect(),
                        only_second: fb.difference(fa).cloned().collect(),
                        reordered: false,
                    })
                })
                .collect();
            StateDiff::File { paths }
        }
        (State::Card(a), State::Card(b)) => {
            same_keys(a.piles.keys(), b.piles.keys())?;
            let piles = a
                .piles
                .iter()
                .filter_map(|(name, pa)| {
                    let pb = &b.piles[name];
                    if pa == pb {
                        return None;
                    }
                    let sa: BTreeSet<Card> = pa.iter().copied().collect();
                    let sb: BTreeSet<Card> = pb.iter().copied().collect();
                    Some(SetDiff {
                        container: name.clone(),
                        only_first: pa.iter().filter(|c| !sb.contains(c)).copied().collect(),
                        only_second: pb.iter().filter(|c| !sa.contains(c)).copied().collect(),
                        reordered: sa == sb,
                    })
                })
                .collect();
            StateDiff::Card { piles }
        }
        (State::Chip(a), State::Chip(b)) => {
            same_keys(a.cups.keys(), b.cups.keys())?;
            let cups = a
                .cups
                .iter()
                .filter_map(|(name, ca)| {
                    let cb = &b.cups[name];
                    if ca == cb {
                        return None;
                    }
                    let (t1, t2) = (ca.total(), cb.total());
                    let higher = match t1.cmp(&t2) {
                        std::cmp::Ordering::Greater => Higher::First,
                        std::cmp::Ordering::Less => Higher::Second,
                        std::cmp::Ordering::Equal => Higher::Equal,
                    };
                    Some(ChipDiff {
                        cup: name.clone(),
                        first_total: t1,
                        second_total: t2,
                        higher,
                        difference: t1.abs_diff(t2),
                        removed: multiset_minus(&ca.0, &cb.0),
                        added: multiset_minus(&cb.0, &ca.0),
                    })
                })
                .collect();
            StateDiff::Chip { cups }
        }
        _ => unreachable!("kinds checked above"),
    })
}
