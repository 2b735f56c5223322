// SPDX-License-Identifier: Apache-2.0

//! Red-circle flip grid.

use super::coord::{Direction, Pos};
use super::{InvalidOp, StateError};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn flipped(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Color::Black => "black",
            Color::White => "white",
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CircleGrid {
    pub size: u8,
    /// `rows[r][c]`
    pub rows: Vec<Vec<Color>>,
    pub circle: Pos,
}

impl CircleGrid {
    pub fn check(&self) -> Result<(), StateError> {
        let n = self.size as usize;
        if n == 0 || self.rows.len() != n || self.rows.iter().any(|r| r.len() != n) {
            return Err(StateError::new(format!("circle grid is not {n}x{n}")));
        }
        if !self.circle.in_bounds(self.size) {
            return Err(StateError::new("circle outside the grid"));
        }
        Ok(())
    }

    pub fn get(&self, p: Pos) -> Color {
        self.rows[p.row as usize][p.col as usize]
    }

    pub fn positions(&self) -> impl Iterator<Item = Pos> {
        let n = self.size;
        (0..n).flat_map(move |r| (0..n).map(move |c| Pos::new(r, c)))
    }

    /// Cells flipped when the circle arrives at `at`: the cell itself plus its
    /// in-bounds orthogonal neighbours.
    pub fn flip_mask(&self, at: Pos) -> Vec<Pos> {
        std::iter::once(at).chain(at.neighbors(self.size)).collect()
    }

    pub(crate) fn validate(&self, dir: Direction) -> Result<(), InvalidOp> {
        self.circle.step(dir, self.size).map(|_| ()).ok_or(InvalidOp::OutOfBounds)
    }

    pub(crate) fn apply(&mut self, dir: Direction) {
        let dest = self.circle.step(dir, self.size).expect("validated move");
        self.circle = dest;
        for p in self.flip_mask(dest) {
            let cell = &mut self.rows[p.row as usize][p.col as usize];
            *cell = cell.flipped();
        }
    }
}
