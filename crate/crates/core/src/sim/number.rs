// SPDX-License-Identifier: Apache-2.0

//! Sliding number puzzle.

use super::coord::{Direction, Pos};
use super::{InvalidOp, StateError};
use serde::{Deserialize, Serialize};

/// `rows[r][c]` holds the tile number, `0` is the empty square.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NumberBoard {
    pub size: u8,
    pub rows: Vec<Vec<u8>>,
}

impl NumberBoard {
    pub fn from_rows(rows: Vec<Vec<u8>>) -> Result<Self, StateError> {
        let board = NumberBoard { size: rows.len() as u8, rows };
        board.check()?;
        Ok(board)
    }

    /// Cells must be a bijection onto `0..size²`.
    pub fn check(&self) -> Result<(), StateError> {
        let n = self.size as usize;
        if n == 0 || self.rows.len() != n || self.rows.iter().any(|r| r.len() != n) {
            return Err(StateError::new(format!("number board is not {n}x{n}")));
        }
        let mut seen = vec![false; n * n];
        for &v in self.rows.iter().flatten() {
            let v = v as usize;
            if v >= n * n || seen[v] {
                return Err(StateError::new(format!("tile {v} is out of range or repeated")));
            }
            seen[v] = true;
        }
        Ok(())
    }

    pub fn get(&self, p: Pos) -> u8 {
        self.rows[p.row as usize][p.col as usize]
    }

    fn set(&mut self, p: Pos, v: u8) {
        self.rows[p.row as usize][p.col as usize] = v;
    }

    pub fn empty_pos(&self) -> Pos {
        for (r, row) in self.rows.iter().enumerate() {
            if let Some(c) = row.iter().position(|&v| v == 0) {
                return Pos::new(r as u8, c as u8);
            }
        }
        unreachable!("checked board always holds an empty square")
    }

    /// Position of the tile that a `dir` slide moves into the empty square.
    pub fn slide_source(&self, dir: Direction) -> Option<Pos> {
        self.empty_pos().step(dir.opposite(), self.size)
    }

    pub fn positions(&self) -> impl Iterator<Item = Pos> {
        let n = self.size;
        (0..n).flat_map(move |r| (0..n).map(move |c| Pos::new(r, c)))
    }

    pub(crate) fn validate(&self, dir: Direction) -> Result<(), InvalidOp> {
        self.slide_source(dir).map(|_| ()).ok_or(InvalidOp::OutOfBounds)
    }

    pub(crate) fn apply(&mut self, dir: Direction) {
        let empty = self.empty_pos();
        let src = self.slide_source(dir).expect("validated slide");
        let tile = self.get(src);
        self.set(empty, tile);
        self.set(src, 0);
    }
}
