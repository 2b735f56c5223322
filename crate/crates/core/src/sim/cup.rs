// SPDX-License-Identifier: Apache-2.0

//! Cup-and-coin shuffle board.

use super::coord::Pos;
use super::{InvalidOp, StateError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CupBoard {
    pub size: u8,
    /// Positions whose cup hides a coin.
    pub coins: BTreeSet<Pos>,
}

impl CupBoard {
    pub fn check(&self) -> Result<(), StateError> {
        if self.size == 0 {
            return Err(StateError::new("empty cup board"));
        }
        if let Some(p) = self.coins.iter().find(|p| !p.in_bounds(self.size)) {
            return Err(StateError::new(format!("coin at {p:?} is off the board")));
        }
        Ok(())
    }

    pub fn has_coin(&self, p: Pos) -> bool {
        self.coins.contains(&p)
    }

    pub fn positions(&self) -> impl Iterator<Item = Pos> {
        let n = self.size;
        (0..n).flat_map(move |r| (0..n).map(move |c| Pos::new(r, c)))
    }

    pub(crate) fn validate(&self, a: Pos, b: Pos) -> Result<(), InvalidOp> {
        for p in [a, b] {
            if !p.in_bounds(self.size) {
                return Err(InvalidOp::PositionOffBoard { pos: p });
            }
        }
        if a == b {
            return Err(InvalidOp::SamePosition);
        }
        Ok(())
    }

    pub(crate) fn apply(&mut self, a: Pos, b: Pos) {
        let (ca, cb) = (self.has_coin(a), self.has_coin(b));
        for (p, coin) in [(a, cb), (b, ca)] {
            if coin {
                self.coins.insert(p);
            } else {
                self.coins.remove(&p);
            }
        }
    }
}
