// SPDX-License-Identifier: Apache-2.0

//! Cups holding poker chips.

use super::card::Action;
use super::{InvalidOp, StateError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

pub const DENOMINATIONS: [u32; 5] = [5, 10, 20, 50, 100];

pub fn is_denomination(v: u32) -> bool {
    DENOMINATIONS.contains(&v)
}

/// A multiset of chip values. The vector keeps display order; equality and
/// hashing ignore it.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Chips(pub Vec<u32>);

impl Chips {
    pub fn sorted(&self) -> Vec<u32> {
        let mut v = self.0.clone();
        v.sort_unstable();
        v
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.contains(&v)
    }
}

impl PartialEq for Chips {
    fn eq(&self, other: &Self) -> bool {
        self.sorted() == other.sorted()
    }
}

impl Eq for Chips {}

impl Hash for Chips {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.sorted().hash(state);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChipCups {
    pub cups: BTreeMap<String, Chips>,
}

impl ChipCups {
    pub fn check(&self) -> Result<(), StateError> {
        if self.cups.is_empty() || self.cups.len() > 2 {
            return Err(StateError::new(format!("{} cups, expected 1 or 2", self.cups.len())));
        }
        if let Some(v) = self.cups.values().flat_map(|c| c.0.iter()).find(|v| !is_denomination(**v)) {
            return Err(StateError::new(format!("illegal chip value {v}")));
        }
        Ok(())
    }

    pub fn cup(&self, name: &str) -> Option<&Chips> {
        self.cups.get(name)
    }

    pub(crate) fn validate(&self, action: Action, value: u32, cup: &str) -> Result<(), InvalidOp> {
        let chips = self.cups.get(cup).ok_or_else(|| InvalidOp::UnknownContainer { name: cup.to_string() })?;
        if !is_denomination(value) {
            return Err(InvalidOp::IllegalDenomination { value });
        }
        if action == Action::Remove && !chips.contains(value) {
            return Err(InvalidOp::ChipAbsent { cup: cup.to_string(), value });
        }
        Ok(())
    }

    pub(crate) fn apply(&mut self, action: Action, value: u32, cup: &str) {
        let chips = &mut self.cups.get_mut(cup).expect("validated").0;
        match action {
            Action::Add => chips.push(value),
            Action::Remove => {
                let at = chips.iter().rposition(|&v| v == value).expect("validated");
                chips.remove(at);
            }
        }
    }
}
