// SPDX-License-Identifier: Apache-2.0

//! Piles of playing cards: add to the top, remove from the bottom.

use super::{InvalidOp, StateError};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suit {
    Hearts,
    Diamonds,
    Clubs,
    Spades,
}

impl Suit {
    pub const ALL: [Suit; 4] = [Suit::Hearts, Suit::Diamonds, Suit::Clubs, Suit::Spades];

    pub fn name(self) -> &'static str {
        match self {
            Suit::Hearts => "Hearts",
            Suit::Diamonds => "Diamonds",
            Suit::Clubs => "Clubs",
            Suit::Spades => "Spades",
        }
    }
}

/// Card value, `1` is the Ace and `11..=13` are Jack, Queen, King.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rank(u8);

impl Rank {
    pub fn new(v: u8) -> Option<Rank> {
        (1..=13).contains(&v).then_some(Rank(v))
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn name(self) -> String {
        match self.0 {
            1 => "Ace".into(),
            11 => "Jack".into(),
            12 => "Queen".into(),
            13 => "King".into(),
            v => v.to_string(),
        }
    }

    pub fn parse(s: &str) -> Option<Rank> {
        match s.to_ascii_lowercase().as_str() {
            "ace" | "a" => Rank::new(1),
            "jack" | "j" => Rank::new(11),
            "queen" | "q" => Rank::new(12),
            "king" | "k" => Rank::new(13),
            n => n.parse().ok().and_then(|v: u8| if (2..=10).contains(&v) { Rank::new(v) } else { None }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Card {
    pub rank: Rank,
    pub suit: Suit,
}

impl Card {
    pub fn new(rank: u8, suit: Suit) -> Card {
        Card { rank: Rank::new(rank).expect("rank in 1..=13"), suit }
    }

    /// All 52 cards, suit-major.
    pub fn deck() -> Vec<Card> {
        Suit::ALL.iter().flat_map(|&s| (1..=13).map(move |r| Card::new(r, s))).collect()
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} of {}", self.rank.name(), self.suit.name())
    }
}

impl FromStr for Card {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        let (rank, suit) = lower.split_once(" of ").ok_or_else(|| format!("'{s}' is not '<value> of <suit>'"))?;
        let rank = Rank::parse(rank.trim()).ok_or_else(|| format!("unknown card value in '{s}'"))?;
        let suit = match suit.trim() {
            "hearts" => Suit::Hearts,
            "diamonds" => Suit::Diamonds,
            "clubs" => Suit::Clubs,
            "spades" => Suit::Spades,
            _ => return Err(format!("unknown suit in '{s}'")),
        };
        Ok(Card { rank, suit })
    }
}

impl TryFrom<String> for Card {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Card> for String {
    fn from(c: Card) -> String {
        c.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Add,
    Remove,
}

impl Action {
    pub fn as_str(self) -> &'static str {
        match self {
            Action::Add => "add",
            Action::Remove => "remove",
        }
    }

    /// Fragment used in questions: "added to" / "removed from".
    pub fn past_phrase(self) -> &'static str {
        match self {
            Action::Add => "added to",
            Action::Remove => "removed from",
        }
    }

    pub fn preposition(self) -> &'static str {
        match self {
            Action::Add => "to",
            Action::Remove => "from",
        }
    }
}

/// `pile name -> cards`, top first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CardPiles {
    pub piles: BTreeMap<String, Vec<Card>>,
}

impl CardPiles {
    pub fn check(&self) -> Result<(), StateError> {
        if self.piles.is_empty() || self.piles.len() > 2 {
            return Err(StateError::new(format!("{} piles, expected 1 or 2", self.piles.len())));
        }
        let mut seen = BTreeSet::new();
        for c in self.piles.values().flatten() {
            if !seen.insert(*c) {
                return Err(StateError::new(format!("{c} appears twice")));
            }
        }
        Ok(())
    }

    pub fn pile(&self, name: &str) -> Option<&Vec<Card>> {
        self.piles.get(name)
    }

    pub fn contains(&self, card: Card) -> bool {
        self.piles.values().any(|p| p.contains(&card))
    }

    pub fn all_cards(&self) -> impl Iterator<Item = Card> + '_ {
        self.piles.values().flatten().copied()
    }

    pub(crate) fn validate(&self, action: Action, card: Card, pile: &str) -> Result<(), InvalidOp> {
        let cards = self.piles.get(pile).ok_or_else(|| InvalidOp::UnknownContainer { name: pile.to_string() })?;
        match action {
            Action::Add => {
                if self.contains(card) {
                    Err(InvalidOp::CardInUse { card })
                } else {
                    Ok(())
                }
            }
            Action::Remove => match cards.last() {
                None => Err(InvalidOp::EmptyPile { pile: pile.to_string() }),
                Some(&bottom) if bottom != card => {
                    Err(InvalidOp::NotBottomCard { pile: pile.to_string(), bottom, requested: card })
                }
                Some(_) => Ok(()),
            },
        }
    }

    pub(crate) fn apply(&mut self, action: Action, card: Card, pile: &str) {
        let cards = self.piles.get_mut(pile).expect("validated");
        match action {
            Action::Add => cards.insert(0, card),
            Action::Remove => {
                cards.pop();
            }
        }
    }
}
