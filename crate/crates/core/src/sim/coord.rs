// SPDX-License-Identifier: Apache-2.0

//! Grid positions, directions and the three printed coordinate styles.
//!
//! Internally a position is a zero-based `(row, col)` pair with row 0 at the
//! top. How it is printed depends on the demonstration:
//!
//! | style        | example | letter | digit            |
//! |--------------|---------|--------|------------------|
//! | `RowCol`     | `(a,1)` | row    | column, 1-based  |
//! | `ColRow`     | `(a,0)` | column | row, 0-based     |
//! | `Compact`    | `a1`    | row    | column, 1-based  |

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Pos {
    pub row: u8,
    pub col: u8,
}

impl Pos {
    pub const fn new(row: u8, col: u8) -> Self {
        Self { row, col }
    }

    pub fn in_bounds(self, size: u8) -> bool {
        self.row < size && self.col < size
    }

    /// The neighbouring position one step in `dir`, if it lies on a `size`-board.
    pub fn step(self, dir: Direction, size: u8) -> Option<Pos> {
        let (dr, dc) = dir.delta();
        let row = self.row as i16 + dr as i16;
        let col = self.col as i16 + dc as i16;
        if row < 0 || col < 0 || row >= size as i16 || col >= size as i16 {
            None
        } else {
            Some(Pos::new(row as u8, col as u8))
        }
    }

    /// In-bounds orthogonal neighbours.
    pub fn neighbors(self, size: u8) -> impl Iterator<Item = Pos> {
        Direction::ALL.into_iter().filter_map(move |d| self.step(d, size))
    }

    pub fn fmt_style(self, style: CoordStyle) -> String {
        match style {
            CoordStyle::RowCol => format!("({},{})", letter(self.row), self.col + 1),
            CoordStyle::ColRow => format!("({},{})", letter(self.col), self.row),
            CoordStyle::Compact => format!("{}{}", letter(self.row), self.col + 1),
        }
    }

    /// Inverse of [`Pos::fmt_style`] given the letter and the printed number.
    pub fn from_parts(style: CoordStyle, letter_ch: char, number: u32) -> Option<Pos> {
        let l = letter_index(letter_ch)?;
        let n = u8::try_from(number).ok()?;
        match style {
            CoordStyle::RowCol | CoordStyle::Compact => {
                if n == 0 {
                    None
                } else {
                    Some(Pos::new(l, n - 1))
                }
            }
            CoordStyle::ColRow => Some(Pos::new(n, l)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordStyle {
    RowCol,
    ColRow,
    Compact,
}

pub fn letter(i: u8) -> char {
    (b'a' + i) as char
}

pub fn letter_index(c: char) -> Option<u8> {
    let c = c.to_ascii_lowercase();
    if c.is_ascii_lowercase() {
        Some(c as u8 - b'a')
    } else {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Left,
    Right,
    Up,
    Down,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::Left, Direction::Right, Direction::Up, Direction::Down];

    /// `(row, col)` offset; up decreases the row.
    pub fn delta(self) -> (i8, i8) {
        match self {
            Direction::Left => (0, -1),
            Direction::Right => (0, 1),
            Direction::Up => (-1, 0),
            Direction::Down => (1, 0),
        }
    }

    pub fn opposite(self) -> Direction {
        match self {
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Left => "left",
            Direction::Right => "right",
            Direction::Up => "up",
            Direction::Down => "down",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "left" => Ok(Direction::Left),
            "right" => Ok(Direction::Right),
            "up" => Ok(Direction::Up),
            "down" => Ok(Direction::Down),
            other => Err(format!("unknown direction '{other}'")),
        }
    }
}

/// English ordinal: 1st, 2nd, 3rd, 4th, 11th, 12th, 13th, 21st...
pub fn ordinal(n: usize) -> String {
    let suffix = match (n % 10, n % 100) {
        (1, r) if r != 11 => "st",
        (2, r) if r != 12 => "nd",
        (3, r) if r != 13 => "rd",
        _ => "th",
    };
    format!("{n}{suffix}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn styles_print_as_documented() {
        let p = Pos::new(2, 0);
        assert_eq!(p.fmt_style(CoordStyle::RowCol), "(c,1)");
        assert_eq!(p.fmt_style(CoordStyle::ColRow), "(a,2)");
        assert_eq!(p.fmt_style(CoordStyle::Compact), "c1");
    }

    #[test]
    fn from_parts_inverts_every_style() {
        for style in [CoordStyle::RowCol, CoordStyle::ColRow, CoordStyle::Compact] {
            for row in 0..6 {
                for col in 0..6 {
                    let p = Pos::new(row, col);
                    let text = p.fmt_style(style);
                    let digits: u32 = text.chars().filter(|c| c.is_ascii_digit()).collect::<String>().parse().unwrap();
                    let l = text.chars().find(|c| c.is_ascii_lowercase()).unwrap();
                    assert_eq!(Pos::from_parts(style, l, digits), Some(p));
                }
            }
        }
    }

    #[test]
    fn step_respects_bounds() {
        let corner = Pos::new(0, 0);
        assert_eq!(corner.step(Direction::Up, 3), None);
        assert_eq!(corner.step(Direction::Left, 3), None);
        assert_eq!(corner.step(Direction::Down, 3), Some(Pos::new(1, 0)));
        assert_eq!(corner.neighbors(3).count(), 2);
        assert_eq!(Pos::new(1, 1).neighbors(3).count(), 4);
    }

    #[test]
    fn ordinals() {
        let got: Vec<String> = [1, 2, 3, 4, 11, 12, 13, 21, 22, 101, 111].iter().map(|&n| ordinal(n)).collect();
        assert_eq!(got, ["1st", "2nd", "3rd", "4th", "11th", "12th", "13th", "21st", "22nd", "101st", "111th"]);
    }
}
