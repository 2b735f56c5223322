// SPDX-License-Identifier: Apache-2.0

use super::{CanonicalAnswer, Step};
use crate::sim::{coord::ordinal, CoordStyle, DemoKind, Pos};
use crate::skill::Skill;

pub fn coord_style(demo: DemoKind) -> CoordStyle {
    match demo {
        DemoKind::Circle => CoordStyle::ColRow,
        DemoKind::Cup => CoordStyle::Compact,
        _ => CoordStyle::RowCol,
    }
}

/// Printed order for a demo: Circle lists column by column.
pub fn print_order(demo: DemoKind, p: Pos) -> (u8, u8) {
    if demo == DemoKind::Circle {
        (p.col, p.row)
    } else {
        (p.row, p.col)
    }
}

fn list_or_none(items: Vec<String>) -> String {
    if items.is_empty() {
        "none".into()
    } else {
        items.join(", ")
    }
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("{n} {word}")
    } else {
        format!("{n} {word}s")
    }
}

pub fn render_step(demo: DemoKind, step: &Step) -> String {
    match step {
        Step::Slide { from, direction } => format!("{}, {direction}", from.fmt_style(coord_style(demo))),
        Step::Swap { a, b } => format!("({}, {})", a.fmt_style(CoordStyle::Compact), b.fmt_style(CoordStyle::Compact)),
        Step::Command { cmd } => cmd.to_string(),
        Step::Card { card, pile } => format!("{card}, {pile}"),
        Step::Chip { value, cup } => format!("{value}, {cup}"),
    }
}

pub fn render_answer(demo: DemoKind, skill: Skill, answer: &CanonicalAnswer) -> String {
    render_answer_typed(demo, skill, answer, None)
}

/// Renders in the answer format the question asks for. `file_type` is the
/// extension a File question filters on, printed as in "2 `.txt` files".
pub fn render_answer_typed(demo: DemoKind, skill: Skill, answer: &CanonicalAnswer, file_type: Option<&str>) -> String {
    let style = coord_style(demo);
    match answer {
        CanonicalAnswer::Steps { steps } => {
            let sep = if matches!(demo, DemoKind::Card | DemoKind::Chip) { " " } else { ", " };
            steps
                .iter()
                .map(|(n, s)| format!("{}: {}", ordinal(*n), render_step(demo, s)))
                .collect::<Vec<_>>()
                .join(sep)
        }
        CanonicalAnswer::Directions { directions } => {
            list_or_none(directions.iter().map(|d| d.to_string()).collect())
        }
        CanonicalAnswer::Occurrences { positions } => format!(
            "{}: {}",
            plural(positions.len(), "time"),
            list_or_none(positions.iter().map(|p| p.fmt_style(style)).collect())
        ),
        CanonicalAnswer::Involvements { items } => list_or_none(
            items
                .iter()
                .enumerate()
                .map(|(i, ps)| {
                    let body = if ps.len() == 1 {
                        ps[0].fmt_style(CoordStyle::Compact)
                    } else {
                        format!(
                            "({})",
                            ps.iter().map(|p| p.fmt_style(CoordStyle::Compact)).collect::<Vec<_>>().join(",")
                        )
                    };
                    format!("{}: {body}", ordinal(i + 1))
                })
                .collect(),
        ),
        CanonicalAnswer::NumberCells { cells } => {
            let mut cells = cells.clone();
            cells.sort_by_key(|c| print_order(demo, c.0));
            list_or_none(cells.iter().map(|(p, v)| format!("{}: {v}", p.fmt_style(style))).collect())
        }
        CanonicalAnswer::ColorCells { cells } => {
            let mut cells = cells.clone();
            cells.sort_by_key(|c| print_order(demo, c.0));
            list_or_none(cells.iter().map(|(p, c)| format!("{}: {c}", p.fmt_style(style))).collect())
        }
        CanonicalAnswer::Coins { coins } => list_or_none(coins.iter().map(|p| p.fmt_style(style)).collect()),
        CanonicalAnswer::CupContents { cells } => list_or_none(
            cells
                .iter()
                .map(|(p, coin)| format!("{}: {}", p.fmt_style(style), if *coin { "coin" } else { "empty" }))
                .collect(),
        ),
        CanonicalAnswer::Files { files } => {
            if skill == Skill::CompareState {
                list_or_none(files.clone())
            } else {
                let label = match file_type {
                    Some(ext) => format!("`.{}` file", ext.trim_start_matches('.')),
                    None => "file".into(),
                };
                let head = plural(files.len(), &label);
                if files.is_empty() {
                    head
                } else {
                    format!("{head}: {}", files.join(", "))
                }
            }
        }
        CanonicalAnswer::Cards { cards } => {
            let list = list_or_none(cards.iter().map(|c| c.to_string()).collect());
            if skill == Skill::RecallCount {
                format!("{}: {list}", plural(cards.len(), "card"))
            } else {
                list
            }
        }
        CanonicalAnswer::Chips { chips } => {
            let head = plural(chips.len(), "chip");
            if chips.is_empty() {
                head
            } else {
                format!("{head}: {}", chips.iter().map(u32::to_string).collect::<Vec<_>>().join(", "))
            }
        }
        CanonicalAnswer::ChipCompare { higher, difference } => {
            format!("{}, {difference}", higher.map_or("equal", |e| e.as_str()))
        }
    }
}
