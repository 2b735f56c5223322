// SPDX-License-Identifier: Apache-2.0

//! Textual surrogate of a video: what a viewer could read off the frames.

use super::ls_lines;
use crate::answer::render::print_order;
use crate::scenario::{Endpoint, Reveal, Scenario};
use crate::sim::{CoordStyle, DemoKind, Operation, Pos, State};

fn rows_by_letter(demo: DemoKind, n: u8, cell: impl Fn(Pos) -> String) -> Vec<String> {
    let style = match demo {
        DemoKind::Circle => CoordStyle::ColRow,
        _ => CoordStyle::RowCol,
    };
    let mut cells: Vec<Pos> = (0..n).flat_map(|r| (0..n).map(move |c| Pos::new(r, c))).collect();
    cells.sort_by_key(|p| print_order(demo, *p));
    cells
        .chunks(n as usize)
        .map(|line| line.iter().map(|p| format!("{}: {}", p.fmt_style(style), cell(*p))).collect::<Vec<_>>().join(", "))
        .collect()
}

/// Number and Circle: one block per state, latent cells printed as `?`.
fn state_blocks(s: &Scenario) -> String {
    let last = s.states.len() - 1;
    let shown = match s.config.reveal {
        Reveal::Begin => 0,
        Reveal::End => last,
    };
    let mut out = String::new();
    for (i, st) in s.states.iter().enumerate() {
        out.push_str(&format!("State {}:\n", i + 1));
        let visible = i == shown;
        let lines = match st {
            State::Number(b) => rows_by_letter(DemoKind::Number, b.size, |p| match b.get(p) {
                0 => "0 (empty)".to_string(),
                v if visible => v.to_string(),
                _ => "?".to_string(),
            }),
            State::Circle(g) => rows_by_letter(DemoKind::Circle, g.size, |p| {
                let c = if visible { g.get(p).to_string() } else { "?".to_string() };
                if p == g.circle {
                    format!("{c} (circle)")
                } else {
                    c
                }
            }),
            _ => unreachable!(),
        };
        for l in lines {
            out.push_str(&l);
            out.push('\n');
        }
    }
    out
}

fn reveal_block(s: &Scenario, at: Endpoint) -> String {
    let st = s.at(at);
    let mut out = String::new();
    match st {
        State::Cup(b) => {
            out.push_str(&format!("Board state at the {at} of the video:\n"));
            for l in rows_by_letter(DemoKind::Cup, b.size, |p| if b.has_coin(p) { "coin" } else { "empty" }.to_string()) {
                out.push_str(&l);
                out.push('\n');
            }
        }
        State::Card(p) => {
            out.push_str(&format!("Reveal the cards at the {at} of the video:\n"));
            for (name, cards) in &p.piles {
                let list = if cards.is_empty() {
                    "none".to_string()
                } else {
                    cards.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
                };
                out.push_str(&format!("{name} (top\u{2192}bottom): {list}\n"));
            }
        }
        State::Chip(c) => {
            out.push_str(&format!("Reveal the chips at the {at} of the video:\n"));
            for (name, chips) in &c.cups {
                let list = if chips.is_empty() {
                    "none".to_string()
                } else {
                    chips.0.iter().map(u32::to_string).collect::<Vec<_>>().join(", ")
                };
                out.push_str(&format!("{name}: {list}\n"));
            }
        }
        _ => unreachable!(),
    }
    out
}

fn op_list(s: &Scenario) -> String {
    if s.ops.is_empty() {
        return String::new();
    }
    let (head, word) = if s.demo() == DemoKind::Cup { ("Swaps:", "Swap") } else { ("Actions:", "Action") };
    let mut out = format!("{head}\n");
    for (i, op) in s.ops.iter().enumerate() {
        let body = match op {
            Operation::CupSwap { a, b } => {
                format!("{} to {}", a.fmt_style(CoordStyle::RowCol), b.fmt_style(CoordStyle::RowCol))
            }
            o => o.to_string(),
        };
        out.push_str(&format!("{word} {}: {body}\n", i + 1));
    }
    out
}

fn file_transcript(s: &Scenario) -> String {
    let mut lines: Vec<String> = s.file_seed_commands().iter().map(|c| format!(">>>{c}")).collect();
    let listing = |st: &State| {
        let mut v = ls_lines(st);
        v.push(String::new());
        v
    };
    if s.config.reveal == Reveal::Begin {
        lines.extend(listing(s.start()));
    }
    lines.extend(s.ops.iter().map(|o| format!(">>>{o}")));
    if s.config.reveal == Reveal::End {
        lines.push(String::new());
        lines.extend(listing(s.end()));
    }
    while lines.last().is_some_and(String::is_empty) {
        lines.pop();
    }
    lines.join("\n") + "\n"
}

pub fn emit_vid2txt(s: &Scenario) -> String {
    match s.demo() {
        DemoKind::Number | DemoKind::Circle => state_blocks(s),
        DemoKind::File => file_transcript(s),
        _ => {
            let at = s.config.reveal.shown();
            let ops = op_list(s);
            let blocks: Vec<String> = match s.config.reveal {
                Reveal::Begin => vec![reveal_block(s, at), ops],
                Reveal::End => vec![ops, reveal_block(s, at)],
            };
            blocks.into_iter().filter(|b| !b.is_empty()).collect::<Vec<_>>().join("\n")
        }
    }
}
