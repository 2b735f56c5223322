// SPDX-License-Identifier: Apache-2.0

//! Minimal SVG writer and the per-demonstration scene drawings.
//!
//! Every element that shows a latent value carries the class `latent`, so a
//! frame's mask soundness can be checked by scanning its classes.

use super::RenderStyle;
use crate::sim::{Action, Card, CardPiles, ChipCups, CircleGrid, Color, CupBoard, NumberBoard, Operation, Pos, Suit};
use std::fmt::Write;

pub(crate) const LATENT: &str = "latent";

pub(crate) struct Svg {
    buf: String,
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Svg {
    pub(crate) fn new(style: &RenderStyle, tag: &str, background: &str) -> Self {
        let (w, h) = (style.width, style.height);
        let mut buf = String::new();
        let _ = write!(
            buf,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" data-tag=\"{tag}\">\n\
             <rect class=\"bg\" x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"{background}\"/>\n"
        );
        Svg { buf }
    }

    pub(crate) fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str, class: &str) {
        let _ = writeln!(
            self.buf,
            "<rect class=\"{class}\" x=\"{x:.1}\" y=\"{y:.1}\" width=\"{w:.1}\" height=\"{h:.1}\" rx=\"4\" fill=\"{fill}\" stroke=\"#333\"/>"
        );
    }

    pub(crate) fn circle(&mut self, cx: f64, cy: f64, r: f64, fill: &str, stroke: &str, class: &str) {
        let _ = writeln!(
            self.buf,
            "<circle class=\"{class}\" cx=\"{cx:.1}\" cy=\"{cy:.1}\" r=\"{r:.1}\" fill=\"{fill}\" stroke=\"{stroke}\" stroke-width=\"2\"/>"
        );
    }

    pub(crate) fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64) {
        let _ = writeln!(
            self.buf,
            "<line class=\"grid\" x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\" stroke=\"#666\" stroke-width=\"2\"/>"
        );
    }

    pub(crate) fn text(&mut self, x: f64, y: f64, size: f64, fill: &str, class: &str, s: &str) {
        let _ = writeln!(
            self.buf,
            "<text class=\"{class}\" x=\"{x:.1}\" y=\"{y:.1}\" font-size=\"{size:.1}\" font-family=\"monospace\" \
             text-anchor=\"middle\" dominant-baseline=\"central\" fill=\"{fill}\">{}</text>",
            esc(s)
        );
    }

    pub(crate) fn text_left(&mut self, x: f64, y: f64, size: f64, fill: &str, class: &str, s: &str) {
        let _ = writeln!(
            self.buf,
            "<text class=\"{class}\" x=\"{x:.1}\" y=\"{y:.1}\" font-size=\"{size:.1}\" font-family=\"monospace\" \
             xml:space=\"preserve\" fill=\"{fill}\">{}</text>",
            esc(s)
        );
    }

    pub(crate) fn finish(mut self) -> String {
        self.buf.push_str("</svg>\n");
        self.buf
    }
}

/// Number of elements whose class list contains `latent`.
pub fn latent_glyphs(svg: &str) -> usize {
    svg.match_indices("class=\"")
        .filter(|(i, _)| {
            let rest = &svg[i + 7..];
            let end = rest.find('"').unwrap_or(0);
            rest[..end].split_whitespace().any(|c| c == LATENT)
        })
        .count()
}

fn lerp(a: f64, b: f64, t: f64) -> f64 {
    a + (b - a) * t
}

/// Square-board geometry with room for coordinate labels.
struct Grid {
    x0: f64,
    y0: f64,
    cell: f64,
}

impl Grid {
    fn new(style: &RenderStyle, n: u8) -> Self {
        let margin = 48.0;
        let side = (style.width.min(style.height) as f64 - 2.0 * margin).max(40.0);
        let cell = side / n as f64;
        let x0 = (style.width as f64 - side) / 2.0;
        let y0 = (style.height as f64 - side) / 2.0;
        Grid { x0, y0, cell }
    }

    fn origin(&self, p: Pos) -> (f64, f64) {
        (self.x0 + p.col as f64 * self.cell, self.y0 + p.row as f64 * self.cell)
    }

    fn center(&self, p: Pos) -> (f64, f64) {
        let (x, y) = self.origin(p);
        (x + self.cell / 2.0, y + self.cell / 2.0)
    }

    /// Row letters on the left, column labels on top.
    fn labels(&self, svg: &mut Svg, n: u8, col_label: impl Fn(u8) -> String, row_label: impl Fn(u8) -> String) {
        for i in 0..n {
            let c = self.x0 + (i as f64 + 0.5) * self.cell;
            svg.text(c, self.y0 - 20.0, 18.0, "#333", "label", &col_label(i));
            let r = self.y0 + (i as f64 + 0.5) * self.cell;
            svg.text(self.x0 - 22.0, r, 18.0, "#333", "label", &row_label(i));
        }
    }
}

/// Moving element of an operation frame; `t` runs from 0 (before) to 1 (after).
pub(crate) struct Motion<'a> {
    pub op: &'a Operation,
    pub t: f64,
}

pub(crate) fn number(style: &RenderStyle, tag: &str, b: &NumberBoard, masked: bool, motion: Option<&Motion>) -> String {
    let mut svg = Svg::new(style, tag, "#fafafa");
    let g = Grid::new(style, b.size);
    g.labels(&mut svg, b.size, |i| (i + 1).to_string(), |i| crate::sim::coord::letter(i).to_string());
    let moving = motion.and_then(|m| match m.op {
        Operation::Slide { direction } => b.slide_source(*direction).map(|src| (src, b.empty_pos(), m.t)),
        _ => None,
    });
    let pad = g.cell * 0.05;
    let tile = |svg: &mut Svg, x: f64, y: f64, v: u8, class: &str| {
        if masked {
            svg.rect(x + pad, y + pad, g.cell - 2.0 * pad, g.cell - 2.0 * pad, "#2f6fd6", &format!("tile masked {class}"));
        } else {
            svg.rect(x + pad, y + pad, g.cell - 2.0 * pad, g.cell - 2.0 * pad, "#f3e2b3", &format!("tile {class}"));
            svg.text(x + g.cell / 2.0, y + g.cell / 2.0, g.cell * 0.4, "#222", LATENT, &v.to_string());
        }
    };
    for p in b.positions() {
        let (x, y) = g.origin(p);
        svg.rect(x, y, g.cell, g.cell, "#ffffff", "cell");
        let v = b.get(p);
        if v == 0 || moving.is_some_and(|(src, _, _)| src == p) {
            continue;
        }
        tile(&mut svg, x, y, v, "");
    }
    if let Some((src, dst, t)) = moving {
        let (x1, y1) = g.origin(src);
        let (x2, y2) = g.origin(dst);
        tile(&mut svg, lerp(x1, x2, t), lerp(y1, y2, t), b.get(src), "moving");
    }
    svg.finish()
}

pub(crate) fn circle(style: &RenderStyle, tag: &str, gr: &CircleGrid, masked: bool, motion: Option<&Motion>) -> String {
    let mut svg = Svg::new(style, tag, "#e9dcc0");
    let g = Grid::new(style, gr.size);
    g.labels(&mut svg, gr.size, |i| crate::sim::coord::letter(i).to_string(), |i| i.to_string());
    let n = gr.size as f64;
    for i in 0..gr.size {
        let c = g.x0 + (i as f64 + 0.5) * g.cell;
        svg.line(c, g.y0 + g.cell / 2.0, c, g.y0 + (n - 0.5) * g.cell);
        let r = g.y0 + (i as f64 + 0.5) * g.cell;
        svg.line(g.x0 + g.cell / 2.0, r, g.x0 + (n - 0.5) * g.cell, r);
    }
    for p in gr.positions() {
        let (cx, cy) = g.center(p);
        if masked {
            svg.circle(cx, cy, g.cell * 0.3, "#9a9a9a", "#555", "piece masked");
        } else {
            let fill = if gr.get(p) == Color::Black { "#111111" } else { "#ffffff" };
            svg.circle(cx, cy, g.cell * 0.3, fill, "#555", &format!("piece {LATENT}"));
        }
    }
    let (mut cx, mut cy) = g.center(gr.circle);
    if let Some(Motion { op: Operation::CircleMove { direction }, t }) = motion {
        if let Some(next) = gr.circle.step(*direction, gr.size) {
            let (nx, ny) = g.center(next);
            cx = lerp(cx, nx, *t);
            cy = lerp(cy, ny, *t);
        }
    }
    svg.circle(cx, cy, g.cell * 0.4, "none", "#e0201b", "circle");
    svg.finish()
}

pub(crate) fn cup(style: &RenderStyle, tag: &str, b: &CupBoard, lifted: bool, motion: Option<&Motion>) -> String {
    let mut svg = Svg::new(style, tag, "#f4efe6");
    let g = Grid::new(style, b.size);
    g.labels(&mut svg, b.size, |i| (i + 1).to_string(), |i| crate::sim::coord::letter(i).to_string());
    let swap = motion.and_then(|m| match m.op {
        Operation::CupSwap { a, b } => Some((*a, *b, m.t)),
        _ => None,
    });
    let w = g.cell * 0.7;
    let draw_cup = |svg: &mut Svg, cx: f64, cy: f64, class: &str| {
        let lift = if lifted { g.cell * 0.3 } else { 0.0 };
        svg.rect(cx - w / 2.0, cy - w / 2.0 - lift, w, w * 0.8, "#c0392b", class);
    };
    for p in b.positions() {
        let (cx, cy) = g.center(p);
        svg.rect(cx - g.cell / 2.0, cy - g.cell / 2.0, g.cell, g.cell, "#ffffff", "cell");
        if lifted {
            if b.has_coin(p) {
                svg.circle(cx, cy + g.cell * 0.2, g.cell * 0.15, "#f1c40f", "#8a6d00", &format!("coin {LATENT}"));
            } else {
                svg.text(cx, cy + g.cell * 0.2, g.cell * 0.14, "#777", &format!("empty {LATENT}"), "empty");
            }
        }
        if swap.is_some_and(|(a, c, _)| p == a || p == c) {
            continue;
        }
        draw_cup(&mut svg, cx, cy, "cup");
    }
    if let Some((a, c, t)) = swap {
        let (ax, ay) = g.center(a);
        let (bx, by) = g.center(c);
        // the two cups pass on opposite sides of the straight line
        let bump = (std::f64::consts::PI * t).sin() * g.cell * 0.3;
        draw_cup(&mut svg, lerp(ax, bx, t), lerp(ay, by, t) - bump, "cup moving");
        draw_cup(&mut svg, lerp(bx, ax, t), lerp(by, ay, t) + bump, "cup moving");
    }
    svg.finish()
}

fn suit_symbol(s: Suit) -> (&'static str, &'static str) {
    match s {
        Suit::Hearts => ("\u{2665}", "#c0392b"),
        Suit::Diamonds => ("\u{2666}", "#c0392b"),
        Suit::Clubs => ("\u{2663}", "#111111"),
        Suit::Spades => ("\u{2660}", "#111111"),
    }
}

pub(crate) fn card_face(c: Card) -> String {
    let r = match c.rank.value() {
        1 => "A".to_string(),
        11 => "J".to_string(),
        12 => "Q".to_string(),
        13 => "K".to_string(),
        v => v.to_string(),
    };
    format!("{r}{}", suit_symbol(c.suit).0)
}

/// Column layout for container demos.
struct Columns {
    x0: f64,
    width: f64,
    top: f64,
    bottom: f64,
}

impl Columns {
    fn new(style: &RenderStyle, n: usize) -> Self {
        let margin = 40.0;
        Columns {
            x0: margin,
            width: (style.width as f64 - 2.0 * margin) / n.max(1) as f64,
            top: 110.0,
            bottom: style.height as f64 - 30.0,
        }
    }

    fn center(&self, i: usize) -> f64 {
        self.x0 + (i as f64 + 0.5) * self.width
    }
}

const HAND: (f64, f64) = (0.5, 40.0);

fn hand(svg: &mut Svg, x: f64, y: f64) {
    svg.circle(x, y, 14.0, "#f2c6a0", "#8d5a3b", "hand");
}

pub(crate) fn card(style: &RenderStyle, tag: &str, st: &CardPiles, faces_up: bool, motion: Option<&Motion>) -> String {
    let mut svg = Svg::new(style, tag, "#1e6b3a");
    let names: Vec<&String> = st.piles.keys().collect();
    let cols = Columns::new(style, names.len());
    let (cw, ch) = (84.0, 56.0);
    let longest = st.piles.values().map(Vec::len).max().unwrap_or(0) + 1;
    let dy = ((cols.bottom - cols.top - ch) / longest as f64).min(34.0);
    let act = motion.and_then(|m| match m.op {
        Operation::CardAct { action, card, pile } => Some((*action, *card, pile.as_str(), m.t)),
        _ => None,
    });
    let draw = |svg: &mut Svg, x: f64, y: f64, c: Card, shown: bool, class: &str| {
        svg.rect(x - cw / 2.0, y, cw, ch, if shown { "#ffffff" } else { "#23408e" }, if shown { "card face" } else { "card back" });
        if shown {
            let (_, color) = suit_symbol(c.suit);
            svg.text(x, y + ch / 2.0, 22.0, color, class, &card_face(c));
        }
    };
    for (i, name) in names.iter().enumerate() {
        let x = cols.center(i);
        svg.text(x, cols.top - 30.0, 18.0, "#ffffff", "label", name);
        let pile = &st.piles[*name];
        for (k, c) in pile.iter().enumerate() {
            draw(&mut svg, x, cols.top + k as f64 * dy, *c, faces_up, LATENT);
        }
        if let Some((action, c, p, t)) = act {
            if p != name.as_str() {
                continue;
            }
            let hx = style.width as f64 * HAND.0;
            let (sx, sy, ex, ey) = match action {
                // lands on top: the pile shifts down by one slot as it settles
                Action::Add => (hx, HAND.1, x, cols.top - dy),
                Action::Remove => (x, cols.top + pile.len() as f64 * dy, hx, HAND.1),
            };
            let (mx, my) = (lerp(sx, ex, t), lerp(sy, ey, t));
            draw(&mut svg, mx, my, c, true, "op");
            hand(&mut svg, mx, my - 8.0);
        }
    }
    svg.finish()
}

pub(crate) fn chip(style: &RenderStyle, tag: &str, st: &ChipCups, open: bool, motion: Option<&Motion>) -> String {
    let mut svg = Svg::new(style, tag, "#3b2f2a");
    let names: Vec<&String> = st.cups.keys().collect();
    let cols = Columns::new(style, names.len());
    let act = motion.and_then(|m| match m.op {
        Operation::ChipAct { action, value, cup } => Some((*action, *value, cup.as_str(), m.t)),
        _ => None,
    });
    let r = 20.0;
    let per_row = 4usize;
    for (i, name) in names.iter().enumerate() {
        let x = cols.center(i);
        let cup_w = (cols.width * 0.8).min(260.0);
        let cup_top = cols.top + 40.0;
        let cup_h = cols.bottom - cup_top;
        svg.text(x, cols.top - 30.0, 18.0, "#ffffff", "label", name);
        svg.rect(x - cup_w / 2.0, cup_top, cup_w, cup_h, "#d9d4c7", "cup");
        if open {
            for (k, v) in st.cups[*name].0.iter().enumerate() {
                let cx = x - cup_w / 2.0 + (k % per_row) as f64 * (cup_w / per_row as f64) + cup_w / per_row as f64 / 2.0;
                let cy = cup_top + 30.0 + (k / per_row) as f64 * (2.0 * r + 8.0);
                svg.circle(cx, cy, r, "#b03a2e", "#ffffff", "chip");
                svg.text(cx, cy, 13.0, "#ffffff", LATENT, &v.to_string());
            }
        } else {
            svg.rect(x - cup_w / 2.0 - 6.0, cup_top - 14.0, cup_w + 12.0, 20.0, "#6d6a61", "lid");
        }
        if let Some((action, v, c, t)) = act {
            if c != name.as_str() {
                continue;
            }
            let hx = style.width as f64 * HAND.0;
            let (sx, sy, ex, ey) = match action {
                Action::Add => (hx, HAND.1, x, cup_top + 20.0),
                Action::Remove => (x, cup_top + 20.0, hx, HAND.1),
            };
            let (mx, my) = (lerp(sx, ex, t), lerp(sy, ey, t));
            svg.circle(mx, my, r, "#b03a2e", "#ffffff", "chip moving");
            svg.text(mx, my, 13.0, "#ffffff", "op", &v.to_string());
            hand(&mut svg, mx + r, my - r);
        }
    }
    svg.finish()
}

/// Terminal canvas with the last lines of a transcript. Lines longer than
/// the canvas wrap; the view scrolls to keep the newest line visible.
pub(crate) fn terminal(style: &RenderStyle, tag: &str, lines: &[(String, &str)]) -> String {
    let mut svg = Svg::new(style, tag, "#101418");
    let size = 15.0;
    let lh = size * 1.4;
    let cols = ((style.width as f64 - 24.0) / (size * 0.6)).max(10.0) as usize;
    let rows = ((style.height as f64 - 24.0) / lh).max(1.0) as usize;
    let mut wrapped: Vec<(String, &str)> = Vec::new();
    for (l, class) in lines {
        let chars: Vec<char> = l.chars().collect();
        if chars.is_empty() {
            wrapped.push((String::new(), class));
        }
        for chunk in chars.chunks(cols) {
            wrapped.push((chunk.iter().collect(), class));
        }
    }
    let skip = wrapped.len().saturating_sub(rows);
    for (i, (l, class)) in wrapped.iter().skip(skip).enumerate() {
        svg.text_left(12.0, 24.0 + i as f64 * lh, size, "#d8dee9", class, l);
    }
    svg.finish()
}
