// SPDX-License-Identifier: Apache-2.0

use super::ops::{parse_file_fragment, CARD};
use super::{CanonicalAnswer, ParseFailure, Step};
use crate::scenario::Endpoint;
use crate::sim::{chip::is_denomination, Card, Color, CoordStyle, DemoKind, Direction, Pos};
use crate::skill::Skill;
use regex::{Captures, Regex};
use std::collections::BTreeSet;
use std::sync::LazyLock;

fn re(s: &str) -> Regex {
    Regex::new(s).unwrap()
}

static ORDINAL: LazyLock<Regex> = LazyLock::new(|| re(r"(?i)\b(\d+)\s*(?:st|nd|rd|th)\b\s*[:.)\-]?"));
static PAREN_COORD: LazyLock<Regex> = LazyLock::new(|| re(r"(?i)\(\s*([a-z])\s*,\s*(\d+)\s*\)"));
static COMPACT: LazyLock<Regex> = LazyLock::new(|| re(r"(?i)\b([a-z])(\d+)\b"));
static DIRECTION: LazyLock<Regex> = LazyLock::new(|| re(r"(?i)\b(left|right|up|down)\b"));
static NUMBER_CELL: LazyLock<Regex> =
    LazyLock::new(|| re(r"(?i)\(\s*([a-z])\s*,\s*(\d+)\s*\)\s*[:=]?\s*(\d+)"));
static COLOR_CELL: LazyLock<Regex> =
    LazyLock::new(|| re(r"(?i)\(\s*([a-z])\s*,\s*(\d+)\s*\)\s*[:=]?\s*(black|white)"));
static CUP_CELL: LazyLock<Regex> =
    LazyLock::new(|| re(r"(?i)\b([a-z])(\d+)\s*[:=]\s*(no\s+coin|empty|nothing|coin)"));
static TIMES: LazyLock<Regex> = LazyLock::new(|| re(r"(?i)\b(\d+)\s*(?:times?|occurrences?|instances?)\b"));
static FILES_COUNT: LazyLock<Regex> =
    LazyLock::new(|| re(r"(?i)\b(\d+)\s*(?:`?\.?[a-z]+`?\s+)?files?\b"));
static FILE_NAME: LazyLock<Regex> = LazyLock::new(|| re(r"(?i)\b([a-z0-9_]+\.(?:txt|py|csv|json))\b"));
static CARD_RE: LazyLock<Regex> = LazyLock::new(|| re(&format!(r"(?i)\b{CARD}\b")));
static CARDS_COUNT: LazyLock<Regex> = LazyLock::new(|| re(r"(?i)\b(\d+)\s*cards?\b"));
static PILE: LazyLock<Regex> = LazyLock::new(|| re(r"(?i)\bpile\s*(\d+)\b"));
static CUP: LazyLock<Regex> = LazyLock::new(|| re(r"(?i)\bcup\s*(\d+)\b"));
static CHIPS_COUNT: LazyLock<Regex> = LazyLock::new(|| re(r"(?i)\b(\d+)\s*chips?\b"));
static INTEGER: LazyLock<Regex> = LazyLock::new(|| re(r"\b(\d+)\b"));
static NONE: LazyLock<Regex> = LazyLock::new(|| re(r"(?i)\b(none|nothing|empty|no\s+\w+)\b|^\s*0\b"));
static COMPARE: LazyLock<Regex> =
    LazyLock::new(|| re(r"(?i)\b(start|beginning|end|equal|same|neither)\b[^0-9]*?[+\-]?(\d+)"));

type Res<T> = Result<T, ParseFailure>;

/// Parses an answer without board bounds.
pub fn parse_answer(demo: DemoKind, skill: Skill, text: &str) -> Res<CanonicalAnswer> {
    parse_answer_sized(demo, skill, text, None)
}

/// Parses an answer; with `size` given, coordinates and tile numbers are
/// bounds-checked against an N×N board.
pub fn parse_answer_sized(demo: DemoKind, skill: Skill, text: &str, size: Option<u8>) -> Res<CanonicalAnswer> {
    let p = Parser { text, size };
    use DemoKind as D;
    use Skill as S;
    match (demo, skill) {
        (_, S::PredictOperation) => Err(ParseFailure::new(0, "an operation sequence (use parse_operations)")),
        (D::Number, S::RecallOrder) => p.steps(|seg, at| {
            let c = PAREN_COORD.captures(seg).ok_or_else(|| ParseFailure::new(at, "(row,column) coordinate"))?;
            let from = p.pos(&c, CoordStyle::RowCol, at)?;
            let d = DIRECTION.captures(&seg[c.get(0).unwrap().end()..])
                .ok_or_else(|| ParseFailure::new(at, "direction after coordinate"))?;
            Ok(Step::Slide { from, direction: d[1].parse::<Direction>().unwrap() })
        }),
        (D::Circle, S::RecallOrder) => {
            let directions: Vec<Direction> = DIRECTION.captures_iter(text).map(|c| c[1].parse().unwrap()).collect();
            if directions.is_empty() {
                return Err(ParseFailure::new(0, "direction words"));
            }
            Ok(CanonicalAnswer::Directions { directions })
        }
        (D::Cup, S::RecallOrder) => p.steps(|seg, at| {
            let cs: Vec<Captures> = COMPACT.captures_iter(seg).collect();
            if cs.len() < 2 {
                return Err(ParseFailure::new(at, "a coordinate pair like (a1, b2)"));
            }
            Ok(Step::swap(p.pos(&cs[0], CoordStyle::Compact, at)?, p.pos(&cs[1], CoordStyle::Compact, at)?))
        }),
        (D::File, S::RecallOrder) => p.steps(|seg, at| {
            let (cmds, _) = parse_file_fragment(&seg.replace('`', " "));
            cmds.into_iter()
                .next()
                .map(|c| Step::Command { cmd: c.normalized() })
                .ok_or_else(|| ParseFailure::new(at, "a touch, rm -rf, cp or mv command"))
        }),
        (D::Card, S::RecallOrder) => p.steps(|seg, at| {
            let c = CARD_RE.captures(seg).ok_or_else(|| ParseFailure::new(at, "a card like 6 of Hearts"))?;
            let pile = PILE.captures(seg).ok_or_else(|| ParseFailure::new(at, "a pile name"))?;
            Ok(Step::Card { card: card(&c), pile: format!("pile{}", &pile[1]) })
        }),
        (D::Chip, S::RecallOrder) => p.steps(|seg, at| {
            let cup = CUP.captures(seg).ok_or_else(|| ParseFailure::new(at, "a cup name"))?;
            let stripped = CUP.replace_all(seg, " ");
            let v = INTEGER.captures(&stripped).ok_or_else(|| ParseFailure::new(at, "a chip value"))?;
            Ok(Step::Chip { value: p.chip(&v[1], at)?, cup: format!("cup{}", &cup[1]) })
        }),
        (D::Number, S::RecallCount) => p.occurrences(CoordStyle::RowCol),
        (D::Circle, S::RecallCount) => p.occurrences(CoordStyle::ColRow),
        (D::Cup, S::RecallCount) => p.involvements(),
        (D::Number, _) => {
            let mut cells = Vec::new();
            for c in NUMBER_CELL.captures_iter(text) {
                let at = c.get(0).unwrap().start();
                let v: u8 = c[3].parse().map_err(|_| ParseFailure::new(at, "tile number"))?;
                if let Some(n) = self_size(size) {
                    if v as usize >= n * n {
                        return Err(ParseFailure::new(at, format!("tile number below {}", n * n)));
                    }
                }
                cells.push((p.pos(&c, CoordStyle::RowCol, at)?, v));
            }
            Ok(CanonicalAnswer::NumberCells { cells: p.cell_map(cells, "(a,1): 3 entries")? })
        }
        (D::Circle, _) => {
            let cells = COLOR_CELL
                .captures_iter(text)
                .map(|c| {
                    let at = c.get(0).unwrap().start();
                    let color = if c[3].eq_ignore_ascii_case("black") { Color::Black } else { Color::White };
                    Ok((p.pos(&c, CoordStyle::ColRow, at)?, color))
                })
                .collect::<Res<Vec<_>>>()?;
            Ok(CanonicalAnswer::ColorCells { cells: p.cell_map(cells, "(a,0): black entries")? })
        }
        (D::Cup, S::CompareState) => {
            let cells = CUP_CELL
                .captures_iter(text)
                .map(|c| {
                    let at = c.get(0).unwrap().start();
                    Ok((p.pos(&c, CoordStyle::Compact, at)?, c[3].eq_ignore_ascii_case("coin")))
                })
                .collect::<Res<Vec<_>>>()?;
            Ok(CanonicalAnswer::CupContents { cells: p.cell_map(cells, "a1: coin entries")? })
        }
        (D::Cup, _) => {
            let coins = COMPACT
                .captures_iter(text)
                .map(|c| p.pos(&c, CoordStyle::Compact, c.get(0).unwrap().start()))
                .collect::<Res<BTreeSet<Pos>>>()?;
            p.nonempty_or_none(coins.len(), "coin coordinates")?;
            Ok(CanonicalAnswer::Coins { coins: coins.into_iter().collect() })
        }
        (D::File, _) => {
            let (count, body) = p.count(&FILES_COUNT);
            let files: BTreeSet<String> =
                FILE_NAME.captures_iter(body).map(|c| c[1].to_ascii_lowercase()).collect();
            p.check_count(count, files.len())?;
            Ok(CanonicalAnswer::Files { files: files.into_iter().collect() })
        }
        (D::Card, _) => {
            let (count, body) = p.count(&CARDS_COUNT);
            let mut cards: Vec<Card> = CARD_RE.captures_iter(body).map(|c| card(&c)).collect();
            p.check_count(count, cards.len())?;
            if matches!(skill, S::RecallCount | S::CompareState) {
                cards.sort();
            }
            Ok(CanonicalAnswer::Cards { cards })
        }
        (D::Chip, S::CompareState) => {
            let c = COMPARE.captures(text).ok_or_else(|| ParseFailure::new(0, "'start' or 'end' and a difference"))?;
            let higher = match c[1].to_ascii_lowercase().as_str() {
                "start" | "beginning" => Some(Endpoint::Start),
                "end" => Some(Endpoint::End),
                _ => None,
            };
            let difference = c[2].parse().map_err(|_| ParseFailure::new(c.get(2).unwrap().start(), "difference"))?;
            Ok(CanonicalAnswer::ChipCompare { higher, difference })
        }
        (D::Chip, _) => {
            let stripped = CUP.replace_all(text, " ");
            let p2 = Parser { text: &stripped, size };
            let (count, body) = p2.count(&CHIPS_COUNT);
            let mut chips = INTEGER
                .captures_iter(body)
                .map(|c| p2.chip(&c[1], c.get(1).unwrap().start()))
                .collect::<Res<Vec<u32>>>()?;
            if count.is_none() {
                p2.nonempty_or_none(chips.len(), "chip values")?;
            }
            p2.check_count(count, chips.len())?;
            chips.sort_unstable();
            Ok(CanonicalAnswer::Chips { chips })
        }
    }
}

fn self_size(size: Option<u8>) -> Option<usize> {
    size.map(usize::from)
}

fn card(c: &Captures) -> Card {
    format!("{} of {}", &c[1], &c[2]).parse().expect("regex admits only cards")
}

struct Parser<'a> {
    text: &'a str,
    size: Option<u8>,
}

impl<'a> Parser<'a> {
    fn pos(&self, c: &Captures, style: CoordStyle, at: usize) -> Res<Pos> {
        let l = c[1].chars().next().unwrap();
        let n: u32 = c[2].parse().map_err(|_| ParseFailure::new(at, "coordinate number"))?;
        let p = Pos::from_parts(style, l, n).ok_or_else(|| ParseFailure::new(at, "valid coordinate"))?;
        match self.size {
            Some(s) if !p.in_bounds(s) => Err(ParseFailure::new(at, format!("coordinate on a {s}×{s} board"))),
            _ => Ok(p),
        }
    }

    fn chip(&self, s: &str, at: usize) -> Res<u32> {
        s.parse::<u32>()
            .ok()
            .filter(|v| is_denomination(*v))
            .ok_or_else(|| ParseFailure::new(at, "a chip value among 5, 10, 20, 50, 100"))
    }

    /// Empty lists must be stated explicitly ("none").
    fn nonempty_or_none(&self, n: usize, what: &str) -> Res<()> {
        if n == 0 && !NONE.is_match(self.text) {
            Err(ParseFailure::new(0, what))
        } else {
            Ok(())
        }
    }

    fn cell_map<T>(&self, mut cells: Vec<(Pos, T)>, what: &str) -> Res<Vec<(Pos, T)>> {
        self.nonempty_or_none(cells.len(), what)?;
        cells.sort_by_key(|c| c.0);
        if let Some(w) = cells.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(ParseFailure::new(0, format!("one entry per coordinate, {:?} repeats", w[0].0)));
        }
        Ok(cells)
    }

    /// An optional leading count, and the text after it.
    fn count(&self, re: &Regex) -> (Option<(usize, usize)>, &'a str) {
        match re.captures(self.text) {
            Some(c) => {
                let m = c.get(0).unwrap();
                (c[1].parse().ok().map(|n| (n, m.start())), &self.text[m.end()..])
            }
            None => (None, self.text),
        }
    }

    fn check_count(&self, count: Option<(usize, usize)>, found: usize) -> Res<()> {
        match count {
            Some((n, at)) if n != found => Err(ParseFailure::new(at, format!("{n} items as stated, found {found}"))),
            None => self.nonempty_or_none(found, "a list of items"),
            _ => Ok(()),
        }
    }

    /// Splits at ordinal markers and parses each segment.
    fn steps(&self, item: impl Fn(&str, usize) -> Res<Step>) -> Res<CanonicalAnswer> {
        let marks: Vec<(usize, usize, usize)> = ORDINAL
            .captures_iter(self.text)
            .map(|c| {
                let m = c.get(0).unwrap();
                (m.start(), m.end(), c[1].parse().unwrap_or(0))
            })
            .collect();
        if marks.is_empty() {
            return Err(ParseFailure::new(0, "ordinal-numbered items like '1st:'"));
        }
        let mut steps = Vec::with_capacity(marks.len());
        for (i, &(start, body, n)) in marks.iter().enumerate() {
            let end = marks.get(i + 1).map_or(self.text.len(), |m| m.0);
            if n == 0 {
                return Err(ParseFailure::new(start, "an ordinal of at least 1st"));
            }
            steps.push((n, item(&self.text[body..end], body)?));
        }
        steps.sort_by_key(|s| s.0);
        if steps.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(ParseFailure::new(0, "distinct ordinals"));
        }
        Ok(CanonicalAnswer::Steps { steps })
    }

    fn occurrences(&self, style: CoordStyle) -> Res<CanonicalAnswer> {
        let (count, body) = self.count(&TIMES);
        let mut positions = PAREN_COORD
            .captures_iter(body)
            .map(|c| self.pos(&c, style, c.get(0).unwrap().start()))
            .collect::<Res<Vec<Pos>>>()?;
        self.check_count(count, positions.len())?;
        positions.sort();
        Ok(CanonicalAnswer::Occurrences { positions })
    }

    fn involvements(&self) -> Res<CanonicalAnswer> {
        let (count, body) = self.count(&TIMES);
        let marks: Vec<(usize, usize)> = ORDINAL.find_iter(body).map(|m| (m.start(), m.end())).collect();
        let segments: Vec<(usize, &str)> = if marks.is_empty() {
            top_level_items(body)
        } else {
            marks
                .iter()
                .enumerate()
                .map(|(i, &(_, e))| (e, &body[e..marks.get(i + 1).map_or(body.len(), |m| m.0)]))
                .collect()
        };
        let mut items = Vec::new();
        for (at, seg) in segments {
            let mut ps = COMPACT
                .captures_iter(seg)
                .map(|c| self.pos(&c, CoordStyle::Compact, at))
                .collect::<Res<Vec<Pos>>>()?;
            if ps.is_empty() {
                continue;
            }
            ps.sort();
            items.push(ps);
        }
        self.check_count(count, items.len())?;
        Ok(CanonicalAnswer::Involvements { items })
    }
}

/// Comma-separated items, treating parenthesised groups as one item.
fn top_level_items(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' | ';' | '\n' if depth <= 0 => {
                out.push((start, &s[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &s[start..]));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::Suit;

    #[test]
    fn number_board_from_final_answer() {
        let t = "(a,1): 2, (a,2): 3, (a,3): 1, (b,1): 4, (b,2): 5, (b,3): 7, (c,1): 6, (c,2): 8, (c,3): 0";
        let CanonicalAnswer::NumberCells { cells } = parse_answer(DemoKind::Number, Skill::InferState, t).unwrap() else {
            panic!()
        };
        assert_eq!(cells.len(), 9);
        assert_eq!(cells[8], (Pos::new(2, 2), 0));
    }

    #[test]
    fn card_pile_order_kept() {
        let a = parse_answer(DemoKind::Card, Skill::InferState, "6 of Hearts, King of Clubs, 3 of Spades").unwrap();
        assert_eq!(
            a,
            CanonicalAnswer::Cards {
                cards: vec![Card::new(6, Suit::Hearts), Card::new(13, Suit::Clubs), Card::new(3, Suit::Spades)]
            }
        );
    }

    #[test]
    fn chip_count_cross_checked() {
        let a = parse_answer(DemoKind::Chip, Skill::InferState, "4 chips: 20, 5, 100, 100").unwrap();
        assert_eq!(a, CanonicalAnswer::Chips { chips: vec![5, 20, 100, 100] });
        assert!(parse_answer(DemoKind::Chip, Skill::InferState, "3 chips: 20, 5, 100, 100").is_err());
        let b = parse_answer(DemoKind::Chip, Skill::InferState, "cup0 holds 4 chips: 100, 100, 20, 5").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn chip_compare() {
        let a = parse_answer(DemoKind::Chip, Skill::CompareState, "\"end\", \"5\"").unwrap();
        assert_eq!(a, CanonicalAnswer::ChipCompare { higher: Some(Endpoint::End), difference: 5 });
        let b = parse_answer(DemoKind::Chip, Skill::CompareState, "end, +5").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn number_recall_order() {
        let a = parse_answer(DemoKind::Number, Skill::RecallOrder, "4th: (b,3), left\n3rd: (c,3), up").unwrap();
        let CanonicalAnswer::Steps { steps } = a else { panic!() };
        assert_eq!(steps[0], (3, Step::Slide { from: Pos::new(2, 2), direction: Direction::Up }));
        assert_eq!(steps[1].0, 4);
    }

    #[test]
    fn cup_involvements_both_forms() {
        let a = parse_answer(DemoKind::Cup, Skill::RecallCount, "1st: a1, 2nd: a3, 3rd: (a1,a2)").unwrap();
        let b = parse_answer(DemoKind::Cup, Skill::RecallCount, "3 times: a1, a3, (a2, a1)").unwrap();
        assert_eq!(a, b);
        assert!(parse_answer(DemoKind::Cup, Skill::RecallCount, "2 times: a1, a3, (a2, a1)").is_err());
    }

    #[test]
    fn file_counted_and_recall() {
        let a = parse_answer(DemoKind::File, Skill::InferState, "2 `.txt` files: a.txt, b.txt").unwrap();
        assert_eq!(a, CanonicalAnswer::Files { files: vec!["a.txt".into(), "b.txt".into()] });
        let r = parse_answer(DemoKind::File, Skill::RecallOrder, "2nd: `touch path0/{b.txt,a.txt}`, 3rd: rm -rf path0/c.py")
            .unwrap();
        let CanonicalAnswer::Steps { steps } = r else { panic!() };
        assert_eq!(steps.len(), 2);
    }

    #[test]
    fn bounds_checked_when_sized() {
        let t = "(d,1): 2";
        assert!(parse_answer_sized(DemoKind::Number, Skill::InferState, t, Some(3)).is_err());
        assert!(parse_answer_sized(DemoKind::Number, Skill::InferState, t, Some(4)).is_ok());
        assert!(parse_answer_sized(DemoKind::Number, Skill::InferState, "(a,1): 9", Some(3)).is_err());
    }

    #[test]
    fn none_means_empty_but_blank_fails() {
        assert_eq!(
            parse_answer(DemoKind::Card, Skill::CompareState, "none").unwrap(),
            CanonicalAnswer::Cards { cards: vec![] }
        );
        for demo in DemoKind::ALL {
            for skill in Skill::ALL {
                assert!(parse_answer(demo, skill, "").is_err(), "{demo} {skill}");
            }
        }
    }
}
