// SPDX-License-Identifier: Apache-2.0

//! Hand-checked replays of published example videos. Each expected value is
//! first recomputed here by a small standalone model, then compared with the
//! engine and with the vid2txt layout on disk.

use latentbench_core::question::{build_item, QuestionParams};
use latentbench_core::render::emit_vid2txt;
use latentbench_core::scenario::{Endpoint, Reveal, Scenario, ScenarioConfig};
use latentbench_core::sim::{
    Action, Card, CardPiles, ChipCups, Chips, CircleGrid, Color, CupBoard, DemoKind, Direction, FileCommand,
    FileSystem, NumberBoard, Operation, Pos, State, Suit,
};
use latentbench_core::verify::judge_response;
use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

fn config(demo: DemoKind, state_size: u8) -> ScenarioConfig {
    ScenarioConfig { demo, state_size, op_count: 0, reveal: Reveal::Begin, seed: 0 }
}

fn golden_vid2txt(demo: DemoKind) -> String {
    let p = PathBuf::from(super::GOLDEN_DIR).join(format!("vid2txt/{}.txt", demo.as_str()));
    std::fs::read_to_string(p).unwrap()
}

/// "(b,2)" style, letter = row.
fn rc(s: &str) -> Pos {
    let b = s.as_bytes();
    Pos::new(b[1] - b'a', b[3] - b'1')
}

fn cup_scenario() -> Scenario {
    let start: BTreeSet<Pos> = ["(a,1)", "(b,1)", "(c,2)", "(c,3)"].into_iter().map(rc).collect();
    let swaps = [("(b,2)", "(a,1)"), ("(a,2)", "(c,2)"), ("(b,2)", "(c,1)"), ("(b,1)", "(c,3)"), ("(a,2)", "(c,3)")];
    let ops = swaps.iter().map(|(a, b)| Operation::CupSwap { a: rc(a), b: rc(b) }).collect();
    Scenario::replay(config(DemoKind::Cup, 3), State::Cup(CupBoard { size: 3, coins: start }), ops).unwrap()
}

pub fn cup_final_coins() {
    // standalone model: a set of coin positions, a swap exchanges membership
    let mut coins: BTreeSet<&str> = ["a1", "b1", "c2", "c3"].into();
    for (a, b) in [("b2", "a1"), ("a2", "c2"), ("b2", "c1"), ("b1", "c3"), ("a2", "c3")] {
        let (ha, hb) = (coins.contains(a), coins.contains(b));
        coins.remove(a);
        coins.remove(b);
        if ha {
            coins.insert(b);
        }
        if hb {
            coins.insert(a);
        }
    }
    let expected: BTreeSet<&str> = ["a2", "b1", "c1", "c3"].into();
    assert_eq!(coins, expected);

    let s = cup_scenario();
    let State::Cup(end) = s.end() else { unreachable!() };
    let got: BTreeSet<String> = end.coins.iter().map(|p| format!("{}{}", (b'a' + p.row) as char, p.col + 1)).collect();
    assert_eq!(got, expected.iter().map(|s| s.to_string()).collect());
    assert_eq!(emit_vid2txt(&s), golden_vid2txt(DemoKind::Cup));
}

fn chip_scenario() -> Scenario {
    let cups = BTreeMap::from([("cup0".to_string(), Chips(vec![20, 10, 100]))]);
    let acts = [(Action::Add, 100), (Action::Remove, 100), (Action::Add, 10), (Action::Remove, 10), (Action::Add, 5)];
    let ops = acts.iter().map(|&(action, value)| Operation::ChipAct { action, value, cup: "cup0".into() }).collect();
    Scenario::replay(config(DemoKind::Chip, 1), State::Chip(ChipCups { cups }), ops).unwrap()
}

pub fn chip_final_multiset_and_comparison() {
    let mut cup = vec![20u32, 10, 100];
    for (add, v) in [(true, 100), (false, 100), (true, 10), (false, 10), (true, 5)] {
        if add {
            cup.push(v);
        } else {
            let i = cup.iter().position(|&c| c == v).unwrap();
            cup.remove(i);
        }
    }
    let mut expected = cup.clone();
    expected.sort_unstable();
    assert_eq!(expected, vec![5, 10, 20, 100]);
    let (start_total, end_total): (u32, u32) = (130, cup.iter().sum());
    assert_eq!(end_total - start_total, 5);

    let s = chip_scenario();
    let State::Chip(end) = s.end() else { unreachable!() };
    assert_eq!(end.cups["cup0"].sorted(), expected);

    let params = QuestionParams::CompareState {
        timestamp: Endpoint::Start,
        container: Some("cup0".into()),
        variant: 0,
        after_op: None,
        other: None,
    };
    let item = build_item(&s, params);
    assert_eq!(item.ground_truth.rendered, "end, 5");
    assert!(judge_response(&s, &item, "Final Answer: end, +5").is_correct());
    assert!(!judge_response(&s, &item, "Final Answer: start, 5").is_correct());
    assert_eq!(emit_vid2txt(&s), golden_vid2txt(DemoKind::Chip));
}

fn card(rank: u8, suit: Suit) -> Card {
    Card::new(rank, suit)
}

pub fn card_final_pile() {
    use Suit::*;
    let start = vec![card(13, Diamonds), card(8, Diamonds), card(3, Diamonds), card(8, Clubs), card(7, Spades)];
    let adds = [card(12, Clubs), card(1, Hearts), card(11, Diamonds), card(11, Clubs)];

    // standalone model: index 0 is the top
    let mut pile: Vec<(u8, Suit)> = start.iter().map(|c| (c.rank.value(), c.suit)).collect();
    for c in &adds {
        pile.insert(0, (c.rank.value(), c.suit));
    }
    assert_eq!(pile.pop(), Some((7, Spades)));
    let expected =
        vec![(11, Clubs), (11, Diamonds), (1, Hearts), (12, Clubs), (13, Diamonds), (8, Diamonds), (3, Diamonds), (8, Clubs)];
    assert_eq!(pile, expected);

    let mut ops: Vec<Operation> =
        adds.iter().map(|c| Operation::CardAct { action: Action::Add, card: *c, pile: "pile0".into() }).collect();
    ops.push(Operation::CardAct { action: Action::Remove, card: card(7, Spades), pile: "pile0".into() });
    let piles = BTreeMap::from([("pile0".to_string(), start)]);
    let s = Scenario::replay(config(DemoKind::Card, 1), State::Card(CardPiles { piles }), ops).unwrap();
    let State::Card(end) = s.end() else { unreachable!() };
    let got: Vec<(u8, Suit)> = end.piles["pile0"].iter().map(|c| (c.rank.value(), c.suit)).collect();
    assert_eq!(got, expected);
    assert_eq!(emit_vid2txt(&s), golden_vid2txt(DemoKind::Card));
}

fn names(list: &str) -> Vec<String> {
    list.split(',').map(str::to_string).collect()
}

pub fn file_final_listing() {
    let seed = "o.txt,v.py,d.csv,n.csv,m.txt,p.py,y.txt,v.csv,g.txt,b.csv,h.csv,x.txt";
    let steps = [
        (false, "g.txt,p.py,b.csv,n.csv"),
        (true, "s.csv,q.json,l.py,w.csv,n.csv,j.json,q.py"),
        (false, "l.py,o.txt"),
        (true, "f.csv,a.json,z.json,w.py,x.py,l.txt,a.csv"),
        (true, "e.csv,i.json,t.txt,d.json"),
    ];

    let mut dir: BTreeSet<String> = names(seed).into_iter().collect();
    for (touch, list) in steps {
        for f in names(list) {
            let changed = if touch { dir.insert(f) } else { dir.remove(&f) };
            assert!(changed, "precondition of the published transcript");
        }
    }
    assert_eq!(dir.len(), 24);
    assert_eq!(dir.iter().filter(|f| f.ends_with(".csv")).count(), 9);

    let fs = FileSystem { paths: BTreeMap::from([("path0".to_string(), names(seed).into_iter().collect())]) };
    let ops = steps
        .iter()
        .map(|&(touch, list)| {
            let (path, files) = ("path0".to_string(), names(list));
            Operation::FileCmd { cmd: if touch { FileCommand::Touch { path, files } } else { FileCommand::Rm { path, files } } }
        })
        .collect();
    let s = Scenario::replay(config(DemoKind::File, 1), State::File(fs), ops).unwrap();
    let State::File(end) = s.end() else { unreachable!() };
    assert_eq!(end.paths["path0"], dir);
    assert_eq!(emit_vid2txt(&s), golden_vid2txt(DemoKind::File));
}

type Grid = [[u8; 3]; 3];

/// Tile-centric slide: the tile next to the gap moves `d` into it.
fn oracle_slide(g: &Grid, d: Direction) -> Option<Grid> {
    let (gr, gc) = (0..9).map(|i| (i / 3, i % 3)).find(|&(r, c)| g[r][c] == 0).unwrap();
    let (dr, dc): (isize, isize) = match d {
        Direction::Up => (-1, 0),
        Direction::Down => (1, 0),
        Direction::Left => (0, -1),
        Direction::Right => (0, 1),
    };
    let (tr, tc) = (gr as isize - dr, gc as isize - dc);
    if !(0..3).contains(&tr) || !(0..3).contains(&tc) {
        return None;
    }
    let mut out = *g;
    out[gr][gc] = g[tr as usize][tc as usize];
    out[tr as usize][tc as usize] = 0;
    Some(out)
}

pub fn number_case_study_replay() {
    let start: Grid = [[2, 1, 7], [4, 3, 0], [6, 5, 8]];
    let answer: Grid = [[2, 3, 1], [4, 5, 7], [6, 8, 0]];
    let dirs = [Direction::Up, Direction::Down, Direction::Left, Direction::Right];

    // every five-move sequence whose last move is the tile at (c,3) sliding left
    let mut consistent = Vec::new();
    for code in 0..4usize.pow(5) {
        let seq: Vec<Direction> = (0..5).map(|i| dirs[code / 4usize.pow(i) % 4]).collect();
        let mut g = start;
        let mut ok = true;
        for (i, &d) in seq.iter().enumerate() {
            if i == 4 && !(d == Direction::Left && g[2][2] != 0 && g[2][1] == 0) {
                ok = false;
                break;
            }
            match oracle_slide(&g, d) {
                Some(n) => g = n,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            consistent.push((seq, g));
        }
    }
    let hits: Vec<&Vec<Direction>> = consistent.iter().filter(|(_, g)| *g == answer).map(|(s, _)| s).collect();
    assert_eq!(hits.len(), 1, "exactly one narration-consistent sequence reproduces the answer");
    let seq = hits[0].clone();
    assert_eq!(seq, vec![Direction::Down, Direction::Right, Direction::Up, Direction::Up, Direction::Left]);

    let board = NumberBoard::from_rows(start.iter().map(|r| r.to_vec()).collect()).unwrap();
    let ops = seq.iter().map(|&direction| Operation::Slide { direction }).collect();
    let s = Scenario::replay(config(DemoKind::Number, 3), State::Number(board), ops).unwrap();
    let State::Number(end) = s.end() else { unreachable!() };
    assert_eq!(end.rows, answer.iter().map(|r| r.to_vec()).collect::<Vec<_>>());
    assert_eq!(emit_vid2txt(&s), golden_vid2txt(DemoKind::Number));
}

pub fn circle_layout() {
    use Color::*;
    // printed column by column: letter = column, number = row from 0
    let cols = [[White, Black, White], [White, White, Black], [White, White, White]];
    let rows = (0..3).map(|r| (0..3).map(|c| cols[c][r]).collect()).collect();
    let grid = CircleGrid { size: 3, rows, circle: Pos::new(2, 0) };
    let moves = [Direction::Up, Direction::Right, Direction::Right, Direction::Down, Direction::Up];
    let ops = moves.iter().map(|&direction| Operation::CircleMove { direction }).collect();
    let s = Scenario::replay(config(DemoKind::Circle, 3), State::Circle(grid), ops).unwrap();
    assert_eq!(emit_vid2txt(&s), golden_vid2txt(DemoKind::Circle));
}
