// SPDX-License-Identifier: Apache-2.0

//! Simulator invariants and a from-scratch replay model for boards. Shared by
//! the property suite and the acceptance run.

#![allow(dead_code)]

use latentbench_core::rng::StreamRng;
use latentbench_core::scenario::{initial_state, OpSampler};
use latentbench_core::sim::{
    apply_op, apply_sequence, trace, Action, Color, DemoKind, Direction, FileCommand, Operation, Pos, State,
    DENOMINATIONS,
};
use std::collections::BTreeSet;

/// A seeded start state and a valid op run. Boards use sides 2..=4 and
/// containers 1..=2; runs are 1..=8 ops long.
pub fn random_case(demo: DemoKind, seed: u64) -> (State, Vec<Operation>) {
    let mut rng = StreamRng::new(seed, 9);
    let size = if demo.is_board() { rng.range_inclusive(2, 4) } else { rng.range_inclusive(1, 2) } as u8;
    let len = rng.range_inclusive(1, 8);
    let start = initial_state(demo, size, &mut rng);
    let sampler = OpSampler::new([&start]);
    let mut state = start.clone();
    let mut ops = Vec::new();
    for _ in 0..len {
        // plain draws, so immediate undo pairs are exercised too
        let Some(op) = sampler.sample(&state, &mut rng) else { break };
        state = apply_op(&state, &op).expect("sampled op is valid");
        ops.push(op);
    }
    (start, ops)
}

fn delta(d: Direction) -> (i32, i32) {
    match d {
        Direction::Up => (-1, 0),
        Direction::Down => (1, 0),
        Direction::Left => (0, -1),
        Direction::Right => (0, 1),
    }
}

fn cells<T: Clone>(rows: &[Vec<T>]) -> Vec<T> {
    rows.iter().flatten().cloned().collect()
}

/// Invariants of one transition `s --op--> next`.
pub fn check_step(s: &State, op: &Operation, next: &State) -> Result<(), String> {
    next.check().map_err(|e| format!("malformed result: {e}"))?;
    match (s, op, next) {
        (State::Number(a), Operation::Slide { direction }, State::Number(b)) => {
            let (mut x, mut y) = (cells(&a.rows), cells(&b.rows));
            let changed = x.iter().zip(&y).filter(|(p, q)| p != q).count();
            if changed != 2 {
                return Err(format!("slide changed {changed} cells"));
            }
            x.sort_unstable();
            y.sort_unstable();
            if x != y || y.iter().filter(|&&v| v == 0).count() != 1 {
                return Err("cell multiset not conserved".into());
            }
            let back = apply_op(next, &Operation::Slide { direction: direction.opposite() }).map_err(|e| e.to_string())?;
            if &back != s {
                return Err("opposite slide does not restore".into());
            }
        }
        (State::Circle(a), Operation::CircleMove { .. }, State::Circle(b)) => {
            let (dr, dc) = (b.circle.row as i32 - a.circle.row as i32, b.circle.col as i32 - a.circle.col as i32);
            if dr.abs() + dc.abs() != 1 {
                return Err("circle did not move by one unit".into());
            }
            if cells(&a.rows).len() != cells(&b.rows).len() {
                return Err("cell count changed".into());
            }
            let mut again = b.rows.clone();
            for p in b.flip_mask(b.circle) {
                let c = &mut again[p.row as usize][p.col as usize];
                *c = c.flipped();
            }
            if again != a.rows {
                return Err("flip mask applied twice does not restore".into());
            }
        }
        (State::Cup(a), swap @ Operation::CupSwap { .. }, State::Cup(b)) => {
            if a.coins.len() != b.coins.len() {
                return Err("coin count changed".into());
            }
            if &apply_op(next, swap).map_err(|e| e.to_string())? != s {
                return Err("swap is not self-inverse".into());
            }
        }
        (State::File(a), Operation::FileCmd { cmd }, State::File(b)) => {
            let count = |fs: &latentbench_core::sim::FileSystem, p: &str| fs.files(p).map_or(0, |f| f.len()) as i64;
            match cmd {
                FileCommand::Touch { path, files } | FileCommand::Rm { path, files } => {
                    let sign = if matches!(cmd, FileCommand::Touch { .. }) { 1 } else { -1 };
                    let unique: BTreeSet<&String> = files.iter().collect();
                    if count(b, path) - count(a, path) != sign * unique.len() as i64 {
                        return Err(format!("`{cmd}` changed {path} by the wrong amount"));
                    }
                }
                FileCommand::Mv { .. } if a.total_files() != b.total_files() => {
                    return Err("mv changed the total file count".into());
                }
                FileCommand::Cp { .. } if b.total_files() != a.total_files() + 1 => {
                    return Err("cp did not add exactly one file".into());
                }
                _ => {}
            }
        }
        (State::Card(a), Operation::CardAct { action, card, pile }, State::Card(b)) => {
            let (before, after) = (a.pile(pile).unwrap(), b.pile(pile).unwrap());
            let expected: Vec<_> = match action {
                Action::Add => std::iter::once(*card).chain(before.iter().copied()).collect(),
                Action::Remove => before.iter().copied().filter(|c| c != card).collect(),
            };
            if after != &expected {
                return Err("pile order not preserved".into());
            }
            let all: Vec<_> = b.all_cards().collect();
            if all.iter().collect::<BTreeSet<_>>().len() != all.len() {
                return Err("card appears twice".into());
            }
        }
        (State::Chip(a), Operation::ChipAct { cup, .. }, State::Chip(b)) => {
            let (x, y) = (a.cup(cup).unwrap().len() as i64, b.cup(cup).unwrap().len() as i64);
            if (x - y).abs() != 1 {
                return Err("cup size did not change by one".into());
            }
            if b.cups.values().flat_map(|c| c.0.iter()).any(|v| !DENOMINATIONS.contains(v)) {
                return Err("illegal denomination".into());
            }
        }
        _ => return Err("state and operation kinds differ".into()),
    }
    Ok(())
}

/// From-scratch replay on plain grids; only board demos.
pub fn oracle_replay(start: &State, ops: &[Operation]) -> Option<State> {
    let mut out = start.clone();
    match &mut out {
        State::Number(b) => {
            let n = b.size as i32;
            for op in ops {
                let Operation::Slide { direction } = op else { return None };
                let gap = (0..n * n).map(|i| (i / n, i % n)).find(|&(r, c)| b.rows[r as usize][c as usize] == 0)?;
                let (dr, dc) = delta(*direction);
                let (tr, tc) = (gap.0 - dr, gap.1 - dc);
                if tr < 0 || tc < 0 || tr >= n || tc >= n {
                    return None;
                }
                b.rows[gap.0 as usize][gap.1 as usize] = b.rows[tr as usize][tc as usize];
                b.rows[tr as usize][tc as usize] = 0;
            }
        }
        State::Circle(g) => {
            let n = g.size as i32;
            for op in ops {
                let Operation::CircleMove { direction } = op else { return None };
                let (dr, dc) = delta(*direction);
                let (r, c) = (g.circle.row as i32 + dr, g.circle.col as i32 + dc);
                if r < 0 || c < 0 || r >= n || c >= n {
                    return None;
                }
                g.circle = Pos::new(r as u8, c as u8);
                for (fr, fc) in [(r, c), (r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)] {
                    if (0..n).contains(&fr) && (0..n).contains(&fc) {
                        let cell = &mut g.rows[fr as usize][fc as usize];
                        *cell = if *cell == Color::Black { Color::White } else { Color::Black };
                    }
                }
            }
        }
        State::Cup(b) => {
            for op in ops {
                let Operation::CupSwap { a, b: q } = op else { return None };
                let (ha, hq) = (b.coins.contains(a), b.coins.contains(q));
                if ha != hq {
                    if ha {
                        b.coins.remove(a);
                        b.coins.insert(*q);
                    } else {
                        b.coins.remove(q);
                        b.coins.insert(*a);
                    }
                }
            }
        }
        _ => return None,
    }
    Some(out)
}

/// Every step invariant, fold associativity over every split, and (for
/// boards up to 3×3 with at most six ops) agreement with the replay model at
/// every prefix.
pub fn check_case(start: &State, ops: &[Operation]) -> Result<(), String> {
    let states = trace(start, ops).map_err(|e| format!("sampled run rejected: {e}"))?;
    for (i, op) in ops.iter().enumerate() {
        check_step(&states[i], op, &states[i + 1]).map_err(|e| format!("op {}: {e}", i + 1))?;
    }
    let whole = apply_sequence(start, ops).map_err(|e| e.to_string())?;
    for k in 0..=ops.len() {
        let mid = apply_sequence(start, &ops[..k]).map_err(|e| e.to_string())?;
        if apply_sequence(&mid, &ops[k..]).map_err(|e| e.to_string())? != whole {
            return Err(format!("fold differs when split at {k}"));
        }
    }
    if start.board_size().is_some_and(|n| n <= 3) && ops.len() <= 6 {
        for k in 0..=ops.len() {
            if oracle_replay(start, &ops[..k]).as_ref() != Some(&states[k]) {
                return Err(format!("replay model disagrees after {k} ops"));
            }
        }
    }
    Ok(())
}
