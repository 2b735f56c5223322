// SPDX-License-Identifier: Apache-2.0

use super::sample::op_action;
use super::{format_ops, Criterion, GroundTruth, QuestionParams};
use crate::answer::{render_answer, render_answer_typed, CanonicalAnswer, Step};
use crate::scenario::{Endpoint, Scenario};
use crate::sim::{
    self, apply_op, apply_sequence, Action, Card, DemoKind, Direction, FileCmdKind, FileCommand, Operation, Pos, State,
};
use crate::skill::Skill;
use std::collections::{BTreeSet, HashSet, VecDeque};

/// Commands printed in a File video: the seeding `touch` per path, then the operations.
pub fn shown_file_commands(s: &Scenario) -> Vec<FileCommand> {
    let mut out = s.file_seed_commands();
    out.extend(s.ops.iter().filter_map(|o| match o {
        Operation::FileCmd { cmd } => Some(cmd.clone()),
        _ => None,
    }));
    out
}

/// The ordered items a Recall Order question enumerates.
pub(super) fn recall_items(s: &Scenario, cmd: Option<FileCmdKind>, action: Option<Action>) -> Vec<Step> {
    if s.demo() == DemoKind::File {
        return shown_file_commands(s)
            .into_iter()
            .filter(|c| cmd.is_none_or(|k| c.kind() == k))
            .map(|c| Step::Command { cmd: c.normalized() })
            .collect();
    }
    s.ops
        .iter()
        .enumerate()
        .filter(|(_, o)| action.is_none() || op_action(o) == action)
        .map(|(i, o)| match (o, &s.states[i]) {
            (Operation::Slide { direction }, State::Number(b)) => {
                Step::Slide { from: b.slide_source(*direction).expect("valid slide"), direction: *direction }
            }
            (Operation::CircleMove { direction }, State::Circle(g)) => Step::Slide { from: g.circle, direction: *direction },
            (Operation::CupSwap { a, b }, _) => Step::swap(*a, *b),
            (Operation::CardAct { card, pile, .. }, _) => Step::Card { card: *card, pile: pile.clone() },
            (Operation::ChipAct { value, cup, .. }, _) => Step::Chip { value: *value, cup: cup.clone() },
            _ => unreachable!("scenario ops match their states"),
        })
        .collect()
}

fn files_of(state: &State, path: &str, ext: Option<&str>) -> Vec<String> {
    match state {
        State::File(fs) => fs
            .files(path)
            .map(|f| f.iter().filter(|n| ext.is_none_or(|e| sim::file::extension(n) == Some(e))).cloned().collect())
            .unwrap_or_default(),
        _ => Vec::new(),
    }
}

/// Full-state answer for Infer State and Predict State.
pub(super) fn state_answer(state: &State, container: Option<&str>, file_type: Option<&str>) -> CanonicalAnswer {
    let c = container.unwrap_or_default();
    match state {
        State::Number(b) => CanonicalAnswer::NumberCells { cells: b.positions().map(|p| (p, b.get(p))).collect() },
        State::Circle(g) => CanonicalAnswer::ColorCells { cells: g.positions().map(|p| (p, g.get(p))).collect() },
        State::Cup(b) => CanonicalAnswer::Coins { coins: b.coins.iter().copied().collect() },
        State::File(_) => CanonicalAnswer::Files { files: files_of(state, c, file_type) },
        State::Card(p) => CanonicalAnswer::Cards { cards: p.pile(c).cloned().unwrap_or_default() },
        State::Chip(cups) => CanonicalAnswer::Chips { chips: cups.cup(c).map(|x| x.sorted()).unwrap_or_default() },
    }
}

/// Text shown for a Predict Operation target.
pub(super) fn target_text(demo: DemoKind, target: &State, container: Option<&str>) -> String {
    let c = container.unwrap_or_default();
    let list = |v: Vec<String>| if v.is_empty() { "none".to_string() } else { v.join(", ") };
    match target {
        State::File(_) => list(files_of(target, c, None)),
        State::Card(p) => list(p.pile(c).map(|cs| cs.iter().map(Card::to_string).collect()).unwrap_or_default()),
        State::Chip(cups) => {
            list(cups.cup(c).map(|x| x.sorted().iter().map(u32::to_string).collect()).unwrap_or_default())
        }
        _ => render_answer(demo, Skill::InferState, &state_answer(target, None, None)),
    }
}

fn differing(s: &Scenario) -> Vec<Pos> {
    match sim::diff_states(s.start(), s.end()).expect("same scenario") {
        sim::StateDiff::Number { cells } => cells.iter().map(|c| c.pos).collect(),
        sim::StateDiff::Circle { cells, .. } => cells.iter().map(|c| c.pos).collect(),
        sim::StateDiff::Cup { cells } => cells.iter().map(|c| c.pos).collect(),
        _ => Vec::new(),
    }
}

fn compare_answer(s: &Scenario, params: &QuestionParams) -> CanonicalAnswer {
    let QuestionParams::CompareState { timestamp, container, after_op, other, .. } = params else { unreachable!() };
    let t = s.at(*timestamp);
    let c = container.as_deref().unwrap_or_default();
    match t {
        State::Number(b) => CanonicalAnswer::NumberCells { cells: differing(s).into_iter().map(|p| (p, b.get(p))).collect() },
        State::Circle(g) => CanonicalAnswer::ColorCells { cells: differing(s).into_iter().map(|p| (p, g.get(p))).collect() },
        State::Cup(b) => CanonicalAnswer::CupContents {
            cells: differing(s).into_iter().map(|p| (p, b.has_coin(p))).collect(),
        },
        State::File(_) => {
            let (first, second, p2) = match (after_op, other) {
                (Some(k), Some(o)) => (&s.states[*k], &s.states[*k], o.as_str()),
                _ => {
                    let QuestionParams::CompareState { variant, .. } = params else { unreachable!() };
                    if *variant == 0 {
                        (s.start(), s.end(), c)
                    } else {
                        (s.end(), s.start(), c)
                    }
                }
            };
            let b: BTreeSet<String> = files_of(second, p2, None).into_iter().collect();
            CanonicalAnswer::Files { files: files_of(first, c, None).into_iter().filter(|f| !b.contains(f)).collect() }
        }
        State::Card(_) => {
            let (State::Card(a), State::Card(b)) = (t, s.at(timestamp.other())) else { unreachable!() };
            let mut cards: Vec<Card> = a.piles[c].iter().filter(|x| !b.piles[c].contains(x)).copied().collect();
            cards.sort();
            CanonicalAnswer::Cards { cards }
        }
        State::Chip(_) => {
            let (State::Chip(a), State::Chip(b)) = (s.start(), s.end()) else { unreachable!() };
            let (t1, t2) = (a.cups[c].total(), b.cups[c].total());
            let higher = match t1.cmp(&t2) {
                std::cmp::Ordering::Greater => Some(Endpoint::Start),
                std::cmp::Ordering::Less => Some(Endpoint::End),
                std::cmp::Ordering::Equal => None,
            };
            CanonicalAnswer::ChipCompare { higher, difference: t1.abs_diff(t2) }
        }
    }
}

fn recall_count_answer(s: &Scenario, criterion: &Criterion) -> CanonicalAnswer {
    match criterion {
        Criterion::Direction { direction } => {
            let mut positions: Vec<Pos> = recall_items(s, None, None)
                .into_iter()
                .filter_map(|st| match st {
                    Step::Slide { from, direction: d } if d == *direction => Some(from),
                    _ => None,
                })
                .collect();
            positions.sort();
            CanonicalAnswer::Occurrences { positions }
        }
        Criterion::Row { row } => CanonicalAnswer::Involvements {
            items: s
                .ops
                .iter()
                .filter_map(|o| {
                    let Operation::CupSwap { a, b } = o else { return None };
                    let mut ps: Vec<Pos> = [*a, *b].into_iter().filter(|p| p.row == *row).collect();
                    ps.sort();
                    (!ps.is_empty()).then_some(ps)
                })
                .collect(),
        },
        Criterion::Files { cmd, ext } => {
            let files: BTreeSet<String> = shown_file_commands(s)
                .iter()
                .filter(|c| cmd.is_none_or(|k| c.kind() == k))
                .flat_map(|c| c.file_args().into_iter().map(str::to_string))
                .filter(|f| ext.as_deref().is_none_or(|e| sim::file::extension(f) == Some(e)))
                .collect();
            CanonicalAnswer::Files { files: files.into_iter().collect() }
        }
        Criterion::Action { action, container } => {
            let picked = s.ops.iter().filter(|o| op_action(o) == Some(*action) && o.container() == Some(container));
            if s.demo() == DemoKind::Card {
                let mut cards: Vec<Card> = picked
                    .filter_map(|o| match o {
                        Operation::CardAct { card, .. } => Some(*card),
                        _ => None,
                    })
                    .collect();
                cards.sort();
                CanonicalAnswer::Cards { cards }
            } else {
                let mut chips: Vec<u32> = picked
                    .filter_map(|o| match o {
                        Operation::ChipAct { value, .. } => Some(*value),
                        _ => None,
                    })
                    .collect();
                chips.sort_unstable();
                CanonicalAnswer::Chips { chips }
            }
        }
    }
}

/// Ground truth of a question, computed from the scenario by rule.
pub fn derive_ground_truth(s: &Scenario, params: &QuestionParams) -> GroundTruth {
    let demo = s.demo();
    let skill = params.skill();
    let (canonical, file_type) = match params {
        QuestionParams::RecallOrder { start_id, end_id, cmd, action } => {
            let items = recall_items(s, *cmd, *action);
            let slice = &items[start_id - 1..*end_id];
            let c = if demo == DemoKind::Circle {
                CanonicalAnswer::Directions {
                    directions: slice
                        .iter()
                        .map(|st| match st {
                            Step::Slide { direction, .. } => *direction,
                            _ => unreachable!(),
                        })
                        .collect(),
                }
            } else {
                CanonicalAnswer::Steps { steps: (*start_id..=*end_id).zip(slice.iter().cloned()).collect() }
            };
            (c, None)
        }
        QuestionParams::RecallCount { criterion } => {
            let ft = match criterion {
                Criterion::Files { ext, .. } => ext.clone(),
                _ => None,
            };
            (recall_count_answer(s, criterion), ft)
        }
        QuestionParams::InferState { timestamp, container, file_type } => (
            state_answer(s.at(*timestamp), container.as_deref(), file_type.as_deref()),
            file_type.clone(),
        ),
        QuestionParams::CompareState { .. } => (compare_answer(s, params), None),
        QuestionParams::PredictState { timestamp, extra_ops, container, file_type } => {
            let result = apply_sequence(s.at(*timestamp), extra_ops).expect("extra ops valid from the anchor");
            (state_answer(&result, container.as_deref(), file_type.as_deref()), file_type.clone())
        }
        QuestionParams::PredictOperation { timestamp, container, target } => {
            let witness = construct_witness(s.at(*timestamp), target, container.as_deref())
                .expect("generated targets are reachable");
            return GroundTruth {
                canonical: None,
                rendered: format_ops(demo, &witness),
                target: Some(target.clone()),
                witness: Some(witness),
            };
        }
    };
    GroundTruth {
        rendered: render_answer_typed(demo, skill, &canonical, file_type.as_deref()),
        canonical: Some(canonical),
        target: None,
        witness: None,
    }
}

const SEARCH_DEPTH: usize = 10;
const SEARCH_NODES: usize = 500_000;

/// One valid operation sequence taking `anchor` to a state that matches
/// `target` within the question scope. Breadth-first for Number and Circle,
/// constructive otherwise.
pub fn construct_witness(anchor: &State, target: &State, container: Option<&str>) -> Option<Vec<Operation>> {
    let c = container.unwrap_or_default();
    let ops = match (anchor, target) {
        (State::Number(_), State::Number(_)) | (State::Circle(_), State::Circle(_)) => {
            return search(anchor, |s| s.scoped_eq(target, None));
        }
        (State::Cup(a), State::Cup(b)) => {
            let from: Vec<Pos> = a.coins.difference(&b.coins).copied().collect();
            let to: Vec<Pos> = b.coins.difference(&a.coins).copied().collect();
            if from.len() != to.len() {
                return None;
            }
            from.into_iter().zip(to).map(|(a, b)| Operation::CupSwap { a, b }).collect()
        }
        (State::File(a), State::File(b)) => {
            let (fa, fb) = (a.files(c)?, b.files(c)?);
            let add: Vec<String> = fb.difference(fa).cloned().collect();
            let del: Vec<String> = fa.difference(fb).cloned().collect();
            let mut ops = Vec::new();
            if !add.is_empty() {
                ops.push(Operation::FileCmd { cmd: FileCommand::Touch { path: c.into(), files: add } });
            }
            if !del.is_empty() {
                ops.push(Operation::FileCmd { cmd: FileCommand::Rm { path: c.into(), files: del } });
            }
            ops
        }
        (State::Card(a), State::Card(b)) => {
            let (cur, want) = (a.pile(c)?, b.pile(c)?);
            // keep the longest top part of `cur` that can sit under new cards
            let keep = (0..=cur.len().min(want.len()))
                .rev()
                .find(|&m| cur[..m] == want[want.len() - m..])
                .unwrap_or(0);
            let mut ops: Vec<Operation> = cur[keep..]
                .iter()
                .rev()
                .map(|card| Operation::CardAct { action: Action::Remove, card: *card, pile: c.into() })
                .collect();
            ops.extend(
                want[..want.len() - keep]
                    .iter()
                    .rev()
                    .map(|card| Operation::CardAct { action: Action::Add, card: *card, pile: c.into() }),
            );
            ops
        }
        (State::Chip(a), State::Chip(b)) => {
            let (mut cur, want) = (a.cup(c)?.0.clone(), b.cup(c)?.sorted());
            let mut ops = Vec::new();
            for v in a.cup(c)?.sorted() {
                if cur.iter().filter(|x| **x == v).count() > want.iter().filter(|x| **x == v).count() {
                    let i = cur.iter().rposition(|x| *x == v).unwrap();
                    cur.remove(i);
                    ops.push(Operation::ChipAct { action: Action::Remove, value: v, cup: c.into() });
                }
            }
            for v in want {
                if let Some(i) = cur.iter().position(|x| *x == v) {
                    cur.remove(i);
                } else {
                    ops.push(Operation::ChipAct { action: Action::Add, value: v, cup: c.into() });
                }
            }
            ops
        }
        _ => return None,
    };
    let reached = apply_sequence(anchor, &ops).ok()?;
    reached.scoped_eq(target, container).then_some(ops)
}

fn search(anchor: &State, goal: impl Fn(&State) -> bool) -> Option<Vec<Operation>> {
    if goal(anchor) {
        return Some(Vec::new());
    }
    let moves: Vec<Operation> = match anchor {
        State::Number(_) => Direction::ALL.into_iter().map(|direction| Operation::Slide { direction }).collect(),
        _ => Direction::ALL.into_iter().map(|direction| Operation::CircleMove { direction }).collect(),
    };
    // (state, parent index, op from parent, depth)
    let mut nodes: Vec<(State, usize, Option<Operation>, usize)> = vec![(anchor.clone(), 0, None, 0)];
    let mut seen: HashSet<State> = HashSet::from([anchor.clone()]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if nodes[i].3 >= SEARCH_DEPTH || nodes.len() > SEARCH_NODES {
            continue;
        }
        for op in &moves {
            let Ok(next) = apply_op(&nodes[i].0, op) else { continue };
            if !seen.insert(next.clone()) {
                continue;
            }
            let done = goal(&next);
            nodes.push((next, i, Some(op.clone()), nodes[i].3 + 1));
            let j = nodes.len() - 1;
            if done {
                let mut path = Vec::new();
                let mut k = j;
                while let Some(op) = nodes[k].2.clone() {
                    path.push(op);
                    k = nodes[k].1;
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(j);
        }
    }
    None
}
