// SPDX-License-Identifier: Apache-2.0

use super::truth::{recall_items, shown_file_commands};
use super::{Criterion, QuestionParams};
use crate::rng::StreamRng;
use crate::scenario::{file_name_pool, OpSampler, Scenario};
use crate::sim::{self, Action, DemoKind, FileCmdKind, FileCommand, Operation, State};
use crate::skill::Skill;
use std::collections::BTreeSet;

const TARGET_TRIES: usize = 64;

/// Draws the parameters of one question. Deterministic in `rng`.
pub fn sample_question_params(scenario: &Scenario, skill: Skill, rng: &mut StreamRng) -> QuestionParams {
    match skill {
        Skill::RecallOrder => recall_order(scenario, rng),
        Skill::RecallCount => recall_count(scenario, rng),
        Skill::InferState => infer_state(scenario, rng),
        Skill::CompareState => compare_state(scenario, rng),
        Skill::PredictState => predict_state(scenario, rng),
        Skill::PredictOperation => predict_operation(scenario, rng),
    }
}

fn choose<T: Clone>(rng: &mut StreamRng, items: &[T]) -> T {
    rng.choose(items).expect("non-empty choice").clone()
}

fn recall_order(s: &Scenario, rng: &mut StreamRng) -> QuestionParams {
    let (cmd, action) = match s.demo() {
        DemoKind::File => {
            let mut kinds = vec![None];
            let shown = shown_file_commands(s);
            kinds.extend(FileCmdKind::ALL.into_iter().filter(|k| shown.iter().any(|c| c.kind() == *k)).map(Some));
            (choose(rng, &kinds), None)
        }
        DemoKind::Card | DemoKind::Chip => {
            let present: Vec<Action> = [Action::Add, Action::Remove]
                .into_iter()
                .filter(|a| s.ops.iter().any(|o| op_action(o) == Some(*a)))
                .collect();
            (None, Some(choose(rng, &present)))
        }
        _ => (None, None),
    };
    let total = recall_items(s, cmd, action).len();
    let len = rng.range_inclusive(3, 5).min(total);
    let start_id = rng.range_inclusive(1, total - len + 1);
    QuestionParams::RecallOrder { start_id, end_id: start_id + len - 1, cmd, action }
}

pub(super) fn op_action(op: &Operation) -> Option<Action> {
    match op {
        Operation::CardAct { action, .. } | Operation::ChipAct { action, .. } => Some(*action),
        _ => None,
    }
}

fn recall_count(s: &Scenario, rng: &mut StreamRng) -> QuestionParams {
    let criterion = match s.demo() {
        DemoKind::Number | DemoKind::Circle => {
            let dirs: BTreeSet<_> = s
                .ops
                .iter()
                .filter_map(|o| match o {
                    Operation::Slide { direction } | Operation::CircleMove { direction } => Some(*direction),
                    _ => None,
                })
                .collect();
            Criterion::Direction { direction: choose(rng, &dirs.into_iter().collect::<Vec<_>>()) }
        }
        DemoKind::Cup => {
            let rows: BTreeSet<u8> = s
                .ops
                .iter()
                .flat_map(|o| match o {
                    Operation::CupSwap { a, b } => vec![a.row, b.row],
                    _ => vec![],
                })
                .collect();
            Criterion::Row { row: choose(rng, &rows.into_iter().collect::<Vec<_>>()) }
        }
        DemoKind::File => {
            let shown = shown_file_commands(s);
            let mut kinds = vec![None];
            kinds.extend(FileCmdKind::ALL.into_iter().filter(|k| shown.iter().any(|c| c.kind() == *k)).map(Some));
            let cmd = choose(rng, &kinds);
            let files: BTreeSet<String> = shown
                .iter()
                .filter(|c| cmd.is_none_or(|k| c.kind() == k))
                .flat_map(|c| c.file_args().into_iter().map(str::to_string))
                .collect();
            let mut exts = vec![None];
            let present: BTreeSet<&str> = files.iter().filter_map(|f| sim::file::extension(f)).collect();
            exts.extend(present.into_iter().map(|e| Some(e.to_string())));
            Criterion::Files { cmd, ext: choose(rng, &exts) }
        }
        DemoKind::Card | DemoKind::Chip => {
            let pairs: BTreeSet<(Action, String)> = s
                .ops
                .iter()
                .filter_map(|o| Some((op_action(o)?, o.container()?.to_string())))
                .collect();
            let (action, container) = choose(rng, &pairs.into_iter().collect::<Vec<_>>());
            Criterion::Action { action, container }
        }
    };
    QuestionParams::RecallCount { criterion }
}

fn pick_container(s: &Scenario, rng: &mut StreamRng) -> Option<String> {
    let names = s.start().container_names();
    if names.is_empty() {
        None
    } else {
        Some(choose(rng, &names))
    }
}

/// `None` or one extension present among `files`.
fn pick_file_type<'a>(rng: &mut StreamRng, files: impl Iterator<Item = &'a String>) -> Option<String> {
    let mut opts = vec![None];
    let present: BTreeSet<&str> = files.filter_map(|f| sim::file::extension(f)).collect();
    opts.extend(present.into_iter().map(|e| Some(e.to_string())));
    choose(rng, &opts)
}

fn files_at<'a>(state: &'a State, path: &str) -> Vec<&'a String> {
    match state {
        State::File(fs) => fs.files(path).map(|f| f.iter().collect()).unwrap_or_default(),
        _ => Vec::new(),
    }
}

fn infer_state(s: &Scenario, rng: &mut StreamRng) -> QuestionParams {
    let timestamp = s.latent();
    let container = pick_container(s, rng);
    let file_type = match (s.demo(), &container) {
        (DemoKind::File, Some(p)) => pick_file_type(rng, files_at(s.at(timestamp), p).into_iter()),
        _ => None,
    };
    QuestionParams::InferState { timestamp, container, file_type }
}

fn compare_state(s: &Scenario, rng: &mut StreamRng) -> QuestionParams {
    let timestamp = s.latent();
    let names = s.start().container_names();
    let mut q = QuestionParams::CompareState { timestamp, container: None, variant: 0, after_op: None, other: None };
    let QuestionParams::CompareState { container, variant, after_op, other, .. } = &mut q else { unreachable!() };
    match s.demo() {
        DemoKind::File => {
            *variant = (s.config.seed % if names.len() >= 2 { 3 } else { 2 }) as usize;
            if *variant < 2 {
                *container = Some("path0".into());
            } else {
                // prefer a comparison with a non-empty answer
                let mut combos = Vec::new();
                for k in 1..=s.ops.len() {
                    for p1 in &names {
                        for p2 in &names {
                            if p1 != p2 {
                                combos.push((k, p1.clone(), p2.clone()));
                            }
                        }
                    }
                }
                rng.shuffle(&mut combos);
                let nonempty = combos.iter().position(|(k, p1, p2)| {
                    let st = &s.states[*k];
                    let a: BTreeSet<_> = files_at(st, p1).into_iter().collect();
                    let b: BTreeSet<_> = files_at(st, p2).into_iter().collect();
                    a.difference(&b).next().is_some()
                });
                let (k, p1, p2) = combos[nonempty.unwrap_or(0)].clone();
                *after_op = Some(k);
                *container = Some(p1);
                *other = Some(p2);
            }
        }
        DemoKind::Card | DemoKind::Chip => {
            let mut shuffled = names.clone();
            rng.shuffle(&mut shuffled);
            let differs = |c: &String| !s.start().scoped_eq(s.end(), Some(c));
            let chip_differs = |c: &String| match (s.start(), s.end()) {
                (State::Chip(a), State::Chip(b)) => a.cups[c].total() != b.cups[c].total(),
                _ => false,
            };
            let pick = shuffled
                .iter()
                .find(|c| if s.demo() == DemoKind::Chip { chip_differs(c) } else { card_diff_nonempty(s, c, timestamp) })
                .or_else(|| shuffled.iter().find(|c| differs(c)))
                .unwrap_or(&shuffled[0]);
            *container = Some(pick.clone());
        }
        _ => {}
    }
    q
}

fn card_diff_nonempty(s: &Scenario, pile: &str, t: crate::scenario::Endpoint) -> bool {
    match (s.at(t), s.at(t.other())) {
        (State::Card(a), State::Card(b)) => a.piles[pile].iter().any(|c| !b.piles[pile].contains(c)),
        _ => false,
    }
}

fn predict_state(s: &Scenario, rng: &mut StreamRng) -> QuestionParams {
    let timestamp = s.latent();
    let anchor = s.at(timestamp);
    let count = if s.demo() == DemoKind::File { 1 } else { rng.range_inclusive(3, 5) };
    // walks that end where they began make a degenerate question
    let walk = |rng: &mut StreamRng| {
        OpSampler::new(&s.states).walk(anchor, count, rng).expect("legal states always admit an operation")
    };
    let mut picked = walk(rng);
    for _ in 0..16 {
        if picked.1.last() != Some(anchor) {
            break;
        }
        picked = walk(rng);
    }
    let (extra_ops, states) = picked;
    let result = states.last().unwrap();
    let (container, file_type) = match s.demo() {
        DemoKind::File => {
            let Operation::FileCmd { cmd } = &extra_ops[0] else { unreachable!() };
            let path = match cmd {
                FileCommand::Touch { path, .. } | FileCommand::Rm { path, .. } => path.clone(),
                FileCommand::Cp { src, dst, .. } | FileCommand::Mv { src, dst, .. } => {
                    choose(rng, &[src.clone(), dst.clone()])
                }
            };
            let ft = pick_file_type(rng, files_at(result, &path).into_iter());
            (Some(path), ft)
        }
        DemoKind::Card | DemoKind::Chip => {
            let touched: BTreeSet<String> = extra_ops.iter().filter_map(|o| o.container().map(str::to_string)).collect();
            (Some(choose(rng, &touched.into_iter().collect::<Vec<_>>())), None)
        }
        _ => (None, None),
    };
    QuestionParams::PredictState { timestamp, extra_ops, container, file_type }
}

fn predict_operation(s: &Scenario, rng: &mut StreamRng) -> QuestionParams {
    let timestamp = s.latent();
    let anchor = s.at(timestamp).clone();
    if let State::File(fs) = &anchor {
        let names: Vec<String> = fs.paths.keys().cloned().collect();
        let path = choose(rng, &names);
        let present: Vec<String> = fs.paths[&path].iter().cloned().collect();
        let free: Vec<String> = file_name_pool().into_iter().filter(|f| !fs.paths[&path].contains(f)).collect();
        let mode = if present.is_empty() { 0 } else { rng.below(3) };
        let mut ops = Vec::new();
        if mode != 1 {
            let k = rng.range_inclusive(1, 3.min(free.len()));
            let files = rng.sample_indices(free.len(), k).into_iter().map(|i| free[i].clone()).collect();
            ops.push(Operation::FileCmd { cmd: FileCommand::Touch { path: path.clone(), files } });
        }
        if mode != 0 {
            let k = rng.range_inclusive(1, 3.min(present.len()));
            let files = rng.sample_indices(present.len(), k).into_iter().map(|i| present[i].clone()).collect();
            ops.push(Operation::FileCmd { cmd: FileCommand::Rm { path: path.clone(), files } });
        }
        let target = sim::apply_sequence(&anchor, &ops).expect("touch of free names and rm of present names");
        return QuestionParams::PredictOperation { timestamp, container: Some(path), target };
    }
    let container = pick_container(s, rng);
    let mut fallback = None;
    for _ in 0..TARGET_TRIES {
        let mut sampler = OpSampler::new(&s.states).restricted(container.as_deref());
        let count = rng.range_inclusive(2, 4);
        let (_, states) = sampler.walk(&anchor, count, rng).expect("legal states always admit an operation");
        let target = states.last().unwrap().clone();
        if !anchor.scoped_eq(&target, container.as_deref()) {
            return QuestionParams::PredictOperation { timestamp, container, target };
        }
        fallback.get_or_insert(target);
    }
    log::warn!("{}: predict-operation target equals the anchor", s.id);
    QuestionParams::PredictOperation { timestamp, container, target: fallback.unwrap() }
}
