// SPDX-License-Identifier: Apache-2.0

//! Witness perturbations for the simulate-and-verify checks.

#![allow(dead_code)]

use latentbench_core::question::{QuestionItem, QuestionParams};
use latentbench_core::rng::StreamRng;
use latentbench_core::scenario::{OpSampler, Scenario};
use latentbench_core::sim::{apply_op, apply_sequence, Action, Direction, Operation, State};

/// The witness with one extra valid op appended. The op is drawn uniformly
/// from the valid ops at the reached state, skipping ops that leave that
/// state unchanged and the inverse of the witness's last op.
pub fn perturbed_witness(scenario: &Scenario, item: &QuestionItem, seed: u64) -> Option<Vec<Operation>> {
    let QuestionParams::PredictOperation { timestamp, .. } = &item.params else { return None };
    let witness = item.ground_truth.witness.clone()?;
    let reached = apply_sequence(scenario.at(*timestamp), &witness).ok()?;
    let sampler = OpSampler::new(&scenario.states);
    let mut rng = StreamRng::new(seed, 11);
    for _ in 0..64 {
        let op = sampler.sample(&reached, &mut rng)?;
        let next = apply_op(&reached, &op).ok()?;
        if next == reached || witness.last().is_some_and(|l| is_inverse(l, &op)) {
            continue;
        }
        let mut out = witness.clone();
        out.push(op);
        return Some(out);
    }
    None
}

fn is_inverse(a: &Operation, b: &Operation) -> bool {
    match (a, b) {
        (Operation::Slide { direction: x }, Operation::Slide { direction: y })
        | (Operation::CircleMove { direction: x }, Operation::CircleMove { direction: y }) => x.opposite() == *y,
        (Operation::CupSwap { a, b }, Operation::CupSwap { a: c, b: d }) => (a, b) == (c, d) || (a, b) == (d, c),
        _ => false,
    }
}

/// A second, textually different sequence that reaches the same state: the
/// witness followed by a run that undoes itself. A circle step and its
/// opposite flip two different masks, so Circle repeats the pair.
pub fn padded_witness(anchor: &State, witness: &[Operation], container: Option<&str>) -> Option<Vec<Operation>> {
    let reached = apply_sequence(anchor, witness).ok()?;
    let pads: Vec<Vec<Operation>> = match &reached {
        State::Number(_) => Direction::ALL
            .iter()
            .map(|&d| vec![Operation::Slide { direction: d }, Operation::Slide { direction: d.opposite() }])
            .collect(),
        State::Circle(_) => Direction::ALL
            .iter()
            .map(|&d| {
                let (go, back) = (Operation::CircleMove { direction: d }, Operation::CircleMove { direction: d.opposite() });
                vec![go.clone(), back.clone(), go, back]
            })
            .collect(),
        State::Cup(b) => {
            let ps: Vec<_> = b.positions().collect();
            vec![vec![Operation::CupSwap { a: ps[0], b: ps[1] }; 2]]
        }
        State::Chip(_) => {
            let cup = container?.to_string();
            vec![vec![
                Operation::ChipAct { action: Action::Add, value: 5, cup: cup.clone() },
                Operation::ChipAct { action: Action::Remove, value: 5, cup },
            ]]
        }
        _ => return None,
    };
    pads.into_iter().find_map(|pad| {
        let mut out = witness.to_vec();
        out.extend(pad);
        apply_sequence(anchor, &out).ok().map(|_| out)
    })
}
