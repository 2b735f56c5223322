// SPDX-License-Identifier: Apache-2.0

mod support;

use latentbench_core::sim::{apply_op, DemoKind, Direction, Operation, Pos, State};
use proptest::prelude::*;
use support::sim_props::{check_case, random_case};

fn demo() -> impl Strategy<Value = DemoKind> {
    prop::sample::select(DemoKind::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn sampled_runs_keep_every_invariant(demo in demo(), seed in any::<u64>()) {
        let (start, ops) = random_case(demo, seed);
        prop_assert!(!ops.is_empty());
        if let Err(e) = check_case(&start, &ops) {
            prop_assert!(false, "{demo} seed {seed}: {e}");
        }
    }

    #[test]
    fn rejected_board_ops_agree_with_the_model(seed in any::<u64>(), d in 0usize..4, r in 0u8..5, c in 0u8..5) {
        for demo in [DemoKind::Number, DemoKind::Circle, DemoKind::Cup] {
            let (start, _) = random_case(demo, seed);
            let direction = Direction::ALL[d];
            let op = match demo {
                DemoKind::Number => Operation::Slide { direction },
                DemoKind::Circle => Operation::CircleMove { direction },
                _ => Operation::CupSwap { a: Pos::new(0, 0), b: Pos::new(r, c) },
            };
            let engine = apply_op(&start, &op).ok();
            let model = support::sim_props::oracle_replay(&start, std::slice::from_ref(&op));
            let in_bounds = start.board_size().is_some_and(|n| r < n && c < n);
            match demo {
                DemoKind::Cup if !in_bounds || (r, c) == (0, 0) => prop_assert!(engine.is_none()),
                _ => prop_assert_eq!(engine, model),
            }
        }
    }
}

#[test]
fn generated_card_runs_never_repeat_a_card() {
    use latentbench_core::scenario::{generate_scenario, Reveal, ScenarioConfig};
    for seed in 0..300 {
        let config = ScenarioConfig { demo: DemoKind::Card, state_size: 1 + (seed % 2) as u8, op_count: 14, reveal: Reveal::Begin, seed };
        let s = generate_scenario(&config).unwrap();
        let State::Card(p) = s.start() else { unreachable!() };
        let mut seen: std::collections::BTreeSet<_> = p.all_cards().collect();
        for op in &s.ops {
            if let Operation::CardAct { action: latentbench_core::sim::Action::Add, card, .. } = op {
                assert!(seen.insert(*card), "seed {seed}: {card} added twice");
            }
        }
    }
}
