// SPDX-License-Identifier: Apache-2.0

//! Self-consistency checks over a written benchmark.

use latentbench_core::answer::{parse_answer_sized, ParsedOps};
use latentbench_core::benchmark::{Benchmark, ScenarioRecord};
use latentbench_core::question::{generate_question_set, item_id, QuestionItem};
use latentbench_core::scenario::Scenario;
use latentbench_core::skill::Skill;
use latentbench_core::verify::{judge_response, verify_predicted_ops};
use rayon::prelude::*;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyOutcome {
    pub scenarios: usize,
    /// `(scenario id, problem)` pairs, in manifest order.
    pub failures: Vec<(String, String)>,
}

impl VerifyOutcome {
    pub fn failing_ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.failures.iter().map(|f| f.0.clone()).collect();
        ids.dedup();
        ids
    }
}

/// Replays the script, re-derives every question and checks round trips,
/// witnesses and oracle answers.
pub fn check_scenario(rec: &ScenarioRecord, s: &Scenario, items: &[QuestionItem]) -> Vec<String> {
    let mut problems = Vec::new();
    if let Err(e) = s.check() {
        problems.push(format!("script: {e}"));
        return problems;
    }
    if rec.id != s.id {
        problems.push(format!("manifest id {} differs from script id", rec.id));
    }
    if rec.config != s.config || rec.config_digest != s.config.digest() {
        problems.push("manifest config differs from script".into());
    }
    let fresh = generate_question_set(s);
    if fresh.as_slice() != items {
        let skills: Vec<&str> = Skill::ALL
            .iter()
            .filter(|k| fresh.iter().find(|q| q.skill == **k) != items.iter().find(|q| q.skill == **k))
            .map(|k| k.slug())
            .collect();
        problems.push(format!("stored questions differ from re-derived ones ({})", skills.join(", ")));
    }
    for q in &fresh {
        if q.id != item_id(&s.id, q.skill) {
            problems.push(format!("{}: unexpected item id", q.id));
        }
        if let Some(c) = &q.ground_truth.canonical {
            match parse_answer_sized(s.demo(), q.skill, &q.ground_truth.rendered, s.start().board_size()) {
                Ok(p) if &p == c => {}
                _ => problems.push(format!("{}: rendered answer does not re-parse", q.id)),
            }
        }
        if let Some(w) = &q.ground_truth.witness {
            if !verify_predicted_ops(s, &q.params, &ParsedOps { ops: w.clone(), warnings: vec![] }).is_correct() {
                problems.push(format!("{}: witness does not reach the target", q.id));
            }
        }
        if !judge_response(s, q, &format!("Final Answer: {}", q.ground_truth.rendered)).is_correct() {
            problems.push(format!("{}: ground truth is judged incorrect", q.id));
        }
    }
    problems
}

pub fn verify_benchmark(bench: &Benchmark) -> VerifyOutcome {
    let mut failures: Vec<(String, String)> = bench
        .manifest
        .scenarios
        .par_iter()
        .zip(&bench.scenarios)
        .zip(&bench.questions)
        .flat_map_iter(|((rec, s), qs)| {
            let problems = check_scenario(rec, s, qs);
            problems.into_iter().map(move |p| (rec.id.clone(), p))
        })
        .collect();
    if !bench.manifest.check() {
        failures.push(("manifest".into(), "summary does not match the scenario records".into()));
    }
    VerifyOutcome { scenarios: bench.scenarios.len(), failures }
}
