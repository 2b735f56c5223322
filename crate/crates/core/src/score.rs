// SPDX-License-Identifier: Apache-2.0

//! Scoring runs: response intake, per-item verdicts and accuracy reports.

use crate::benchmark::{Benchmark, ScenarioRecord};
use crate::question::QuestionItem;
use crate::scenario::Scenario;
use crate::skill::Skill;
use crate::verify::{judge_response, Reason, Verdict};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResponseRecord {
    pub question_id: String,
    pub response: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
}

/// A judge outside the process, such as an LLM behind an HTTP endpoint.
/// Errors make the scorer fall back to the deterministic verdict.
pub trait ExternalJudge: Sync {
    fn judge(&self, question: &str, ground_truth: &str, response: &str) -> Result<bool, String>;
}

#[derive(Clone, Copy, Default)]
pub enum JudgeMode<'a> {
    #[default]
    Deterministic,
    External(&'a dyn ExternalJudge),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JudgedBy {
    Deterministic,
    Simulation,
    External,
    /// External judging was requested but failed for this item.
    Fallback,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemVerdict {
    pub question_id: String,
    pub scenario_id: String,
    pub demo: String,
    pub skill: Skill,
    pub level: u8,
    pub bucket: String,
    pub size_variant: String,
    pub reveal: String,
    pub verdict: Verdict,
    pub judged_by: JudgedBy,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fallback_error: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub correct: usize,
    pub total: usize,
    /// Percentage in `0.0..=100.0`.
    pub accuracy: f64,
}

impl Cell {
    fn add(&mut self, ok: bool) {
        self.total += 1;
        self.correct += ok as usize;
        self.accuracy = 100.0 * self.correct as f64 / self.total as f64;
    }
}

fn mean(xs: impl IntoIterator<Item = f64>) -> f64 {
    let xs: Vec<f64> = xs.into_iter().collect();
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    /// Mean of the six skill accuracies.
    pub overall: f64,
    pub per_skill: BTreeMap<String, Cell>,
    /// Each level is the mean of its two skill accuracies.
    pub per_level: BTreeMap<String, f64>,
    pub per_demo: BTreeMap<String, Cell>,
    pub per_bucket: BTreeMap<String, Cell>,
    pub per_size: BTreeMap<String, Cell>,
    pub per_reveal: BTreeMap<String, Cell>,
    /// Keys are `skill/demo/bucket`.
    pub cells: BTreeMap<String, Cell>,
    pub missing: usize,
    pub fallbacks: usize,
    pub items: Vec<ItemVerdict>,
}

impl Report {
    pub fn from_items(items: Vec<ItemVerdict>) -> Self {
        let mut per_skill: BTreeMap<String, Cell> = BTreeMap::new();
        let (mut per_demo, mut per_bucket, mut per_size, mut per_reveal, mut cells) =
            (BTreeMap::new(), BTreeMap::new(), BTreeMap::new(), BTreeMap::new(), BTreeMap::new());
        for it in &items {
            let ok = it.verdict.is_correct();
            per_skill.entry(it.skill.slug().to_string()).or_default().add(ok);
            per_demo.entry(it.demo.clone()).or_insert_with(Cell::default).add(ok);
            per_bucket.entry(it.bucket.clone()).or_insert_with(Cell::default).add(ok);
            per_size.entry(it.size_variant.clone()).or_insert_with(Cell::default).add(ok);
            per_reveal.entry(it.reveal.clone()).or_insert_with(Cell::default).add(ok);
            cells.entry(format!("{}/{}/{}", it.skill.slug(), it.demo, it.bucket)).or_insert_with(Cell::default).add(ok);
        }
        let skill_acc = |k: &Skill| per_skill.get(k.slug()).map(|c| c.accuracy);
        let per_level = (1..=3u8)
            .map(|l| {
                let accs = Skill::ALL.iter().filter(|k| k.level() == l).filter_map(skill_acc);
                (format!("level{l}"), mean(accs))
            })
            .collect();
        Report {
            overall: mean(Skill::ALL.iter().filter_map(skill_acc)),
            per_skill,
            per_level,
            per_demo,
            per_bucket,
            per_size,
            per_reveal,
            cells,
            missing: items.iter().filter(|i| i.verdict.reason() == Some(&Reason::Missing)).count(),
            fallbacks: items.iter().filter(|i| i.judged_by == JudgedBy::Fallback).count(),
            items,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// One row per accuracy cell: skill x demo x bucket, then the marginals
    /// and the overall figure.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["group", "key", "correct", "total", "accuracy"]).expect("in-memory write");
        let mut row = |group: &str, key: &str, c: &Cell| {
            w.write_record([group, key, &c.correct.to_string(), &c.total.to_string(), &format!("{:.1}", c.accuracy)])
                .expect("in-memory write");
        };
        for (group, map) in [
            ("cell", &self.cells),
            ("skill", &self.per_skill),
            ("demo", &self.per_demo),
            ("bucket", &self.per_bucket),
            ("size", &self.per_size),
            ("reveal", &self.per_reveal),
        ] {
            for (k, c) in map {
                row(group, k, c);
            }
        }
        for (k, v) in &self.per_level {
            w.write_record(["level", k, "", "", &format!("{v:.1}")]).expect("in-memory write");
        }
        w.write_record(["overall", "overall", "", "", &format!("{:.1}", self.overall)]).expect("in-memory write");
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    /// Accuracy table grouped by level.
    pub fn table(&self) -> String {
        let mut out = String::new();
        for l in 1..=3u8 {
            out.push_str(&format!("Level {l}  {:>6.1}\n", self.per_level[&format!("level{l}")]));
            for k in Skill::ALL.iter().filter(|k| k.level() == l) {
                let acc = self.per_skill.get(k.slug()).map(|c| c.accuracy).unwrap_or(0.0);
                out.push_str(&format!("  {:<18}{acc:>6.1}\n", k.title()));
            }
        }
        out.push_str(&format!("Overall  {:>6.1}\n", self.overall));
        out
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScoreError {
    #[error("question id {0} appears more than once in the responses")]
    Duplicate(String),
    #[error("question id {0} is not in the manifest")]
    Unknown(String),
}

fn judge_one(
    scenario: &Scenario,
    item: &QuestionItem,
    response: Option<&str>,
    mode: JudgeMode<'_>,
) -> (Verdict, JudgedBy, Option<String>) {
    let Some(response) = response else { return (Verdict::incorrect(Reason::Missing), JudgedBy::Deterministic, None) };
    let local = || judge_response(scenario, item, response);
    if item.skill == Skill::PredictOperation {
        return (local(), JudgedBy::Simulation, None);
    }
    match mode {
        JudgeMode::Deterministic => (local(), JudgedBy::Deterministic, None),
        JudgeMode::External(judge) => match judge.judge(&item.prompt, &item.ground_truth.rendered, response) {
            Ok(true) => (Verdict::Correct, JudgedBy::External, None),
            Ok(false) => (Verdict::incorrect(Reason::Mismatch), JudgedBy::External, None),
            Err(e) => {
                log::debug!("external judge failed on {}: {e}; using deterministic verdict", item.id);
                (local(), JudgedBy::Fallback, Some(e))
            }
        },
    }
}

/// Judges every manifest item. Items without a response are Incorrect.
pub fn score_run(bench: &Benchmark, responses: &[ResponseRecord], mode: JudgeMode<'_>) -> Result<Report, ScoreError> {
    let mut by_id: HashMap<&str, &str> = HashMap::new();
    for r in responses {
        if by_id.insert(&r.question_id, &r.response).is_some() {
            return Err(ScoreError::Duplicate(r.question_id.clone()));
        }
    }
    let known: HashMap<&str, ()> =
        bench.questions.iter().flatten().map(|q| (q.id.as_str(), ())).collect();
    if let Some(r) = responses.iter().find(|r| !known.contains_key(r.question_id.as_str())) {
        return Err(ScoreError::Unknown(r.question_id.clone()));
    }
    let work: Vec<(&ScenarioRecord, &Scenario, &QuestionItem)> = bench
        .manifest
        .scenarios
        .iter()
        .zip(&bench.scenarios)
        .zip(&bench.questions)
        .flat_map(|((rec, s), qs)| qs.iter().map(move |q| (rec, s, q)))
        .collect();
    let items = work
        .par_iter()
        .map(|(rec, s, q)| {
            let (verdict, judged_by, fallback_error) = judge_one(s, q, by_id.get(q.id.as_str()).copied(), mode);
            ItemVerdict {
                question_id: q.id.clone(),
                scenario_id: s.id.clone(),
                demo: s.demo().to_string(),
                skill: q.skill,
                level: q.level,
                bucket: rec.bucket.clone(),
                size_variant: rec.size_variant.clone(),
                reveal: rec.config.reveal.as_str().to_string(),
                verdict,
                judged_by,
                fallback_error,
            }
        })
        .collect();
    Ok(Report::from_items(items))
}

/// Responses that reproduce every ground truth: rendered answers, and the
/// witness sequence for Predict Operation.
pub fn oracle_responses(bench: &Benchmark) -> Vec<ResponseRecord> {
    bench
        .questions
        .iter()
        .flatten()
        .map(|q| ResponseRecord {
            question_id: q.id.clone(),
            response: format!("Final Answer: {}", q.ground_truth.rendered),
            model: Some("oracle".into()),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmark::{generate_benchmark, BenchmarkSpec};
    use crate::sim::DemoKind;

    struct Broken;
    impl ExternalJudge for Broken {
        fn judge(&self, _: &str, _: &str, _: &str) -> Result<bool, String> {
            Err("unreachable".into())
        }
    }

    #[test]
    fn oracle_full_marks_blank_zero() {
        let b = generate_benchmark(&BenchmarkSpec::single(DemoKind::Card, 4, 1)).unwrap();
        let r = score_run(&b, &oracle_responses(&b), JudgeMode::Deterministic).unwrap();
        assert_eq!(r.overall, 100.0);
        let blank: Vec<ResponseRecord> = oracle_responses(&b)
            .into_iter()
            .map(|mut x| {
                x.response.clear();
                x
            })
            .collect();
        let r = score_run(&b, &blank, JudgeMode::Deterministic).unwrap();
        assert_eq!(r.overall, 0.0);
    }

    #[test]
    fn missing_and_duplicates() {
        let b = generate_benchmark(&BenchmarkSpec::single(DemoKind::Cup, 2, 1)).unwrap();
        let mut rs = oracle_responses(&b);
        rs.truncate(10);
        let r = score_run(&b, &rs, JudgeMode::Deterministic).unwrap();
        assert_eq!(r.missing, 2);
        assert_eq!(r.items.len(), 12);
        rs.push(rs[0].clone());
        assert_eq!(score_run(&b, &rs, JudgeMode::Deterministic), Err(ScoreError::Duplicate(rs[0].question_id.clone())));
    }

    #[test]
    fn failing_external_judge_falls_back() {
        let b = generate_benchmark(&BenchmarkSpec::single(DemoKind::Chip, 1, 1)).unwrap();
        let r = score_run(&b, &oracle_responses(&b), JudgeMode::External(&Broken)).unwrap();
        assert_eq!(r.overall, 100.0);
        assert_eq!(r.fallbacks, 5);
    }
}
