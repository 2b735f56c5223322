// SPDX-License-Identifier: Apache-2.0

//! Deterministic judging: structural equality for answer-bearing skills and
//! simulate-and-verify for operation prediction.

use crate::answer::{extract_final_answer, parse_answer_sized, parse_operations, CanonicalAnswer, ParsedOps};
use crate::question::{GroundTruth, QuestionItem, QuestionParams};
use crate::scenario::Scenario;
use crate::sim::chip::is_denomination;
use crate::sim::{self, apply_sequence, DemoKind, FileCmdKind, FileCommand, InvalidOp, Operation, StateDiff};
use crate::skill::Skill;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// Answer-format rules stated in the Predict Operation templates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum RuleViolation {
    /// File answers may only use `touch` and `rm -rf`.
    DisallowedCommand { index: usize, command: FileCmdKind },
    /// File answers may use at most two commands.
    TooManyCommands { count: usize },
    /// A file appears in both `touch` and `rm -rf`.
    Overlap { files: Vec<String> },
    IllegalDenomination { index: usize, value: u32 },
}

impl fmt::Display for RuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleViolation::DisallowedCommand { index, command } => {
                write!(f, "command {index} uses `{}`; only touch and rm -rf are allowed", command.shell())
            }
            RuleViolation::TooManyCommands { count } => write!(f, "{count} commands; at most two are allowed"),
            RuleViolation::Overlap { files } => write!(f, "{} both touched and removed", files.join(", ")),
            RuleViolation::IllegalDenomination { index, value } => write!(f, "action {index} uses a {value} chip"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "code", rename_all = "snake_case")]
pub enum Reason {
    Parse { position: usize, expected: String },
    Mismatch,
    NoOps,
    IllegalOp { index: usize, error: String, invalid: Option<InvalidOp> },
    Rule { violation: RuleViolation },
    StateMismatch { diff: Option<StateDiff> },
    Missing,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::Parse { position, expected } => write!(f, "parse failure at {position}: expected {expected}"),
            Reason::Mismatch => f.write_str("answer differs from the ground truth"),
            Reason::NoOps => f.write_str("no operations found"),
            Reason::IllegalOp { index, error, .. } => write!(f, "illegal operation {index}: {error}"),
            Reason::Rule { violation } => write!(f, "rule violation: {violation}"),
            Reason::StateMismatch { .. } => f.write_str("reached state differs from the target"),
            Reason::Missing => f.write_str("no response"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Correct,
    Incorrect { reason: Reason },
}

impl Verdict {
    pub fn incorrect(reason: Reason) -> Self {
        Verdict::Incorrect { reason }
    }

    pub fn is_correct(&self) -> bool {
        matches!(self, Verdict::Correct)
    }

    pub fn reason(&self) -> Option<&Reason> {
        match self {
            Verdict::Correct => None,
            Verdict::Incorrect { reason } => Some(reason),
        }
    }
}

/// Structural comparison. Canonical answers are normalized at parse time
/// (sets sorted, sequences kept in order), so equality is the whole test.
pub fn judge_answer(ground_truth: &GroundTruth, answer: &CanonicalAnswer) -> Verdict {
    match &ground_truth.canonical {
        Some(c) if c == answer => Verdict::Correct,
        _ => Verdict::incorrect(Reason::Mismatch),
    }
}

fn check_rules(demo: DemoKind, ops: &[Operation]) -> Result<(), RuleViolation> {
    match demo {
        DemoKind::File => {
            let cmds: Vec<&FileCommand> = ops
                .iter()
                .filter_map(|o| match o {
                    Operation::FileCmd { cmd } => Some(cmd),
                    _ => None,
                })
                .collect();
            for (i, c) in cmds.iter().enumerate() {
                if !matches!(c.kind(), FileCmdKind::Touch | FileCmdKind::Rm) {
                    return Err(RuleViolation::DisallowedCommand { index: i + 1, command: c.kind() });
                }
            }
            if cmds.len() > 2 {
                return Err(RuleViolation::TooManyCommands { count: cmds.len() });
            }
            let names = |k: FileCmdKind| -> BTreeSet<String> {
                cmds.iter()
                    .filter(|c| c.kind() == k)
                    .flat_map(|c| match c {
                        FileCommand::Touch { path, files } | FileCommand::Rm { path, files } => {
                            files.iter().map(|f| format!("{path}/{f}")).collect::<Vec<_>>()
                        }
                        _ => Vec::new(),
                    })
                    .collect()
            };
            let both: Vec<String> = names(FileCmdKind::Touch).intersection(&names(FileCmdKind::Rm)).cloned().collect();
            if !both.is_empty() {
                return Err(RuleViolation::Overlap { files: both });
            }
        }
        DemoKind::Chip => {
            for (i, o) in ops.iter().enumerate() {
                if let Operation::ChipAct { value, .. } = o {
                    if !is_denomination(*value) {
                        return Err(RuleViolation::IllegalDenomination { index: i + 1, value: *value });
                    }
                }
            }
        }
        _ => {}
    }
    Ok(())
}

/// Rule checks, then replay from the anchor and comparison with the target
/// in the question's scope.
pub fn verify_predicted_ops(scenario: &Scenario, params: &QuestionParams, ops: &ParsedOps) -> Verdict {
    let QuestionParams::PredictOperation { timestamp, container, target } = params else {
        panic!("verify_predicted_ops needs Predict Operation parameters");
    };
    let anchor = scenario.at(*timestamp);
    let scope = container.as_deref();
    if ops.ops.is_empty() {
        return if anchor.scoped_eq(target, scope) { Verdict::Correct } else { Verdict::incorrect(Reason::NoOps) };
    }
    if let Err(violation) = check_rules(scenario.demo(), &ops.ops) {
        return Verdict::incorrect(Reason::Rule { violation });
    }
    match apply_sequence(anchor, &ops.ops) {
        Err(e) => Verdict::incorrect(Reason::IllegalOp {
            index: e.index,
            error: e.error.to_string(),
            invalid: e.error.invalid().cloned(),
        }),
        Ok(reached) if reached.scoped_eq(target, scope) => Verdict::Correct,
        Ok(reached) => Verdict::incorrect(Reason::StateMismatch { diff: sim::diff_states(&reached, target).ok() }),
    }
}

/// Full deterministic pipeline for one response: extraction, parsing, judging.
pub fn judge_response(scenario: &Scenario, item: &QuestionItem, response: &str) -> Verdict {
    let text = extract_final_answer(response);
    if item.skill == Skill::PredictOperation {
        return verify_predicted_ops(scenario, &item.params, &parse_operations(item.demo, text));
    }
    match parse_answer_sized(item.demo, item.skill, text, scenario.start().board_size()) {
        Ok(ans) => judge_answer(&item.ground_truth, &ans),
        Err(e) => Verdict::incorrect(Reason::Parse { position: e.position, expected: e.expected }),
    }
}
