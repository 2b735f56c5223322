// SPDX-License-Identifier: Apache-2.0

//! Question items: sampled parameters, prompts filled from the templates, and
//! ground truths derived from the simulated states.

mod sample;
pub mod templates;
mod truth;

pub use sample::sample_question_params;
pub use truth::{derive_ground_truth, shown_file_commands};

use crate::answer::CanonicalAnswer;
use crate::rng::{derive_seed, StreamRng, STREAM_QUESTIONS};
use crate::scenario::{Endpoint, Scenario};
use crate::sim::{coord::ordinal, Action, DemoKind, Direction, FileCmdKind, Operation, State};
use crate::skill::Skill;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use templates::MissingPlaceholder;

/// What a Recall Count question counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "by", rename_all = "snake_case")]
pub enum Criterion {
    Direction { direction: Direction },
    Row { row: u8 },
    Files { cmd: Option<FileCmdKind>, ext: Option<String> },
    Action { action: Action, container: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "skill", rename_all = "snake_case")]
pub enum QuestionParams {
    /// 1-based ordinals over the operations that pass the filter.
    RecallOrder {
        start_id: usize,
        end_id: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cmd: Option<FileCmdKind>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        action: Option<Action>,
    },
    RecallCount {
        criterion: Criterion,
    },
    InferState {
        timestamp: Endpoint,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        container: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        file_type: Option<String>,
    },
    CompareState {
        timestamp: Endpoint,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        container: Option<String>,
        /// File only: which of the three compare questions.
        #[serde(default)]
        variant: usize,
        /// File variant 3: 1-based operation after which paths are compared.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        after_op: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        other: Option<String>,
    },
    PredictState {
        timestamp: Endpoint,
        extra_ops: Vec<Operation>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        container: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        file_type: Option<String>,
    },
    PredictOperation {
        timestamp: Endpoint,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        container: Option<String>,
        target: State,
    },
}

impl QuestionParams {
    pub fn skill(&self) -> Skill {
        match self {
            QuestionParams::RecallOrder { .. } => Skill::RecallOrder,
            QuestionParams::RecallCount { .. } => Skill::RecallCount,
            QuestionParams::InferState { .. } => Skill::InferState,
            QuestionParams::CompareState { .. } => Skill::CompareState,
            QuestionParams::PredictState { .. } => Skill::PredictState,
            QuestionParams::PredictOperation { .. } => Skill::PredictOperation,
        }
    }

    /// Container the question is scoped to.
    pub fn container(&self) -> Option<&str> {
        match self {
            QuestionParams::InferState { container, .. }
            | QuestionParams::CompareState { container, .. }
            | QuestionParams::PredictState { container, .. }
            | QuestionParams::PredictOperation { container, .. } => container.as_deref(),
            QuestionParams::RecallCount { criterion: Criterion::Action { container, .. } } => Some(container),
            _ => None,
        }
    }

    pub fn anchor(&self) -> Option<Endpoint> {
        match self {
            QuestionParams::InferState { timestamp, .. }
            | QuestionParams::CompareState { timestamp, .. }
            | QuestionParams::PredictState { timestamp, .. }
            | QuestionParams::PredictOperation { timestamp, .. } => Some(*timestamp),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    /// `None` for Predict Operation, which is judged by simulation only.
    pub canonical: Option<CanonicalAnswer>,
    pub rendered: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<State>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Operation>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionItem {
    pub id: String,
    pub scenario_id: String,
    pub demo: DemoKind,
    pub skill: Skill,
    pub level: u8,
    pub params: QuestionParams,
    /// Template key and placeholder values the prompt was filled with.
    pub template: String,
    pub bindings: BTreeMap<String, String>,
    pub prompt: String,
    pub ground_truth: GroundTruth,
}

pub fn item_id(scenario_id: &str, skill: Skill) -> String {
    format!("{scenario_id}-{}", skill.slug())
}

/// Text of an operation list as printed in questions and witness answers.
pub fn format_ops(demo: DemoKind, ops: &[Operation]) -> String {
    let sep = if demo == DemoKind::File { " & " } else { ", " };
    ops.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(sep)
}

fn file_type_binding(ext: &Option<String>) -> String {
    ext.as_ref().map(|e| format!("`.{e}` ")).unwrap_or_default()
}

fn container_key(demo: DemoKind) -> &'static str {
    match demo {
        DemoKind::File => "path_name",
        DemoKind::Card => "pile_name",
        _ => "cup_name",
    }
}

pub fn template_key(demo: DemoKind, params: &QuestionParams) -> String {
    match params {
        QuestionParams::CompareState { variant, .. } if demo == DemoKind::File => format!("compare_state_{}", variant + 1),
        p => p.skill().slug().to_string(),
    }
}

/// Placeholder values for the question and instruction of an item.
pub fn bindings(scenario: &Scenario, params: &QuestionParams) -> BTreeMap<String, String> {
    let demo = scenario.demo();
    let mut b = BTreeMap::new();
    let mut put = |k: &str, v: String| {
        b.insert(k.to_string(), v);
    };
    if demo.is_board() {
        let n = scenario.config.state_size;
        put("N×N", format!("{n}×{n}"));
    }
    match params {
        QuestionParams::RecallOrder { start_id, end_id, cmd, action } => {
            put("start_id", ordinal(*start_id));
            put("end_id", ordinal(*end_id));
            if demo == DemoKind::File {
                put("cmd_type", cmd.map(|k| format!("`{}` ", k.shell())).unwrap_or_default());
            }
            if let Some(a) = action {
                put("action_type", a.past_phrase().into());
            }
        }
        QuestionParams::RecallCount { criterion } => match criterion {
            Criterion::Direction { direction } => put("move", direction.to_string()),
            Criterion::Row { row } => put("row_idx", crate::sim::coord::letter(*row).to_string()),
            Criterion::Files { cmd, ext } => {
                put("cmd_type", cmd.map(|k| format!("`{}` ", k.shell())).unwrap_or_default());
                put("file_type", file_type_binding(ext));
            }
            Criterion::Action { action, container } => {
                put("action_type", action.past_phrase().into());
                put(container_key(demo), container.clone());
            }
        },
        QuestionParams::InferState { timestamp, container, file_type } => {
            put("timestamp", timestamp.to_string());
            if let Some(c) = container {
                put(container_key(demo), c.clone());
            }
            if demo == DemoKind::File {
                put("file_type", file_type_binding(file_type));
            }
        }
        QuestionParams::CompareState { timestamp, container, after_op, other, .. } => {
            put("timestamp", timestamp.to_string());
            match demo {
                DemoKind::Card => put("timestamp2", timestamp.other().to_string()),
                DemoKind::Chip => {
                    put("timestamp1", Endpoint::Start.to_string());
                    put("timestamp2", Endpoint::End.to_string());
                }
                _ => {}
            }
            if let Some(c) = container {
                put(container_key(demo), c.clone());
            }
            if let (Some(k), Some(o)) = (after_op, other) {
                put("cmd", scenario.ops[k - 1].to_string());
                put("path_name1", container.clone().unwrap_or_default());
                put("path_name2", o.clone());
            }
        }
        QuestionParams::PredictState { timestamp, extra_ops, container, file_type } => {
            put("timestamp", timestamp.to_string());
            let key = match demo {
                DemoKind::File => "cmd",
                DemoKind::Card | DemoKind::Chip => "actions",
                _ => "moves",
            };
            put(key, format_ops(demo, extra_ops));
            if let Some(c) = container {
                put(container_key(demo), c.clone());
            }
            if demo == DemoKind::File {
                put("file_type", file_type_binding(file_type));
            }
        }
        QuestionParams::PredictOperation { timestamp, container, target } => {
            put("timestamp", timestamp.to_string());
            if let Some(c) = container {
                put(container_key(demo), c.clone());
            }
            let shown = truth::target_text(demo, target, container.as_deref());
            let key = match demo {
                DemoKind::Number => "number_arrangement",
                DemoKind::File => "files",
                DemoKind::Card => "cards",
                DemoKind::Chip => "chips",
                _ => "board",
            };
            put(key, shown);
        }
    }
    b
}

/// Task instruction, question and answer prompt, one per line.
pub fn build_prompt(scenario: &Scenario, params: &QuestionParams) -> Result<String, MissingPlaceholder> {
    let demo = scenario.demo();
    let b = bindings(scenario, params);
    let variant = match params {
        QuestionParams::CompareState { variant, .. } => *variant,
        _ => 0,
    };
    let instruction = templates::fill(templates::instruction(demo, scenario.config.reveal == crate::scenario::Reveal::Begin), &b)?;
    let question = templates::fill(templates::question(demo, params.skill(), variant), &b)?;
    Ok(format!("{instruction}\n{question}\n{}", templates::ANSWER_PROMPT))
}

pub fn question_rng(scenario: &Scenario, skill: Skill) -> StreamRng {
    let idx = Skill::ALL.iter().position(|s| *s == skill).unwrap() as u64;
    StreamRng::new(derive_seed(scenario.config.seed, idx), STREAM_QUESTIONS)
}

pub fn build_item(scenario: &Scenario, params: QuestionParams) -> QuestionItem {
    let skill = params.skill();
    let ground_truth = derive_ground_truth(scenario, &params);
    let prompt = build_prompt(scenario, &params).expect("bindings cover every placeholder");
    QuestionItem {
        id: item_id(&scenario.id, skill),
        scenario_id: scenario.id.clone(),
        demo: scenario.demo(),
        skill,
        level: skill.level(),
        template: template_key(scenario.demo(), &params),
        bindings: bindings(scenario, &params),
        params,
        prompt,
        ground_truth,
    }
}

/// One item per skill, in skill order.
pub fn generate_question_set(scenario: &Scenario) -> Vec<QuestionItem> {
    Skill::ALL
        .into_iter()
        .map(|skill| {
            let mut rng = question_rng(scenario, skill);
            build_item(scenario, sample_question_params(scenario, skill, &mut rng))
        })
        .collect()
}
