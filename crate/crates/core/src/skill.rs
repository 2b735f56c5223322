// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// The six question skills, two per reasoning level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Skill {
    RecallOrder,
    RecallCount,
    InferState,
    CompareState,
    PredictState,
    PredictOperation,
}

impl Skill {
    pub const ALL: [Skill; 6] = [
        Skill::RecallOrder,
        Skill::RecallCount,
        Skill::InferState,
        Skill::CompareState,
        Skill::PredictState,
        Skill::PredictOperation,
    ];

    pub fn level(self) -> u8 {
        match self {
            Skill::RecallOrder | Skill::RecallCount => 1,
            Skill::InferState | Skill::CompareState => 2,
            Skill::PredictState | Skill::PredictOperation => 3,
        }
    }

    pub fn slug(self) -> &'static str {
        match self {
            Skill::RecallOrder => "recall_order",
            Skill::RecallCount => "recall_count",
            Skill::InferState => "infer_state",
            Skill::CompareState => "compare_state",
            Skill::PredictState => "predict_state",
            Skill::PredictOperation => "predict_operation",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Skill::RecallOrder => "Recall Order",
            Skill::RecallCount => "Recall Count",
            Skill::InferState => "Infer State",
            Skill::CompareState => "Compare State",
            Skill::PredictState => "Predict State",
            Skill::PredictOperation => "Predict Operation",
        }
    }
}

impl fmt::Display for Skill {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for Skill {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String =
            s.trim().chars().filter(|c| c.is_ascii_alphanumeric()).map(|c| c.to_ascii_lowercase()).collect();
        Skill::ALL
            .into_iter()
            .find(|k| k.slug().replace('_', "") == norm || (norm == "predictoperations" && *k == Skill::PredictOperation))
            .ok_or_else(|| format!("unknown skill '{s}'"))
    }
}
