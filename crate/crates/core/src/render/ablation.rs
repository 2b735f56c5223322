// SPDX-License-Identifier: Apache-2.0

//! Reduced-input variants of a rendered video.

use super::{Frame, FrameSequence};
use crate::rng::{StreamRng, STREAM_ABLATION};
use crate::scenario::Scenario;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AblationMode {
    Full,
    /// A seeded random half of the frames is dropped: `n / 2` frames,
    /// rounded down, so `n.div_ceil(2)` remain.
    Cut50,
    /// Only the frame at index `n / 2`.
    SingleFrame,
    /// No frames; the prompt alone.
    TextOnly,
}

impl AblationMode {
    pub const ALL: [AblationMode; 4] = [AblationMode::Full, AblationMode::Cut50, AblationMode::SingleFrame, AblationMode::TextOnly];

    pub fn as_str(self) -> &'static str {
        match self {
            AblationMode::Full => "full",
            AblationMode::Cut50 => "cut50",
            AblationMode::SingleFrame => "single_frame",
            AblationMode::TextOnly => "text_only",
        }
    }
}

impl fmt::Display for AblationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AblationMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AblationMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown ablation mode '{s}' (expected full, cut50, single_frame or text_only)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AblationBundle {
    pub mode: AblationMode,
    pub scenario_id: String,
    /// Indices of the kept frames in the source sequence, ascending.
    pub source_indices: Vec<usize>,
    pub frames: FrameSequence,
}

pub fn export_ablation(frames: &FrameSequence, mode: AblationMode, scenario: &Scenario) -> AblationBundle {
    let n = frames.len();
    let source_indices: Vec<usize> = match mode {
        AblationMode::Full => (0..n).collect(),
        AblationMode::Cut50 => {
            let mut rng = StreamRng::new(scenario.config.seed, STREAM_ABLATION);
            let mut keep = rng.sample_indices(n, n.div_ceil(2));
            keep.sort_unstable();
            keep
        }
        AblationMode::SingleFrame if n > 0 => vec![n / 2],
        AblationMode::SingleFrame | AblationMode::TextOnly => Vec::new(),
    };
    let kept: Vec<Frame> = source_indices.iter().map(|&i| frames.frames[i].clone()).collect();
    AblationBundle { mode, scenario_id: scenario.id.clone(), source_indices, frames: FrameSequence { frames: kept } }
}
