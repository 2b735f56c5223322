// SPDX-License-Identifier: Apache-2.0

//! Frame sequences (one SVG document per frame), terminal transcripts for
//! File scenarios, the vid2txt surrogate and ablation exports.

mod ablation;
mod svg;
mod vid2txt;

pub use ablation::{export_ablation, AblationBundle, AblationMode};
pub use svg::latent_glyphs;
pub use vid2txt::emit_vid2txt;

use crate::scenario::{Reveal, Scenario};
use crate::sim::{DemoKind, State};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::fs;
use std::io;
use std::path::Path;
use std::str::FromStr;
use svg::Motion;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderStyle {
    pub width: u32,
    pub height: u32,
    /// At least 2, so the states before and after each operation are drawn.
    pub keyframes_per_op: u32,
    pub op_ms: u32,
    pub reveal_ms: u32,
    pub mask_ms: u32,
    pub hold_ms: u32,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle { width: 640, height: 640, keyframes_per_op: 3, op_ms: 2000, reveal_ms: 3000, mask_ms: 500, hold_ms: 1000 }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StyleError {
    #[error("keyframes_per_op must be at least 2, got {0}")]
    Keyframes(u32),
    #[error("canvas {0}x{1} is smaller than 160x160")]
    Canvas(u32, u32),
    #[error("{0} must be positive")]
    Duration(&'static str),
}

impl RenderStyle {
    pub fn validate(&self) -> Result<(), StyleError> {
        if self.keyframes_per_op < 2 {
            return Err(StyleError::Keyframes(self.keyframes_per_op));
        }
        if self.width < 160 || self.height < 160 {
            return Err(StyleError::Canvas(self.width, self.height));
        }
        for (name, v) in [("op_ms", self.op_ms), ("reveal_ms", self.reveal_ms), ("mask_ms", self.mask_ms), ("hold_ms", self.hold_ms)] {
            if v == 0 {
                return Err(StyleError::Duration(name));
            }
        }
        if self.op_ms < self.keyframes_per_op {
            return Err(StyleError::Duration("op_ms per keyframe"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FrameTag {
    Reveal,
    MaskTransition,
    /// 1-based operation index.
    Op(usize),
    Hold,
}

impl fmt::Display for FrameTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameTag::Reveal => f.write_str("reveal"),
            FrameTag::MaskTransition => f.write_str("mask_transition"),
            FrameTag::Op(k) => write!(f, "op({k})"),
            FrameTag::Hold => f.write_str("hold"),
        }
    }
}

impl FromStr for FrameTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "reveal" => Ok(FrameTag::Reveal),
            "mask_transition" => Ok(FrameTag::MaskTransition),
            "hold" => Ok(FrameTag::Hold),
            _ => s
                .strip_prefix("op(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|k| k.parse().ok())
                .map(FrameTag::Op)
                .ok_or_else(|| format!("unknown frame tag '{s}'")),
        }
    }
}

impl Serialize for FrameTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FrameTag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub tag: FrameTag,
    pub duration_ms: u32,
    pub svg: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FrameSequence {
    pub frames: Vec<Frame>,
}

/// Contents of `timing.json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub durations_ms: Vec<u32>,
    pub tags: Vec<FrameTag>,
    pub total_ms: u64,
}

impl FrameSequence {
    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn total_ms(&self) -> u64 {
        self.frames.iter().map(|f| f.duration_ms as u64).sum()
    }

    pub fn tags(&self) -> Vec<FrameTag> {
        self.frames.iter().map(|f| f.tag).collect()
    }

    /// Operation indices in frame order, one entry per operation group.
    pub fn op_groups(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for f in &self.frames {
            if let FrameTag::Op(k) = f.tag {
                if out.last() != Some(&k) {
                    out.push(k);
                }
            }
        }
        out
    }

    pub fn timing(&self) -> Timing {
        Timing {
            durations_ms: self.frames.iter().map(|f| f.duration_ms).collect(),
            tags: self.tags(),
            total_ms: self.total_ms(),
        }
    }

    /// Frames that must not show latent values: everything after the mask
    /// transition for Begin reveal, everything before it for End reveal.
    /// Terminal transcripts have no mask transition; there only the frames
    /// before an End reveal are masked, since scrollback keeps a Begin
    /// listing on screen.
    pub fn masked_range(&self, reveal: Reveal) -> std::ops::Range<usize> {
        let Some(m) = self.frames.iter().position(|f| f.tag == FrameTag::MaskTransition) else {
            return match (reveal, self.frames.iter().rposition(|f| f.tag == FrameTag::Reveal)) {
                (Reveal::End, Some(r)) => 0..r,
                _ => 0..0,
            };
        };
        match reveal {
            Reveal::Begin => m..self.frames.len(),
            Reveal::End => 0..m + 1,
        }
    }
}

pub fn frame_file_name(i: usize) -> String {
    format!("frame_{:05}.svg", i + 1)
}

/// Writes `frame_00001.svg`... and `timing.json` into `dir`, replacing any
/// frames left from an earlier run.
pub fn write_frames(seq: &FrameSequence, dir: &Path) -> io::Result<()> {
    if dir.exists() {
        fs::remove_dir_all(dir)?;
    }
    fs::create_dir_all(dir)?;
    for (i, f) in seq.frames.iter().enumerate() {
        fs::write(dir.join(frame_file_name(i)), &f.svg)?;
    }
    let timing = serde_json::to_string_pretty(&seq.timing()).expect("timing serializes") + "\n";
    fs::write(dir.join("timing.json"), timing)
}

#[derive(Debug, Error)]
pub enum RenderError {
    #[error(transparent)]
    Style(#[from] StyleError),
    #[error("terminal rendering needs a File scenario, got {0}")]
    NotFile(DemoKind),
}

fn draw(style: &RenderStyle, tag: FrameTag, state: &State, hidden: bool, motion: Option<&Motion>) -> String {
    let t = tag.to_string();
    match state {
        State::Number(b) => svg::number(style, &t, b, hidden, motion),
        State::Circle(g) => svg::circle(style, &t, g, hidden, motion),
        State::Cup(b) => svg::cup(style, &t, b, !hidden, motion),
        State::Card(p) => svg::card(style, &t, p, !hidden, motion),
        State::Chip(c) => svg::chip(style, &t, c, !hidden, motion),
        State::File(_) => unreachable!("File scenarios use terminal frames"),
    }
}

fn keyframe_durations(style: &RenderStyle) -> Vec<u32> {
    let k = style.keyframes_per_op;
    let base = style.op_ms / k;
    (0..k).map(|j| if j + 1 == k { style.op_ms - base * (k - 1) } else { base }).collect()
}

fn op_frames(style: &RenderStyle, s: &Scenario) -> Vec<Frame> {
    let durations = keyframe_durations(style);
    let k = durations.len();
    let mut out = Vec::new();
    for (i, op) in s.ops.iter().enumerate() {
        let tag = FrameTag::Op(i + 1);
        for (j, d) in durations.iter().enumerate() {
            let t = j as f64 / (k - 1) as f64;
            // the last keyframe shows the settled next state
            let svg = if j + 1 == k {
                draw(style, tag, &s.states[i + 1], true, None)
            } else {
                draw(style, tag, &s.states[i], true, Some(&Motion { op, t }))
            };
            out.push(Frame { tag, duration_ms: *d, svg });
        }
    }
    out
}

/// Board, card and chip scenarios:
/// Begin reveal gives `reveal, mask_transition, op groups, hold`;
/// End reveal gives `hold, op groups, mask_transition, reveal`.
/// File scenarios are delegated to [`render_terminal`].
pub fn render_frames(s: &Scenario, style: &RenderStyle) -> Result<FrameSequence, RenderError> {
    style.validate()?;
    if s.demo() == DemoKind::File {
        return render_terminal(s, style);
    }
    let frame = |tag, state: &State, hidden, duration_ms| Frame { tag, duration_ms, svg: draw(style, tag, state, hidden, None) };
    let mut frames = Vec::new();
    match s.config.reveal {
        Reveal::Begin => {
            frames.push(frame(FrameTag::Reveal, s.start(), false, style.reveal_ms));
            frames.push(frame(FrameTag::MaskTransition, s.start(), true, style.mask_ms));
            frames.extend(op_frames(style, s));
            frames.push(frame(FrameTag::Hold, s.end(), true, style.hold_ms));
        }
        Reveal::End => {
            frames.push(frame(FrameTag::Hold, s.start(), true, style.hold_ms));
            frames.extend(op_frames(style, s));
            frames.push(frame(FrameTag::MaskTransition, s.end(), true, style.mask_ms));
            frames.push(frame(FrameTag::Reveal, s.end(), false, style.reveal_ms));
        }
    }
    Ok(FrameSequence { frames })
}

/// `ls` lines for every path of a file-system state.
pub(crate) fn ls_lines(state: &State) -> Vec<String> {
    let State::File(fs) = state else { return Vec::new() };
    fs.paths
        .iter()
        .flat_map(|(p, files)| [format!(">>>ls {p}"), format!("{p}: {}", files.iter().cloned().collect::<Vec<_>>().join(" "))])
        .collect()
}

/// Terminal transcript frames. The seeding `touch` commands form the first
/// frame; the `ls` listing of the revealed endpoint follows them (Begin) or
/// closes the transcript (End). Each command is typed over the keyframes.
pub fn render_terminal(s: &Scenario, style: &RenderStyle) -> Result<FrameSequence, RenderError> {
    style.validate()?;
    if s.demo() != DemoKind::File {
        return Err(RenderError::NotFile(s.demo()));
    }
    let t = |tag: FrameTag| tag.to_string();
    let mut lines: Vec<(String, &str)> = s.file_seed_commands().iter().map(|c| (format!(">>>{c}"), "cmd")).collect();
    let listing = |state: &State| -> Vec<(String, &'static str)> {
        let mut v: Vec<(String, &str)> = ls_lines(state).into_iter().map(|l| (l, "listing latent")).collect();
        v.push((String::new(), "listing latent"));
        v
    };
    let mut frames = Vec::new();
    if s.config.reveal == Reveal::Begin {
        lines.extend(listing(s.start()));
        frames.push(Frame { tag: FrameTag::Reveal, duration_ms: style.reveal_ms, svg: svg::terminal(style, &t(FrameTag::Reveal), &lines) });
    } else {
        frames.push(Frame { tag: FrameTag::Hold, duration_ms: style.hold_ms, svg: svg::terminal(style, &t(FrameTag::Hold), &lines) });
    }
    let durations = keyframe_durations(style);
    let k = durations.len();
    for (i, op) in s.ops.iter().enumerate() {
        let tag = FrameTag::Op(i + 1);
        let cmd: Vec<char> = format!(">>>{op}").chars().collect();
        for (j, d) in durations.iter().enumerate() {
            let shown = 3 + ((cmd.len() - 3) * (j + 1)).div_ceil(k);
            let mut view = lines.clone();
            view.push((cmd[..shown].iter().collect(), "cmd"));
            frames.push(Frame { tag, duration_ms: *d, svg: svg::terminal(style, &t(tag), &view) });
        }
        lines.push((cmd.iter().collect(), "cmd"));
    }
    if s.config.reveal == Reveal::Begin {
        frames.push(Frame { tag: FrameTag::Hold, duration_ms: style.hold_ms, svg: svg::terminal(style, &t(FrameTag::Hold), &lines) });
    } else {
        lines.push((String::new(), "cmd"));
        lines.extend(listing(s.end()));
        frames.push(Frame { tag: FrameTag::Reveal, duration_ms: style.reveal_ms, svg: svg::terminal(style, &t(FrameTag::Reveal), &lines) });
    }
    Ok(FrameSequence { frames })
}
