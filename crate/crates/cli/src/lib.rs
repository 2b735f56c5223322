// SPDX-License-Identifier: Apache-2.0

//! Command implementations behind the `latentbench` binary.

pub mod check;
pub mod config;

use latentbench_core::benchmark::{
    generate_benchmark, load_benchmark, questions_jsonl, write_benchmark, Benchmark, BenchmarkSpec, Manifest,
};
use latentbench_core::render::{emit_vid2txt, export_ablation, render_frames, write_frames, AblationMode, RenderStyle};
use latentbench_core::score::{oracle_responses, score_run, ExternalJudge, JudgeMode, Report, ResponseRecord};
use latentbench_judge::{HttpJudge, JudgeConfig, UnavailableJudge};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use thiserror::Error;

pub use check::{verify_benchmark, VerifyOutcome};
pub use config::GlobalConfig;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("verification failed for {} scenario(s): {}", .0.len(), .0.join(", "))]
    Verify(Vec<String>),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    /// 1 verification failure, 2 input error, 3 I/O failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Input(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

/// Directory of a benchmark given `manifest.json` or the directory itself.
pub fn manifest_root(manifest: &Path) -> PathBuf {
    if manifest.extension().is_some_and(|e| e == "json") {
        manifest.parent().map(Path::to_path_buf).unwrap_or_default()
    } else {
        manifest.to_path_buf()
    }
}

/// Loads a benchmark from a manifest path or its directory. Missing files
/// are I/O errors, malformed ones input errors.
pub fn open_benchmark(manifest: &Path) -> Result<(PathBuf, Benchmark), CliError> {
    let root = manifest_root(manifest);
    match load_benchmark(&root) {
        Ok(b) => Ok((root, b)),
        Err(e @ latentbench_core::benchmark::LoadError::Io { .. }) => Err(CliError::Io(e.to_string())),
        Err(e) => Err(CliError::Input(e.to_string())),
    }
}

pub fn read_spec(path: &Path) -> Result<BenchmarkSpec, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Generates and writes a benchmark; returns the manifest.
pub fn cmd_gen(spec: &BenchmarkSpec, out: &Path) -> Result<Manifest, CliError> {
    spec.validate().map_err(|e| CliError::Input(e.to_string()))?;
    let bench = generate_benchmark(spec).map_err(|e| CliError::Input(e.to_string()))?;
    write_benchmark(&bench, out).map_err(|e| CliError::io(out, e))?;
    Ok(bench.manifest)
}

#[derive(Debug, Clone, Default)]
pub struct RenderOptions {
    pub vid2txt: bool,
    pub ablate: Option<AblationMode>,
    /// Skips the full frame directories (useful with `ablate`).
    pub skip_frames: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RenderSummary {
    pub scenarios: usize,
    pub frames: usize,
    pub ablation_frames: usize,
}

#[derive(Serialize)]
struct BundleInfo<'a> {
    mode: &'a str,
    scenario_id: &'a str,
    source_frames: usize,
    source_indices: &'a [usize],
}

pub fn ablation_dir(root: &Path, mode: AblationMode, id: &str) -> PathBuf {
    root.join("ablation").join(mode.as_str()).join(id)
}

pub fn cmd_render(manifest: &Path, style: &RenderStyle, opts: &RenderOptions) -> Result<RenderSummary, CliError> {
    style.validate().map_err(|e| CliError::Input(e.to_string()))?;
    let (root, bench) = open_benchmark(manifest)?;
    let counts = bench
        .manifest
        .scenarios
        .par_iter()
        .zip(&bench.scenarios)
        .zip(&bench.questions)
        .map(|((rec, s), qs)| -> Result<(usize, usize), CliError> {
            let seq = render_frames(s, style).map_err(|e| CliError::Input(format!("{}: {e}", s.id)))?;
            if !opts.skip_frames {
                let dir = root.join(&rec.frames_dir);
                write_frames(&seq, &dir).map_err(|e| CliError::io(&dir, e))?;
            }
            if opts.vid2txt {
                let path = root.join(&rec.frames_dir).with_file_name("vid2txt.txt");
                fs::write(&path, emit_vid2txt(s)).map_err(|e| CliError::io(&path, e))?;
            }
            let mut kept = 0;
            if let Some(mode) = opts.ablate {
                let bundle = export_ablation(&seq, mode, s);
                let dir = ablation_dir(&root, mode, &s.id);
                if dir.exists() {
                    fs::remove_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
                }
                fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
                if mode != AblationMode::TextOnly {
                    let frames = dir.join("frames");
                    write_frames(&bundle.frames, &frames).map_err(|e| CliError::io(&frames, e))?;
                }
                let info = BundleInfo {
                    mode: mode.as_str(),
                    scenario_id: &s.id,
                    source_frames: seq.len(),
                    source_indices: &bundle.source_indices,
                };
                let json = serde_json::to_string_pretty(&info).expect("bundle serializes") + "\n";
                fs::write(dir.join("bundle.json"), json).map_err(|e| CliError::io(&dir, e))?;
                fs::write(dir.join("questions.jsonl"), questions_jsonl(qs)).map_err(|e| CliError::io(&dir, e))?;
                kept = bundle.frames.len();
            }
            Ok((seq.len(), kept))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RenderSummary {
        scenarios: counts.len(),
        frames: counts.iter().map(|c| c.0).sum(),
        ablation_frames: counts.iter().map(|c| c.1).sum(),
    })
}

/// Reads responses JSONL. Blank lines are skipped.
pub fn read_responses(path: &Path) -> Result<Vec<ResponseRecord>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| CliError::Input(format!("{}:{}: {e}", path.display(), i + 1)))
        })
        .collect()
}

pub fn write_responses(path: &Path, records: &[ResponseRecord]) -> Result<(), CliError> {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("response serializes"));
        out.push('\n');
    }
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, out).map_err(|e| CliError::io(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JudgeChoice {
    Deterministic,
    External,
}

/// External judge from config, or a stand-in that fails every call (and so
/// forces flagged deterministic fallbacks) when none is usable.
pub fn external_judge(config: Option<&JudgeConfig>) -> Box<dyn ExternalJudge> {
    let reason = match config.map(|c| HttpJudge::new(c.clone())) {
        Some(Ok(j)) => return Box::new(j),
        Some(Err(e)) => e.to_string(),
        None => "no judge section in the config".to_string(),
    };
    log::warn!("external judge unavailable ({reason}); using deterministic verdicts");
    Box::new(UnavailableJudge(reason))
}

pub fn cmd_score(
    manifest: &Path,
    responses: &[ResponseRecord],
    judge: JudgeChoice,
    judge_config: Option<&JudgeConfig>,
) -> Result<Report, CliError> {
    let (_, bench) = open_benchmark(manifest)?;
    let external;
    let mode = match judge {
        JudgeChoice::Deterministic => JudgeMode::Deterministic,
        JudgeChoice::External => {
            external = external_judge(judge_config);
            JudgeMode::External(external.as_ref())
        }
    };
    score_run(&bench, responses, mode).map_err(|e| CliError::Input(e.to_string()))
}

pub fn write_report(report: &Report, out: &Path) -> Result<(PathBuf, PathBuf), CliError> {
    fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let (json, csv) = (out.join("report.json"), out.join("report.csv"));
    fs::write(&json, report.to_json()).map_err(|e| CliError::io(&json, e))?;
    fs::write(&csv, report.to_csv()).map_err(|e| CliError::io(&csv, e))?;
    Ok((json, csv))
}

/// Scripted responders used for calibration runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Responder {
    Oracle,
    Blank,
}

pub fn scripted_responses(manifest: &Path, who: Responder) -> Result<Vec<ResponseRecord>, CliError> {
    let (_, bench) = open_benchmark(manifest)?;
    let mut out = oracle_responses(&bench);
    if who == Responder::Blank {
        for r in &mut out {
            r.response.clear();
            r.model = Some("blank".into());
        }
    }
    Ok(out)
}

fn table_block(out: &mut String, title: &str, rows: &BTreeMap<String, usize>) {
    let _ = writeln!(out, "{title}:");
    for (k, v) in rows {
        let _ = writeln!(out, "  {k:<18} {v:>5}");
    }
}

/// Balance table for a manifest.
pub fn cmd_stats(manifest: &Path) -> Result<String, CliError> {
    let (_, bench) = open_benchmark(manifest)?;
    let m = &bench.manifest;
    let mut out = String::new();
    let _ = writeln!(out, "{}", m.summary.line());
    table_block(&mut out, "demonstrations", &m.summary.per_demo);
    table_block(&mut out, "skills", &m.summary.per_skill);
    table_block(&mut out, "operation counts", &m.summary.per_bucket);
    table_block(&mut out, "state sizes", &m.summary.per_size);
    table_block(&mut out, "reveal", &m.summary.per_reveal);
    if !bench.scenarios.is_empty() {
        let ops: Vec<usize> = bench.scenarios.iter().map(|s| s.ops.len()).collect();
        let mean = ops.iter().sum::<usize>() as f64 / ops.len() as f64;
        let words: Vec<usize> = bench.questions.iter().flatten().map(|q| q.prompt.split_whitespace().count()).collect();
        let _ = writeln!(
            out,
            "operations per video: min {} mean {mean:.2} max {}",
            ops.iter().min().unwrap(),
            ops.iter().max().unwrap()
        );
        let _ = writeln!(out, "prompt words: mean {:.1}", words.iter().sum::<usize>() as f64 / words.len() as f64);
    }
    let _ = writeln!(out, "manifest digest: {}", m.digest());
    Ok(out)
}
