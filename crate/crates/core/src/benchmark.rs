// SPDX-License-Identifier: Apache-2.0

//! Balanced benchmark sets: quota-driven slot assignment, per-slot seeds,
//! parallel scenario generation and the manifest that indexes the output.

use crate::question::{generate_question_set, QuestionItem};
use crate::rng::{derive_seed, StreamRng, STREAM_SLOTS};
use crate::scenario::{generate_scenario, sha256_hex, GenError, Reveal, Scenario, ScenarioConfig, BOARD_SIZES, CONTAINER_COUNTS};
use crate::sim::DemoKind;
use crate::skill::Skill;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpBucket {
    pub name: String,
    pub min: usize,
    pub max: usize,
    pub quota: usize,
}

/// One state-size variant: the board side for board demos and the
/// container count for the others.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeVariant {
    pub name: String,
    pub board: u8,
    pub containers: u8,
    pub quota: usize,
}

impl SizeVariant {
    pub fn state_size(&self, demo: DemoKind) -> u8 {
        if demo.is_board() {
            self.board
        } else {
            self.containers
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RevealSplit {
    pub begin: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchmarkSpec {
    pub master_seed: u64,
    pub per_demo: BTreeMap<DemoKind, usize>,
    pub buckets: Vec<OpBucket>,
    pub sizes: Vec<SizeVariant>,
    pub reveal: RevealSplit,
}

pub const DEFAULT_MASTER_SEED: u64 = 20250528;

impl Default for BenchmarkSpec {
    fn default() -> Self {
        let bucket = |name: &str, min, max| OpBucket { name: name.into(), min, max, quota: 120 };
        let size = |name: &str, board, containers| SizeVariant { name: name.into(), board, containers, quota: 120 };
        BenchmarkSpec {
            master_seed: DEFAULT_MASTER_SEED,
            per_demo: DemoKind::ALL.into_iter().map(|d| (d, 40)).collect(),
            buckets: vec![bucket("5-9", 5, 9), bucket("10-14", 10, 14)],
            sizes: vec![size("small", 3, 1), size("large", 4, 2)],
            reveal: RevealSplit { begin: 120, end: 120 },
        }
    }
}

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("inconsistent quotas: {0}")]
    Quota(String),
    #[error("invalid bucket {name}: {reason}")]
    Bucket { name: String, reason: String },
    #[error("invalid size variant {name}: {reason}")]
    Size { name: String, reason: String },
}

impl BenchmarkSpec {
    /// A spec holding `count` scenarios of one demonstration.
    pub fn single(demo: DemoKind, count: usize, master_seed: u64) -> Self {
        BenchmarkSpec {
            master_seed,
            per_demo: [(demo, count)].into(),
            buckets: vec![OpBucket { name: "5-9".into(), min: 5, max: 9, quota: count }],
            sizes: vec![SizeVariant { name: "small".into(), board: 3, containers: 1, quota: count }],
            reveal: RevealSplit { begin: count.div_ceil(2), end: count / 2 },
        }
    }

    pub fn total(&self) -> usize {
        self.per_demo.values().sum()
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        let total = self.total();
        let check = |what: &str, sum: usize| {
            if sum == total {
                Ok(())
            } else {
                Err(SpecError::Quota(format!("{what} quotas sum to {sum}, demo quotas to {total}")))
            }
        };
        check("bucket", self.buckets.iter().map(|b| b.quota).sum())?;
        check("size", self.sizes.iter().map(|s| s.quota).sum())?;
        check("reveal", self.reveal.begin + self.reveal.end)?;
        for (i, b) in self.buckets.iter().enumerate() {
            let bad = |reason: &str| Err(SpecError::Bucket { name: b.name.clone(), reason: reason.into() });
            if b.min == 0 || b.min > b.max {
                return bad("needs 1 <= min <= max");
            }
            if self.buckets[..i].iter().any(|o| o.name == b.name) {
                return bad("duplicate name");
            }
            if self.buckets[..i].iter().any(|o| o.min <= b.max && b.min <= o.max) {
                return bad("overlaps another bucket");
            }
        }
        for (i, s) in self.sizes.iter().enumerate() {
            let bad = |reason: String| Err(SpecError::Size { name: s.name.clone(), reason });
            if !BOARD_SIZES.contains(&s.board) {
                return bad(format!("board side {} outside {BOARD_SIZES:?}", s.board));
            }
            if !CONTAINER_COUNTS.contains(&s.containers) {
                return bad(format!("container count {} outside {CONTAINER_COUNTS:?}", s.containers));
            }
            if self.sizes[..i].iter().any(|o| o.name == s.name) {
                return bad("duplicate name".into());
            }
        }
        Ok(())
    }
}

/// Attributes of one quota slot before its scenario is generated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    pub index: usize,
    pub demo: DemoKind,
    pub bucket: String,
    pub size_variant: String,
    pub config: ScenarioConfig,
}

/// Picks the value with remaining quota that is rarest among slots sharing
/// `group`; ties go to the value with the most quota left, then the first.
fn pick(remaining: &mut [usize], joint: &mut BTreeMap<(String, usize), usize>, group: &str) -> usize {
    let i = (0..remaining.len())
        .filter(|&i| remaining[i] > 0)
        .min_by_key(|&i| (joint.get(&(group.to_string(), i)).copied().unwrap_or(0), usize::MAX - remaining[i], i))
        .expect("quotas sum to the slot count");
    remaining[i] -= 1;
    *joint.entry((group.to_string(), i)).or_default() += 1;
    i
}

/// Deterministic greedy assignment. Global quotas are met exactly; crossings
/// with demonstrations and earlier attributes are spread as evenly as the
/// quotas permit.
pub fn assign_slots(spec: &BenchmarkSpec) -> Result<Vec<Slot>, SpecError> {
    spec.validate()?;
    let mut bucket_left: Vec<usize> = spec.buckets.iter().map(|b| b.quota).collect();
    let mut size_left: Vec<usize> = spec.sizes.iter().map(|s| s.quota).collect();
    let mut reveal_left = vec![spec.reveal.begin, spec.reveal.end];
    let (mut jb, mut js, mut jr) = (BTreeMap::new(), BTreeMap::new(), BTreeMap::new());
    let mut slots = Vec::with_capacity(spec.total());
    for (&demo, &count) in &spec.per_demo {
        for _ in 0..count {
            let index = slots.len();
            let b = pick(&mut bucket_left, &mut jb, demo.as_str());
            let s = pick(&mut size_left, &mut js, &format!("{demo}/{b}"));
            let r = pick(&mut reveal_left, &mut jr, &format!("{demo}/{b}/{s}"));
            let seed = derive_seed(spec.master_seed, index as u64);
            let bucket = &spec.buckets[b];
            let op_count = StreamRng::new(seed, STREAM_SLOTS).range_inclusive(bucket.min, bucket.max);
            let size = &spec.sizes[s];
            slots.push(Slot {
                index,
                demo,
                bucket: bucket.name.clone(),
                size_variant: size.name.clone(),
                config: ScenarioConfig {
                    demo,
                    state_size: size.state_size(demo),
                    op_count,
                    reveal: if r == 0 { Reveal::Begin } else { Reveal::End },
                    seed,
                },
            });
        }
    }
    Ok(slots)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioRecord {
    pub id: String,
    pub slot: usize,
    pub config: ScenarioConfig,
    pub config_digest: String,
    pub bucket: String,
    pub size_variant: String,
    pub script_path: String,
    pub frames_dir: String,
    pub questions_path: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub videos: usize,
    pub questions: usize,
    pub per_demo: BTreeMap<String, usize>,
    pub per_skill: BTreeMap<String, usize>,
    pub per_bucket: BTreeMap<String, usize>,
    pub per_size: BTreeMap<String, usize>,
    pub per_reveal: BTreeMap<String, usize>,
}

impl Summary {
    pub fn of(records: &[ScenarioRecord]) -> Self {
        let mut s = Summary { videos: records.len(), questions: records.len() * Skill::ALL.len(), ..Default::default() };
        for r in records {
            *s.per_demo.entry(r.config.demo.to_string()).or_default() += 1;
            *s.per_bucket.entry(r.bucket.clone()).or_default() += 1;
            *s.per_size.entry(r.size_variant.clone()).or_default() += 1;
            *s.per_reveal.entry(r.config.reveal.as_str().to_string()).or_default() += 1;
        }
        if !records.is_empty() {
            s.per_skill = Skill::ALL.iter().map(|k| (k.slug().to_string(), records.len())).collect();
        }
        s
    }

    pub fn line(&self) -> String {
        format!("videos={} questions={}", self.videos, self.questions)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub spec: BenchmarkSpec,
    pub scenarios: Vec<ScenarioRecord>,
    pub summary: Summary,
}

impl Manifest {
    /// Summary matches the records.
    pub fn check(&self) -> bool {
        Summary::of(&self.scenarios) == self.summary
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }

    pub fn digest(&self) -> String {
        sha256_hex(self.to_json().as_bytes())
    }
}

#[derive(Debug, Clone)]
pub struct Benchmark {
    pub manifest: Manifest,
    pub scenarios: Vec<Scenario>,
    /// Six items per scenario, parallel to `scenarios`.
    pub questions: Vec<Vec<QuestionItem>>,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("slot {slot}: {source}")]
    Gen { slot: usize, source: GenError },
}

pub fn script_path(id: &str) -> String {
    format!("scenarios/{id}/script.json")
}

pub fn questions_path(id: &str) -> String {
    format!("scenarios/{id}/questions.jsonl")
}

pub fn frames_dir(id: &str) -> String {
    format!("scenarios/{id}/frames")
}

pub fn generate_benchmark(spec: &BenchmarkSpec) -> Result<Benchmark, BenchError> {
    let slots = assign_slots(spec)?;
    let built: Vec<(Scenario, Vec<QuestionItem>)> = slots
        .par_iter()
        .map(|slot| {
            let s = generate_scenario(&slot.config).map_err(|source| BenchError::Gen { slot: slot.index, source })?;
            let q = generate_question_set(&s);
            Ok((s, q))
        })
        .collect::<Result<_, BenchError>>()?;
    let records: Vec<ScenarioRecord> = slots
        .iter()
        .zip(&built)
        .map(|(slot, (s, _))| ScenarioRecord {
            id: s.id.clone(),
            slot: slot.index,
            config: slot.config.clone(),
            config_digest: slot.config.digest(),
            bucket: slot.bucket.clone(),
            size_variant: slot.size_variant.clone(),
            script_path: script_path(&s.id),
            frames_dir: frames_dir(&s.id),
            questions_path: questions_path(&s.id),
        })
        .collect();
    let summary = Summary::of(&records);
    let (scenarios, questions) = built.into_iter().unzip();
    Ok(Benchmark { manifest: Manifest { spec: spec.clone(), scenarios: records, summary }, scenarios, questions })
}

/// Scenario script as written to disk.
pub fn script_json(s: &Scenario) -> String {
    serde_json::to_string_pretty(s).expect("scenario serializes") + "\n"
}

pub fn questions_jsonl(items: &[QuestionItem]) -> String {
    items.iter().map(|q| serde_json::to_string(q).expect("item serializes") + "\n").collect()
}

fn write_file(path: &Path, contents: &str) -> io::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut f = fs::File::create(path)?;
    f.write_all(contents.as_bytes())
}

/// Writes `manifest.json`, `questions.jsonl` and one script and question file
/// per scenario under `out`.
pub fn write_benchmark(bench: &Benchmark, out: &Path) -> io::Result<()> {
    for ((rec, s), q) in bench.manifest.scenarios.iter().zip(&bench.scenarios).zip(&bench.questions) {
        write_file(&out.join(&rec.script_path), &script_json(s))?;
        write_file(&out.join(&rec.questions_path), &questions_jsonl(q))?;
    }
    write_file(&out.join("questions.jsonl"), &bench.questions.iter().map(|q| questions_jsonl(q)).collect::<String>())?;
    write_file(&out.join("manifest.json"), &bench.manifest.to_json())
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
}

fn read(path: &Path) -> Result<String, LoadError> {
    fs::read_to_string(path).map_err(|source| LoadError::Io { path: path.display().to_string(), source })
}

pub fn read_manifest(path: &Path) -> Result<Manifest, LoadError> {
    serde_json::from_str(&read(path)?).map_err(|source| LoadError::Json { path: path.display().to_string(), source })
}

pub fn read_script(root: &Path, rec: &ScenarioRecord) -> Result<Scenario, LoadError> {
    let path = root.join(&rec.script_path);
    serde_json::from_str(&read(&path)?).map_err(|source| LoadError::Json { path: path.display().to_string(), source })
}

pub fn read_questions(root: &Path, rec: &ScenarioRecord) -> Result<Vec<QuestionItem>, LoadError> {
    let path = root.join(&rec.questions_path);
    read(&path)?
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|source| LoadError::Json { path: path.display().to_string(), source }))
        .collect()
}

/// Reads a written benchmark back from its root directory.
pub fn load_benchmark(root: &Path) -> Result<Benchmark, LoadError> {
    let manifest = read_manifest(&root.join("manifest.json"))?;
    let mut scenarios = Vec::with_capacity(manifest.scenarios.len());
    let mut questions = Vec::with_capacity(manifest.scenarios.len());
    for rec in &manifest.scenarios {
        scenarios.push(read_script(root, rec)?);
        questions.push(read_questions(root, rec)?);
    }
    Ok(Benchmark { manifest, scenarios, questions })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_slots_are_balanced_within_each_demo() {
        let slots = assign_slots(&BenchmarkSpec::default()).unwrap();
        assert_eq!(slots.len(), 240);
        for demo in DemoKind::ALL {
            let mine: Vec<&Slot> = slots.iter().filter(|s| s.demo == demo).collect();
            assert_eq!(mine.len(), 40);
            assert_eq!(mine.iter().filter(|s| s.bucket == "5-9").count(), 20);
            assert_eq!(mine.iter().filter(|s| s.size_variant == "small").count(), 20);
            assert_eq!(mine.iter().filter(|s| s.config.reveal == Reveal::Begin).count(), 20);
        }
    }

    #[test]
    fn op_counts_stay_in_bucket() {
        let spec = BenchmarkSpec::default();
        for s in assign_slots(&spec).unwrap() {
            let b = spec.buckets.iter().find(|b| b.name == s.bucket).unwrap();
            assert!((b.min..=b.max).contains(&s.config.op_count));
        }
    }

    #[test]
    fn bad_quotas_are_rejected() {
        let mut spec = BenchmarkSpec::default();
        spec.buckets[0].quota = 119;
        assert!(matches!(spec.validate(), Err(SpecError::Quota(_))));
        let mut spec = BenchmarkSpec::default();
        spec.buckets[1].min = 9;
        assert!(matches!(spec.validate(), Err(SpecError::Bucket { .. })));
    }

    #[test]
    fn single_slot_spec() {
        let b = generate_benchmark(&BenchmarkSpec::single(DemoKind::Number, 1, 3)).unwrap();
        assert_eq!(b.manifest.summary.videos, 1);
        assert_eq!(b.manifest.summary.questions, 6);
        assert!(b.manifest.check());
    }
}
