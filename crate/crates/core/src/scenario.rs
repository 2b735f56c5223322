// SPDX-License-Identifier: Apache-2.0

//! Seeded generation of single scenarios: a random initial state followed by
//! `op_count` operations sampled from the valid moves of each intermediate state.

use crate::rng::{StreamRng, STREAM_SCENARIO};
use crate::sim::{
    self, apply_op, Action, Card, CardPiles, ChipCups, Chips, CircleGrid, Color, CupBoard, DemoKind, Direction,
    FileCommand, FileSystem, NumberBoard, Operation, Pos, State, DENOMINATIONS,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

pub const BOARD_SIZES: std::ops::RangeInclusive<u8> = 2..=9;
pub const CONTAINER_COUNTS: std::ops::RangeInclusive<u8> = 1..=2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reveal {
    Begin,
    End,
}

impl Reveal {
    pub fn as_str(self) -> &'static str {
        match self {
            Reveal::Begin => "begin",
            Reveal::End => "end",
        }
    }

    /// The endpoint the video never shows.
    pub fn latent(self) -> Endpoint {
        match self {
            Reveal::Begin => Endpoint::End,
            Reveal::End => Endpoint::Start,
        }
    }

    pub fn shown(self) -> Endpoint {
        self.latent().other()
    }
}

impl FromStr for Reveal {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "begin" => Ok(Reveal::Begin),
            "end" => Ok(Reveal::End),
            _ => Err(format!("unknown reveal timing '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    Start,
    End,
}

impl Endpoint {
    pub fn as_str(self) -> &'static str {
        match self {
            Endpoint::Start => "start",
            Endpoint::End => "end",
        }
    }

    pub fn other(self) -> Endpoint {
        match self {
            Endpoint::Start => Endpoint::End,
            Endpoint::End => Endpoint::Start,
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub demo: DemoKind,
    /// Board side for board demos, container count otherwise.
    pub state_size: u8,
    pub op_count: usize,
    pub reveal: Reveal,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("no valid operation from state {step} of a {demo} scenario")]
    Stuck { demo: DemoKind, step: usize },
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), GenError> {
        if self.op_count == 0 {
            return Err(GenError::Config("op_count must be at least 1".into()));
        }
        let legal = if self.demo.is_board() { BOARD_SIZES } else { CONTAINER_COUNTS };
        if !legal.contains(&self.state_size) {
            return Err(GenError::Config(format!(
                "state_size {} outside {}..={} for {}",
                self.state_size,
                legal.start(),
                legal.end(),
                self.demo
            )));
        }
        Ok(())
    }

    /// Hex sha256 of the canonical JSON encoding.
    pub fn digest(&self) -> String {
        sha256_hex(&serde_json::to_vec(self).expect("config serializes"))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// A fully simulated task instance. `states.len() == ops.len() + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub id: String,
    pub config: ScenarioConfig,
    pub states: Vec<State>,
    pub ops: Vec<Operation>,
}

#[derive(Serialize)]
struct ScriptBody<'a> {
    config: &'a ScenarioConfig,
    states: &'a [State],
    ops: &'a [Operation],
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("state 1 is malformed: {0}")]
    Initial(#[from] sim::StateError),
    #[error("{states} states for {ops} operations")]
    Length { states: usize, ops: usize },
    #[error("operation {index} does not produce state {}", index + 1)]
    Transition { index: usize },
    #[error(transparent)]
    Sim(#[from] sim::SequenceError),
    #[error("state kind does not match config demo {0}")]
    Kind(DemoKind),
    #[error("stored id {stored} differs from content hash {computed}")]
    Id { stored: String, computed: String },
}

impl Scenario {
    pub fn compute_id(config: &ScenarioConfig, states: &[State], ops: &[Operation]) -> String {
        let body = serde_json::to_vec(&ScriptBody { config, states, ops }).expect("script serializes");
        format!("{}-{}", config.demo, &sha256_hex(&body)[..16])
    }

    /// Builds a scenario by replaying `ops` from `start`; the config's
    /// op count is taken from `ops`.
    pub fn replay(mut config: ScenarioConfig, start: State, ops: Vec<Operation>) -> Result<Scenario, ScenarioError> {
        config.op_count = ops.len();
        if start.kind() != config.demo {
            return Err(ScenarioError::Kind(config.demo));
        }
        start.check()?;
        let states = sim::trace(&start, &ops)?;
        let id = Self::compute_id(&config, &states, &ops);
        Ok(Scenario { id, config, states, ops })
    }

    pub fn demo(&self) -> DemoKind {
        self.config.demo
    }

    pub fn start(&self) -> &State {
        &self.states[0]
    }

    pub fn end(&self) -> &State {
        self.states.last().expect("non-empty states")
    }

    pub fn at(&self, e: Endpoint) -> &State {
        match e {
            Endpoint::Start => self.start(),
            Endpoint::End => self.end(),
        }
    }

    pub fn latent(&self) -> Endpoint {
        self.config.reveal.latent()
    }

    /// Full consistency check of a script, including its id.
    pub fn check(&self) -> Result<(), ScenarioError> {
        if self.states.len() != self.ops.len() + 1 || self.ops.len() != self.config.op_count {
            return Err(ScenarioError::Length { states: self.states.len(), ops: self.ops.len() });
        }
        if self.states.iter().any(|s| s.kind() != self.config.demo) {
            return Err(ScenarioError::Kind(self.config.demo));
        }
        self.states[0].check()?;
        for (i, op) in self.ops.iter().enumerate() {
            let next = apply_op(&self.states[i], op)
                .map_err(|error| sim::SequenceError { index: i + 1, error })?;
            if next != self.states[i + 1] {
                return Err(ScenarioError::Transition { index: i + 1 });
            }
        }
        let computed = Self::compute_id(&self.config, &self.states, &self.ops);
        if computed != self.id {
            return Err(ScenarioError::Id { stored: self.id.clone(), computed });
        }
        Ok(())
    }

    /// Commands that populate the file system of state 1 (one `touch` per path).
    pub fn file_seed_commands(&self) -> Vec<FileCommand> {
        match self.start() {
            State::File(fs) => fs
                .paths
                .iter()
                .map(|(p, files)| FileCommand::Touch { path: p.clone(), files: files.iter().cloned().collect() })
                .collect(),
            _ => Vec::new(),
        }
    }
}

pub fn container_name(demo: DemoKind, i: usize) -> String {
    format!("{}{i}", demo.container_prefix().unwrap_or("container"))
}

const STEMS: &str = "abcdefghijklmnopqrstuvwxyz";

/// Every file name the generator may use: single-letter stem plus extension.
pub fn file_name_pool() -> Vec<String> {
    STEMS.chars().flat_map(|c| sim::file::EXTENSIONS.iter().map(move |e| format!("{c}.{e}"))).collect()
}

pub fn initial_state(demo: DemoKind, size: u8, rng: &mut StreamRng) -> State {
    let n = size as usize;
    match demo {
        DemoKind::Number => {
            let mut vals: Vec<u8> = (0..(n * n) as u8).collect();
            rng.shuffle(&mut vals);
            State::Number(NumberBoard { size, rows: vals.chunks(n).map(<[u8]>::to_vec).collect() })
        }
        DemoKind::Circle => {
            let rows = (0..n)
                .map(|_| (0..n).map(|_| if rng.coin() { Color::Black } else { Color::White }).collect())
                .collect();
            let circle = Pos::new(rng.below(n) as u8, rng.below(n) as u8);
            State::Circle(CircleGrid { size, rows, circle })
        }
        DemoKind::Cup => {
            let cells = n * n;
            let k = rng.range_inclusive(cells.div_ceil(4), cells / 2);
            let coins = rng
                .sample_indices(cells, k)
                .into_iter()
                .map(|i| Pos::new((i / n) as u8, (i % n) as u8))
                .collect();
            State::Cup(CupBoard { size, coins })
        }
        DemoKind::File => {
            let pool = file_name_pool();
            let paths = (0..n)
                .map(|i| {
                    let k = rng.range_inclusive(8, 12);
                    let files = rng.sample_indices(pool.len(), k).into_iter().map(|j| pool[j].clone()).collect();
                    (container_name(demo, i), files)
                })
                .collect();
            State::File(FileSystem { paths })
        }
        DemoKind::Card => {
            let mut deck = Card::deck();
            rng.shuffle(&mut deck);
            let mut it = deck.into_iter();
            let piles = (0..n)
                .map(|i| {
                    let k = rng.range_inclusive(4, 6);
                    (container_name(demo, i), it.by_ref().take(k).collect())
                })
                .collect();
            State::Card(CardPiles { piles })
        }
        DemoKind::Chip => {
            let cups = (0..n)
                .map(|i| {
                    let k = rng.range_inclusive(2, 5);
                    let chips = (0..k).map(|_| *rng.choose(&DENOMINATIONS).unwrap()).collect();
                    (container_name(demo, i), Chips(chips))
                })
                .collect();
            State::Chip(ChipCups { cups })
        }
    }
}

/// Samples valid operations. Remembers every card that has appeared so that an
/// added card is never one seen before in the same scenario.
#[derive(Debug, Clone, Default)]
pub struct OpSampler {
    used_cards: BTreeSet<Card>,
    /// Restricts container operations to one container.
    pub only: Option<String>,
}

impl OpSampler {
    pub fn new<'a>(states: impl IntoIterator<Item = &'a State>) -> Self {
        let mut used_cards = BTreeSet::new();
        for s in states {
            if let State::Card(p) = s {
                used_cards.extend(p.all_cards());
            }
        }
        OpSampler { used_cards, only: None }
    }

    pub fn restricted(mut self, container: Option<&str>) -> Self {
        self.only = container.map(str::to_string);
        self
    }

    fn containers<'a>(&self, names: impl Iterator<Item = &'a String>) -> Vec<&'a String> {
        names.filter(|n| self.only.as_deref().is_none_or(|o| o == n.as_str())).collect()
    }

    /// One uniformly drawn valid operation, or `None` when no valid op exists.
    pub fn sample(&self, state: &State, rng: &mut StreamRng) -> Option<Operation> {
        match state {
            State::Number(b) => {
                let dirs: Vec<Direction> =
                    Direction::ALL.into_iter().filter(|d| b.slide_source(*d).is_some()).collect();
                rng.choose(&dirs).map(|&direction| Operation::Slide { direction })
            }
            State::Circle(g) => {
                let dirs: Vec<Direction> =
                    Direction::ALL.into_iter().filter(|d| g.circle.step(*d, g.size).is_some()).collect();
                rng.choose(&dirs).map(|&direction| Operation::CircleMove { direction })
            }
            State::Cup(b) => {
                let cells = (b.size as usize).pow(2);
                if cells < 2 {
                    return None;
                }
                let n = b.size as usize;
                let ij = rng.sample_indices(cells, 2);
                let p = |i: usize| Pos::new((i / n) as u8, (i % n) as u8);
                Some(Operation::CupSwap { a: p(ij[0]), b: p(ij[1]) })
            }
            State::File(fs) => self.sample_file(fs, rng),
            State::Card(piles) => {
                let names = self.containers(piles.piles.keys());
                let fresh: Vec<Card> = Card::deck()
                    .into_iter()
                    .filter(|c| !self.used_cards.contains(c) && !piles.contains(*c))
                    .collect();
                let removable: Vec<&String> = names.iter().copied().filter(|n| !piles.piles[*n].is_empty()).collect();
                let mut kinds = Vec::new();
                if !fresh.is_empty() && !names.is_empty() {
                    kinds.push(Action::Add);
                }
                if !removable.is_empty() {
                    kinds.push(Action::Remove);
                }
                match rng.choose(&kinds)? {
                    Action::Add => Some(Operation::CardAct {
                        action: Action::Add,
                        card: *rng.choose(&fresh)?,
                        pile: (*rng.choose(&names)?).clone(),
                    }),
                    Action::Remove => {
                        let pile = *rng.choose(&removable)?;
                        Some(Operation::CardAct {
                            action: Action::Remove,
                            card: *piles.piles[pile].last()?,
                            pile: pile.clone(),
                        })
                    }
                }
            }
            State::Chip(cups) => {
                let names = self.containers(cups.cups.keys());
                let removable: Vec<&String> = names.iter().copied().filter(|n| !cups.cups[*n].is_empty()).collect();
                let mut kinds = Vec::new();
                if !names.is_empty() {
                    kinds.push(Action::Add);
                }
                if !removable.is_empty() {
                    kinds.push(Action::Remove);
                }
                match rng.choose(&kinds)? {
                    Action::Add => Some(Operation::ChipAct {
                        action: Action::Add,
                        value: *rng.choose(&DENOMINATIONS)?,
                        cup: (*rng.choose(&names)?).clone(),
                    }),
                    Action::Remove => {
                        let cup = *rng.choose(&removable)?;
                        Some(Operation::ChipAct {
                            action: Action::Remove,
                            value: *rng.choose(&cups.cups[cup].0)?,
                            cup: cup.clone(),
                        })
                    }
                }
            }
        }
    }

    fn sample_file(&self, fs: &FileSystem, rng: &mut StreamRng) -> Option<Operation> {
        let pool = file_name_pool();
        let names = self.containers(fs.paths.keys());
        let touchable: Vec<&String> = names.iter().copied().filter(|p| fs.paths[*p].len() < pool.len()).collect();
        let removable: Vec<&String> = names.iter().copied().filter(|p| !fs.paths[*p].is_empty()).collect();
        // (src, dst, file) triples available to cp/mv
        let mut transfers = Vec::new();
        if self.only.is_none() {
            for (src, sf) in &fs.paths {
                for (dst, df) in &fs.paths {
                    if src != dst {
                        transfers.extend(sf.difference(df).map(|f| (src.clone(), dst.clone(), f.clone())));
                    }
                }
            }
        }
        let mut kinds = Vec::new();
        if !touchable.is_empty() {
            kinds.push(0);
        }
        if !removable.is_empty() {
            kinds.push(1);
        }
        if !transfers.is_empty() {
            kinds.extend([2, 3]);
        }
        let cmd = match *rng.choose(&kinds)? {
            0 => {
                let path = *rng.choose(&touchable)?;
                let free: Vec<&String> = pool.iter().filter(|f| !fs.paths[path].contains(*f)).collect();
                let k = rng.range_inclusive(1, free.len().min(7));
                let files = rng.sample_indices(free.len(), k).into_iter().map(|i| free[i].clone()).collect();
                FileCommand::Touch { path: path.clone(), files }
            }
            1 => {
                let path = *rng.choose(&removable)?;
                let present: Vec<&String> = fs.paths[path].iter().collect();
                let k = rng.range_inclusive(1, present.len().min(4));
                let files = rng.sample_indices(present.len(), k).into_iter().map(|i| present[i].clone()).collect();
                FileCommand::Rm { path: path.clone(), files }
            }
            kind => {
                let (src, dst, file) = rng.choose(&transfers)?.clone();
                if kind == 2 {
                    FileCommand::Cp { src, dst, file }
                } else {
                    FileCommand::Mv { src, dst, file }
                }
            }
        };
        Some(Operation::FileCmd { cmd })
    }

    /// Samples the op applied to `state`, whose predecessor is `prev`. A draw
    /// that would restore `prev` is replaced by one fresh draw.
    pub fn step(&mut self, state: &State, prev: Option<&State>, rng: &mut StreamRng) -> Option<(Operation, State)> {
        let mut op = self.sample(state, rng)?;
        let mut next = apply_op(state, &op).expect("sampled op is valid");
        if prev == Some(&next) {
            if let Some(again) = self.sample(state, rng) {
                next = apply_op(state, &again).expect("sampled op is valid");
                op = again;
            }
        }
        if let Operation::CardAct { card, .. } = &op {
            self.used_cards.insert(*card);
        }
        Some((op, next))
    }

    /// A run of `count` ops from `state`; returns the ops and the states they visit.
    pub fn walk(&mut self, state: &State, count: usize, rng: &mut StreamRng) -> Option<(Vec<Operation>, Vec<State>)> {
        let mut states = vec![state.clone()];
        let mut ops = Vec::with_capacity(count);
        for _ in 0..count {
            let cur = states.last().unwrap();
            let prev = states.len().checked_sub(2).map(|i| &states[i]);
            let (op, next) = self.step(cur, prev, rng)?;
            ops.push(op);
            states.push(next);
        }
        Some((ops, states))
    }
}

pub fn generate_scenario(config: &ScenarioConfig) -> Result<Scenario, GenError> {
    config.validate()?;
    let mut rng = StreamRng::new(config.seed, STREAM_SCENARIO);
    let s1 = initial_state(config.demo, config.state_size, &mut rng);
    let mut sampler = OpSampler::new([&s1]);
    let (ops, states) = sampler
        .walk(&s1, config.op_count, &mut rng)
        .ok_or(GenError::Stuck { demo: config.demo, step: 0 })?;
    if ops.len() != config.op_count {
        return Err(GenError::Stuck { demo: config.demo, step: ops.len() + 1 });
    }
    let id = Scenario::compute_id(config, &states, &ops);
    Ok(Scenario { id, config: config.clone(), states, ops })
}

/// Per-extension file counts, used by file questions.
pub fn count_by_extension(files: &BTreeSet<String>) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for f in files {
        if let Some(e) = sim::file::extension(f) {
            *m.entry(e.to_string()).or_insert(0) += 1;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(demo: DemoKind, size: u8, ops: usize, seed: u64) -> ScenarioConfig {
        ScenarioConfig { demo, state_size: size, op_count: ops, reveal: Reveal::Begin, seed }
    }

    #[test]
    fn number_scenario_has_t_states() {
        let s = generate_scenario(&cfg(DemoKind::Number, 3, 7, 42)).unwrap();
        assert_eq!(s.states.len(), 8);
        assert_eq!(s.ops.len(), 7);
        s.check().unwrap();
    }

    #[test]
    fn same_seed_same_id() {
        for demo in DemoKind::ALL {
            let size = if demo.is_board() { 3 } else { 2 };
            let a = generate_scenario(&cfg(demo, size, 9, 42)).unwrap();
            let b = generate_scenario(&cfg(demo, size, 9, 42)).unwrap();
            assert_eq!(a.id, b.id);
            let c = generate_scenario(&cfg(demo, size, 9, 43)).unwrap();
            assert_ne!(a.id, c.id);
        }
    }

    #[test]
    fn chip_ops_use_denominations() {
        for seed in 0..50 {
            let s = generate_scenario(&cfg(DemoKind::Chip, 1, 5, seed)).unwrap();
            for op in &s.ops {
                let Operation::ChipAct { value, .. } = op else { panic!() };
                assert!(DENOMINATIONS.contains(value));
            }
            s.check().unwrap();
        }
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(generate_scenario(&cfg(DemoKind::Number, 3, 0, 1)).is_err());
        assert!(generate_scenario(&cfg(DemoKind::Card, 3, 5, 1)).is_err());
        assert!(generate_scenario(&cfg(DemoKind::Cup, 1, 5, 1)).is_err());
    }

    #[test]
    fn initial_ranges() {
        for seed in 0..200 {
            let mut rng = StreamRng::new(seed, 0);
            let State::Cup(c) = initial_state(DemoKind::Cup, 4, &mut rng) else { panic!() };
            assert!((4..=8).contains(&c.coins.len()));
            let State::File(f) = initial_state(DemoKind::File, 2, &mut rng) else { panic!() };
            assert!(f.paths.values().all(|p| (8..=12).contains(&p.len())));
            let State::Card(p) = initial_state(DemoKind::Card, 2, &mut rng) else { panic!() };
            assert!(p.piles.values().all(|p| (4..=6).contains(&p.len())));
            let State::Chip(c) = initial_state(DemoKind::Chip, 2, &mut rng) else { panic!() };
            assert!(c.cups.values().all(|p| (2..=5).contains(&p.len())));
        }
    }

    #[test]
    fn added_cards_are_fresh() {
        for seed in 0..100 {
            let s = generate_scenario(&cfg(DemoKind::Card, 2, 14, seed)).unwrap();
            let mut seen: BTreeSet<Card> = s.start().clone().card_set();
            for op in &s.ops {
                if let Operation::CardAct { action: Action::Add, card, .. } = op {
                    assert!(seen.insert(*card), "{card} reused");
                }
            }
        }
    }

    #[test]
    fn tampered_script_fails_check() {
        let mut s = generate_scenario(&cfg(DemoKind::Cup, 3, 5, 9)).unwrap();
        s.config.seed += 1;
        assert!(matches!(s.check(), Err(ScenarioError::Id { .. })));
    }

    trait CardSet {
        fn card_set(self) -> BTreeSet<Card>;
    }

    impl CardSet for State {
        fn card_set(self) -> BTreeSet<Card> {
            match self {
                State::Card(p) => p.all_cards().collect(),
                _ => BTreeSet::new(),
            }
        }
    }
}
