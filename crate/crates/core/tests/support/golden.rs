// SPDX-License-Identifier: Apache-2.0

//! Prompt templates transcribed by hand into `tests/golden`.

use latentbench_core::question::QuestionItem;
use latentbench_core::scenario::{Reveal, Scenario};
use latentbench_core::sim::DemoKind;
use std::collections::BTreeMap;
use std::path::PathBuf;

pub fn load(demo: DemoKind) -> BTreeMap<String, String> {
    let path = PathBuf::from(super::GOLDEN_DIR).join(format!("{}.txt", demo.as_str()));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let mut out = BTreeMap::new();
    let mut key: Option<String> = None;
    let mut body: Vec<&str> = Vec::new();
    for line in text.lines() {
        if let Some(k) = line.strip_prefix("=== ") {
            if let Some(prev) = key.replace(k.to_string()) {
                out.insert(prev, body.join("\n"));
            }
            body.clear();
        } else {
            body.push(line);
        }
    }
    if let Some(prev) = key {
        out.insert(prev, body.join("\n"));
    }
    out
}

pub fn fill(template: &str, bindings: &BTreeMap<String, String>) -> String {
    bindings.iter().fold(template.to_string(), |t, (k, v)| t.replace(&format!("{{{k}}}"), v))
}

/// The prompt `item` should carry, rebuilt from the template files.
pub fn expected_prompt(golden: &BTreeMap<String, String>, s: &Scenario, item: &QuestionItem) -> String {
    let instr_key = match (s.demo(), s.config.reveal) {
        (DemoKind::File, _) => "instruction",
        (_, Reveal::Begin) => "instruction_begin",
        (_, Reveal::End) => "instruction_end",
    };
    format!(
        "{}\n{}\n{}",
        fill(&golden[instr_key], &item.bindings),
        fill(&golden[&item.template], &item.bindings),
        golden["answer_prompt"]
    )
}
