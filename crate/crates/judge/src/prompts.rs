// SPDX-License-Identifier: Apache-2.0

use latentbench_core::sim::DemoKind;
use thiserror::Error;

pub const JUDGE_TEMPLATE: &str = "You will be given a question, a model response and a ground-truth answer. Your task is to determine whether the model response is correct based on the ground-truth answer. The model response should contain all information in the ground-truth answer.

Question: {question}

Model Response: {response}

Ground-Truth Answer: {ground_truth}

Directly output \"Correct\" or \"Incorrect\":";

// Operation-extraction prompts. Shipped for reference; scoring parses
// operations deterministically.

const EXTRACT_MOVES: &str = "You will be given a model-generated response describing a sequence of movements. Your task is to extract the movements in the order they appear and return them as a list (e.g., ['left', 'up', 'down', 'right']).

Model Response: {response}

Extracted Movements:";

const EXTRACT_SWAPS: &str = "You will be given a model-generated response describing a sequence of cup swaps. Each swap is represented as a pair of coordinates—for example, (a1, b2)—indicating the two positions being swapped.

Your task:
Extract all coordinate pairs from the response in the exact order they appear, and return them as a list of tuples.

Format your answer like this:
[('a1', 'b2'), ('c1', 'b1'), ('a3', 'b2')]

Model Response: {response}

Extracted Swaps:";

const EXTRACT_COMMAND: &str = "You will be given a model-generated response regarding a file operation command in Linux system.

Your task:
Identify and extract only the actual command from the model response, removing any irrelevant or descriptive text.

Model Response: {response}

Extracted Command:";

const EXTRACT_CARD_OPS: &str = "You will be given a model-generated response describing a sequence of operations performed to cards. Each operation either adds or removes a card from pile0 or pile1.

Your task:
- Extract all valid operations and return them as a list of strings.
- Each operation must involve either adding or removing a card to or from pile0 or pile1.
- If no valid operations are found, return an empty list ([]).

Format your answer like this:
['add 6 of Hearts to pile0', 'remove King of Clubs from pile0']

Model Response: {response}

Extracted Operations:";

const EXTRACT_CHIP_OPS: &str = "You will be given a model-generated response describing a sequence of operations involving chips and cups. Each operation either adds or removes a chip from cup0 or cup1.

Your task:
- Extract all valid operations and return them as a list of strings.
- Each operation must involve either adding or removing a chip to or from cup0 or cup1.
- If no valid operations are found, return an empty list ([]).

Format your answer like this:
['add 20 to cup0', 'remove 50 cup0']

Model Response: {response}

Extracted Operations:";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PromptError {
    #[error("the {0} slot is empty")]
    EmptySlot(&'static str),
}

/// Replaces `{name}` slots in one left-to-right pass, so slot values that
/// themselves contain braces are inserted verbatim.
fn fill(template: &str, slots: &[(&str, &str)]) -> String {
    let mut out = String::with_capacity(template.len() + slots.iter().map(|s| s.1.len()).sum::<usize>());
    let mut rest = template;
    'scan: while let Some(open) = rest.find('{') {
        for (name, value) in slots {
            if rest[open + 1..].starts_with(name) && rest[open + 1 + name.len()..].starts_with('}') {
                out.push_str(&rest[..open]);
                out.push_str(value);
                rest = &rest[open + name.len() + 2..];
                continue 'scan;
            }
        }
        out.push_str(&rest[..=open]);
        rest = &rest[open + 1..];
    }
    out.push_str(rest);
    out
}

pub fn build_judge_prompt(question: &str, ground_truth: &str, response: &str) -> Result<String, PromptError> {
    for (name, v) in [("question", question), ("ground_truth", ground_truth), ("response", response)] {
        if v.trim().is_empty() {
            return Err(PromptError::EmptySlot(name));
        }
    }
    Ok(fill(JUDGE_TEMPLATE, &[("question", question), ("response", response), ("ground_truth", ground_truth)]))
}

pub fn extraction_prompt(demo: DemoKind, response: &str) -> String {
    let template = match demo {
        DemoKind::Number | DemoKind::Circle => EXTRACT_MOVES,
        DemoKind::Cup => EXTRACT_SWAPS,
        DemoKind::File => EXTRACT_COMMAND,
        DemoKind::Card => EXTRACT_CARD_OPS,
        DemoKind::Chip => EXTRACT_CHIP_OPS,
    };
    fill(template, &[("response", response)])
}
