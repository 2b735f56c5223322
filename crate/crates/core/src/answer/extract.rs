// SPDX-License-Identifier: Apache-2.0

use regex::Regex;
use std::sync::LazyLock;

static MARKER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)final\s+answer\s*\**\s*:\s*\**").unwrap());

/// Text after the last "Final Answer:" marker, or the whole response.
pub fn extract_final_answer(response: &str) -> &str {
    match MARKER.find_iter(response).last() {
        Some(m) => response[m.end()..].trim(),
        None => response.trim(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn takes_last_marker() {
        assert_eq!(extract_final_answer("think\nFinal Answer: 4 chips: 20, 5, 100, 100"), "4 chips: 20, 5, 100, 100");
        assert_eq!(extract_final_answer("Final Answer: x\nfinal answer: y"), "y");
        assert_eq!(extract_final_answer("**Final Answer:** up, left"), "up, left");
        assert_eq!(extract_final_answer(" no marker "), "no marker");
    }
}
