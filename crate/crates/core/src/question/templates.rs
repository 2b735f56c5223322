// SPDX-License-Identifier: Apache-2.0

//! Prompt templates. Placeholders are `{name}`; `{N×N}` is the board size.

use crate::sim::DemoKind;
use crate::skill::Skill;
use regex::Regex;
use std::collections::BTreeMap;
use std::sync::LazyLock;
use thiserror::Error;

pub const ANSWER_PROMPT: &str = "Provide a summary of the final answer after 'Final Answer:'";

const NUMBER_BEGIN: &str = "The video presents a sliding puzzle on a {N×N} board. The board is filled with numbered squares, with one empty space. The video begins by showing the starting arrangement of the numbers on the board. Then, the numbers are visually masked with a blue overlay, and the puzzle undergoes a series of movements-only the squares adjacent to the empty space can be shifted into it. Please carefully watch the video and answer the following question:";
const NUMBER_END: &str = "The video presents a sliding puzzle on a {N×N} board. The board is filled with numbered squares, with one empty space. Initially, all numbered squares are visually masked with a blue overlay. Then, the puzzle undergoes a series of movements-only the squares adjacent to the empty space can be shifted into it. The video ends by showing the final arrangement of the numbers on the board. Please carefully watch the video and answer the following question:";
const NUMBER_Q: [&str; 6] = [
    "What are the {start_id} to {end_id} blue squares being moved? For each moved blue square, provide the following details: The order in which it was moved (e.g., 1st, 2nd, 3rd, etc). The coordinates before it was moved (e.g., (a,1), (c,2), etc). The direction it was moved (e.g., left, right, up, down)",
    "How many times was the '{move}' move performed in the video? For each occurrence, provide the coordinate of the square (e.g., (a,1), (c,2)...) before the move.",
    "Assuming the empty square is represented by '0', what is the arrangement of numbers on the board at the {timestamp} of the video? Provide the coordinates of each square along with the corresponding number (e.g., (a,1): 3, (a,2): 0, (b,1): 1, (b,2): 2).",
    "Assuming the empty square is represented by '0', compare the number arrangements on the board at the start and end of the video. What are the squares where the numbers differ between the two boards? Provide their coordinates along with the corresponding number at the {timestamp} of the video (e.g., (a,1): 3, (b,1): 1).",
    "If the arrangement of numbers on the board is currently in the same state as it was at the {timestamp} of the video, and the following moves are executed: `{moves}`, what will be the arrangement of numbers on the board? Assume that the empty square is represented by '0'. Provide the coordinates of each square along with the corresponding number (e.g., (a,1): 3, (a,2): 0, (b,1): 1, (b,2): 2).",
    "If the arrangement of numbers on the board is currently in the same state as it was at the {timestamp} of the video, what sequence of moves (left, right, up, down) should be executed to achieve the desired number arrangement: `{number_arrangement}`? Assume that the empty square is represented by '0'. Note that moves cannot push any square beyond the board boundary.",
];

const CUP_BEGIN: &str = "The video presents a 'Tricky Cup' puzzle on a {N×N} board. The board is filled with blue cups, each hiding either a yellow coin or nothing underneath. At the start, all cups are briefly lifted to reveal what's beneath them. Then, the cups begin a series of moves—each move swaps the positions of two cups, along with their hidden contents. Please carefully watch the video and answer the following question:";
const CUP_END: &str = "The video presents a 'Tricky Cup' puzzle on a {N×N} board. The board is filled with blue cups, each hiding either a yellow coin or nothing underneath. Initially, the contents under the cups are completely hidden. Then, the cups begin a series of moves—each move swaps the positions of two cups, along with their hidden contents. Toward the end, all cups are briefly lifted to reveal what's beneath them. Please carefully watch the video and answer the following question:";
const CUP_Q: [&str; 6] = [
    "Assume that each time two cups swap their positions, it counts as one move. What are the {start_id} to {end_id} moves shown in the video? For each move, provide the move number and the coordinates of the two cups that swapped positions. Format your response like this: 1st: (a1, b2), 2nd: (c2, b1), 3rd: (a3, c1).",
    "How many times were the cups in the row '{row_idx}' involved in the swaps? For each instance, provide the coordinate(s) of the cup(s) before the swap occurred. Format your response like this: 1st: a1, 2nd: a3, 3rd: (a1,a2) (Use a single coordinate for individual cups, or a tuple for multiple cups involved in the same swap.)",
    "What are the positions of all the coins at the {timestamp} of the video? Provide the coordinates of each coin (e.g., a2, b1, c3).",
    "Compare the distribution of contents beneath the cups at the start and end of the video. What are the positions where the contents beneath the cups differ between the two boards? Provide their coordinates along with the corresponding content at the {timestamp} of the video. Format your response like this: a1: empty, b3: coin.",
    "If the distribution of coins on the board is currently in the same state as it was at the {timestamp} of the video, and the following cup swaps are executed in order: `{moves}`, what will be the new distribution of the coins? Provide the coordinates of the coins (e.g., a1, b2).",
    "If the distribution of coins on the board is currently in the same state as it was at the {timestamp} of the video, what sequence of cup swaps should be executed to achieve the desired distribution of coins: `{board}`? Format your response as a list of coordinate pairs, such as: (a1, b2), (c3, b1). Each pair represents a single swap between two cups.",
];

const CIRCLE_BEGIN: &str = "The video presents a {N×N} grid. At the beginning of the video, all positions on the grid are filled with either a black or white piece. Then, these pieces are visually hidden but still remain in their original positions. A red circle then moves across the grid. Each time the red circle passes by a position on the grid (excluding the starting position), the color of the piece at that position *and* the colors of its immediate orthogonal neighbors (up, down, left, and right) are flipped: black becomes white, and white becomes black. Note that diagonal neighbors are *not* affected. Neighbors are only considered if they exist within the grid's boundaries. Please carefully watch the video and answer the following question:";
const CIRCLE_END: &str = "The video presents a {N×N} grid. All positions on the grid are filled with either a black or white piece. These pieces are visually hidden at the beginning of the video. A red circle then moves across the grid. Each time the red circle passes by a position on the grid (excluding the starting position), the color of the piece at that position *and* the colors of its immediate orthogonal neighbors (up, down, left, and right) are flipped: black becomes white, and white becomes black. Note that diagonal neighbors are *not* affected. Neighbors are only considered if they exist within the grid's boundaries. The video ends by showing the final arrangement of black and white pieces on the grid. Please carefully watch the video and answer the following question:";
const CIRCLE_MOVE: &str = "Assume that each time the red circle moves from one grid intersection to an adjacent one (horizontally or vertically), it counts as one move.";
const CIRCLE_Q: [&str; 6] = [
    "Assume that each time the red circle moves from one grid intersection to an adjacent one (horizontally or vertically), it counts as one move. What are the directions (left, right, up, down) of the {start_id} to {end_id} moves made by the red circle in the video? List them in order.",
    "Assume that each time the red circle moves from one grid intersection to an adjacent one (horizontally or vertically), it counts as one move. Given the movement direction `{move}`, how many times does the red circle perform this move? For each occurrence, provide the coordinate of the position before the move (e.g., (a,1), (c,2), etc).",
    "What is the arrangement of the black and white pieces on the grid at the {timestamp} of the video? Provide each piece's coordinates and color using the format: (column, row): color (e.g., (a,1): black, (c,2): white).",
    "Assume that each time the red circle moves from one grid intersection to an adjacent one (horizontally or vertically), it counts as one move. Compare the arrangement of black and white pieces on the grid at the start and end of the video. What are the coordinates where the piece color differ between the two grids? Provide these coordinates along with the corresponding piece color at the {timestamp} of the video, using the format: (column, row): color (e.g., (a,1): black, (c,2): white).",
    "Assume that each time the red circle moves from one grid intersection to an adjacent one (horizontally or vertically), it counts as one move. If the arrangement of black and white pieces and the position of the red circle on the grid is currently in the same state as it was at the {timestamp} of the video, and the following moves are executed: `{moves}`, what will be the arrangement of black and white pieces on the grid? Provide each piece's coordinates and color using the format: (column, row): color (e.g., (a,1): black; (c,2): white).",
    "Assume that each time the red circle moves from one grid intersection to an adjacent one (horizontally or vertically), it counts as one move. The red circle cannot move beyond the grid boundary. If the arrangement of black and white pieces and the position of the red circle on the grid is currently in the same state as it was at the {timestamp} of the video, what sequence of moves (left, right, up, down) should be executed by the red circle to achieve the desired arrangement of black and white pieces: `{board}`? List them in order.",
];

const FILE_INSTRUCTION: &str = "The video demonstrates a series of file manipulation commands executed in the Linux command line. To ensure accurate understanding, note these assumptions:
* `touch` commands: All files created by `touch` do not exist in the target directory prior to the command's execution.
* `rm -r` commands: All files deleted by `rm -r` do exist in the target directory prior to the command's execution.
* `cp` and `mv` commands: All source files used by `cp` and `mv` do exist in the source directory prior to the command's execution.
* The destination path for `cp` and `mv` commands does not contain the target files prior to the command.
Please carefully watch the video and answer the following question:";
const FILE_Q: [&str; 6] = [
    "What are the {start_id} to {end_id} {cmd_type}commands shown in the video? Provide the order of each command (e.g., 1st, 2nd, 3rd, etc) along with the command content.",
    "How many different {file_type}files were involved in the {cmd_type}commands throughout the video? Provide the file count along with the specific file names (e.g., 2 `.txt` files: a.txt, b.txt).",
    "At the {timestamp} of the video, how many {file_type}files remain in `{path_name}`? Provide the file count along with the specific file names (e.g., 2 `.txt` files: a.txt, b.txt).",
    "",
    "If the paths currently contain exactly the same files as they did at the {timestamp} of the video, and we run the command `{cmd}`, which {file_type}files would be in `{path_name}`?",
    "If the paths currently contain exactly the same files as they did at the {timestamp} of the video, to ensure that `{path_name}` contains exactly the following files: `{files}`, what sequence of commands should be executed? Rules: 1. You may only use the commands `touch` and `rm -rf`. 2. You may use at most two commands. 3. Files specified in `touch` must not appear in `rm -rf` command, and vice versa (i.e., no overlap). Response Format: If multiple commands are used, separate them with `&`. For example, `touch path0/{a.txt,b.txt} & rm -rf path0/{c.py,d.json}`.",
];
pub const FILE_COMPARE: [&str; 3] = [
    "What files were in `path0/` at the start of the video, but were not there at the end of the video?",
    "What files were in `path0/` at the end of the video, but were not there at the start of the video?",
    "After the command `{cmd}` was executed, what files were in `{path_name1}` but were not in `{path_name2}`?",
];

const CARD_BEGIN: &str = "The video showcases a sequence of operations involving one or more piles of cards. It begins by displaying the initial arrangement of cards in each pile from top to bottom. The cards are then turned face down, after which a series of actions is carried out. Note that there are only two types of actions: adding one card to the top of the pile or removing one card from the bottom of the pile. Please carefully watch the video and answer the following question";
const CARD_END: &str = "The video showcases a sequence of operations involving one or more piles of cards. Throughout the video, before the final reveal of each pile, only two types of actions occur: adding one card to the top of the pile or removing one card from the bottom of the pile. Then, the video ends by displaying the final arrangement of cards in each pile from top to bottom. Please carefully watch the video and answer the following question:";
const CARD_Q: [&str; 6] = [
    "What are the {start_id} to {end_id} cards being {action_type} any pile throughout the video? For each card, provide the following details: 1. The order (e.g., 1st or 2nd) 2. The suit and value (e.g., 6 of Hearts) 3. The pile involved (e.g., pile0, pile1) Format your response like this: 1st: 6 of Hearts, pile0 2nd: Jack of Spades, pile1.",
    "How many cards were {action_type} `{pile_name}` throughout the video? For each card, provide its suit and value (e.g., 6 of Hearts) Format your response like this: 2 cards: 6 of Hearts, King of Clubs.",
    "At the {timestamp} of the video, what cards are in `{pile_name}`? List them in order from top to bottom, including both the value and suit of each card. Format your response like this: 6 of Hearts, King of Clubs, 3 of Spades.",
    "What cards were in `{pile_name}` at the {timestamp} of the video, but were not there at the {timestamp2} of the video? For each card, provide its suit and value. Format your response like this: 6 of Hearts, King of Clubs, 3 of Spades.",
    "If the piles currently contain exactly the same cards as they did at the {timestamp} of the video, and now we perform these actions in order: `{actions}`. What cards would be in `{pile_name}`? List them in order from top to bottom, including both the value and suit of each card. Format your response like this: 6 of Hearts, King of Clubs, 3 of Spades.",
    "If the piles currently contain exactly the same cards as they did at the {timestamp} of the video, to ensure that `{pile_name}` contains exactly the following cards from top to bottom: `{cards}`, what sequence of actions should be performed? Rules: 1. Each action must either add a card to a pile or remove a card from a pile. 2. You may only add cards to the top of a pile or remove cards from the bottom of a pile. Response Format: List the actions in sequence, specifying the action, card, and pile. Separate each action with a comma. For example, `add 6 of Hearts to pile0, remove King of Clubs from pile0`",
];

const CHIP_BEGIN: &str = "The video showcases a sequence of operations involving one or more cup(s) and chips. It begins by showing the initial chips contained in each cup. Then, a series of actions are carried out. Note that there are only two types of actions: adding one chip to a cup or removing one chip from a cup. Please carefully watch the video and answer the following question:";
const CHIP_END: &str = "The video showcases a sequence of operations involving one or more cup(s) and chips. Throughout the video, before the final reveal of chips contained in each cup, only two types of actions occur: adding one chip to a cup or removing one chip from a cup. Then, the video ends by displaying the final chips contained in each cup. Please carefully watch the video and answer the following question:";
const CHIP_Q: [&str; 6] = [
    "Disregarding the process of revealing all chips in the cup(s), what are the {start_id} to {end_id} chips being {action_type} any cup throughout the video? For each chip, provide the following details: 1. The order (e.g., 1st or 2nd) 2. The value (e.g., 20) 3. The cup involved (e.g., cup0, cup1) Format your response like this: 1st: 100, cup0 2nd: 20, cup1.",
    "Disregarding the process of revealing all chips in the cup(s), how many chips were {action_type} `{cup_name}` throughout the video? For each chip, provide its value (order does not matter). Format your response like this: 4 chips: 20, 5, 100, 100.",
    "At the {timestamp} of the video, how many chips were in `{cup_name}`? For each chip, provide its value (order does not matter). Format your response like this: 4 chips: 20, 5, 100, 100.",
    "At which point in the video is the total value of chips in `{cup_name}` higher, at {timestamp1} or {timestamp2}? Also, what is the difference in value between the two times? Format your response like this: \"time_with_higher_value\", \"difference_in_value\" (e.g., start, 115).",
    "If the cups currently contain exactly the same chips as they did at the {timestamp} of the video, and now we perform these actions in order: `{actions}`. How many chips would be in `{cup_name}`? For each chip, provide its value (order does not matter). Format your response like this: 4 chips: 20, 5, 100, 100.",
    "If the cups currently contain exactly the same chips as they did at the {timestamp} of the video, to ensure that `{cup_name}` contains exactly the following chips: `{chips}` (order does not matter), what sequence of actions should be performed? Rules: 1. Each action must either add a chip to a cup or remove a chip from a cup. 2. Available chips for addition are: 5, 10, 20, 50, 100. 3. You may only remove a chip if it is already present in the cup. Response Format: List the actions in sequence, specifying the action, chip, and cup. Separate each action with a comma. For example, `add 20 to cup0, remove 50 cup0`",
];

/// Task instruction for a demo; `begin` selects the reveal-at-start variant.
/// File has a single instruction.
pub fn instruction(demo: DemoKind, begin: bool) -> &'static str {
    match (demo, begin) {
        (DemoKind::Number, true) => NUMBER_BEGIN,
        (DemoKind::Number, false) => NUMBER_END,
        (DemoKind::Cup, true) => CUP_BEGIN,
        (DemoKind::Cup, false) => CUP_END,
        (DemoKind::Circle, true) => CIRCLE_BEGIN,
        (DemoKind::Circle, false) => CIRCLE_END,
        (DemoKind::File, _) => FILE_INSTRUCTION,
        (DemoKind::Card, true) => CARD_BEGIN,
        (DemoKind::Card, false) => CARD_END,
        (DemoKind::Chip, true) => CHIP_BEGIN,
        (DemoKind::Chip, false) => CHIP_END,
    }
}

/// Question template. `variant` selects among the File compare questions.
pub fn question(demo: DemoKind, skill: Skill, variant: usize) -> &'static str {
    let i = Skill::ALL.iter().position(|s| *s == skill).unwrap();
    let table = match demo {
        DemoKind::Number => &NUMBER_Q,
        DemoKind::Cup => &CUP_Q,
        DemoKind::Circle => &CIRCLE_Q,
        DemoKind::File if skill == Skill::CompareState => return FILE_COMPARE[variant % FILE_COMPARE.len()],
        DemoKind::File => &FILE_Q,
        DemoKind::Card => &CARD_Q,
        DemoKind::Chip => &CHIP_Q,
    };
    table[i]
}

/// Sentence shared by most Circle questions.
pub fn circle_move_sentence() -> &'static str {
    CIRCLE_MOVE
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("template placeholder {{{0}}} has no value")]
pub struct MissingPlaceholder(pub String);

static PLACEHOLDER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\{([a-z_0-9]+|N×N)\}").unwrap());

/// Substitutes every placeholder. Literal brace lists such as
/// `{a.txt,b.txt}` are not placeholders and pass through.
pub fn fill(template: &str, values: &BTreeMap<String, String>) -> Result<String, MissingPlaceholder> {
    let mut missing = None;
    let out = PLACEHOLDER.replace_all(template, |c: &regex::Captures| match values.get(&c[1]) {
        Some(v) => v.clone(),
        None => {
            missing.get_or_insert_with(|| c[1].to_string());
            String::new()
        }
    });
    match missing {
        Some(m) => Err(MissingPlaceholder(m)),
        None => Ok(out.into_owned()),
    }
}

/// Placeholder names used by a template, in order of first appearance.
pub fn placeholders(template: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for c in PLACEHOLDER.captures_iter(template) {
        if !out.iter().any(|p| p == &c[1]) {
            out.push(c[1].to_string());
        }
    }
    out
}
