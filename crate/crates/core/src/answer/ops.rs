// SPDX-License-Identifier: Apache-2.0

use crate::sim::{Action, Card, CoordStyle, DemoKind, Direction, FileCommand, Operation, Pos};
use regex::Regex;
use serde::{Deserialize, Serialize};
use std::sync::LazyLock;

/// Operations found in a response, in textual order, plus notes about
/// fragments that looked like operations but did not parse.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParsedOps {
    pub ops: Vec<Operation>,
    pub warnings: Vec<String>,
}

static DIRECTION: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)\b(left|right|up|down)\b").unwrap());
static PAIR: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r#"(?i)\(\s*['"]?([a-z])\s*(\d+)['"]?\s*,\s*['"]?([a-z])\s*(\d+)['"]?\s*\)"#).unwrap()
});
static PAREN: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\([^()]*\)").unwrap());
static FILE_KEYWORD: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)(?:^|[\s>$:,;(])(touch|rm|cp|mv)\s+").unwrap());
pub(crate) static CARD: &str = r"(ace|king|queen|jack|10|[2-9]|[akqj])\s+of\s+(hearts|diamonds|clubs|spades)";
static CARD_OP: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!(
        r"(?i)\b(add|remove)\s+(?:the\s+)?{CARD}\s*(?:(?:to|from|into|onto|on|in)\s+)?(?:the\s+(?:top|bottom)\s+of\s+)?(?:the\s+)?(pile)\s*(\d+)"
    ))
    .unwrap()
});
static CHIP_OP: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)\b(add|remove)\s+(?:a\s+)?(\d+)(?:\s*-?\s*(?:value\s+)?chips?)?\s*(?:(?:to|from|into|in)\s+)?(?:the\s+)?(cup)\s*(\d+)").unwrap()
});
static ACTION_WORD: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)\b(add|remove)\b").unwrap());

pub fn parse_operations(demo: DemoKind, text: &str) -> ParsedOps {
    let mut out = ParsedOps::default();
    match demo {
        DemoKind::Number | DemoKind::Circle => {
            for c in DIRECTION.captures_iter(text) {
                let direction: Direction = c[1].parse().expect("regex admits only directions");
                out.ops.push(if demo == DemoKind::Number {
                    Operation::Slide { direction }
                } else {
                    Operation::CircleMove { direction }
                });
            }
        }
        DemoKind::Cup => {
            let mut covered = Vec::new();
            for c in PAIR.captures_iter(text) {
                let m = c.get(0).unwrap();
                covered.push(m.start());
                let a = compact(&c[1], &c[2]);
                let b = compact(&c[3], &c[4]);
                match (a, b) {
                    (Some(a), Some(b)) => out.ops.push(Operation::CupSwap { a, b }),
                    _ => out.warnings.push(format!("bad coordinate in '{}' at byte {}", m.as_str(), m.start())),
                }
            }
            for m in PAREN.find_iter(text) {
                if !covered.contains(&m.start()) {
                    out.warnings.push(format!("'{}' at byte {} is not a swap pair", m.as_str(), m.start()));
                }
            }
        }
        DemoKind::File => {
            let cleaned = text.replace('`', " ");
            for fragment in cleaned.split(['&', '\n', ';']) {
                let (cmds, warns) = parse_file_fragment(fragment);
                out.ops.extend(cmds.into_iter().map(|cmd| Operation::FileCmd { cmd }));
                out.warnings.extend(warns);
            }
        }
        DemoKind::Card => {
            let mut starts = Vec::new();
            for c in CARD_OP.captures_iter(text) {
                starts.push(c.get(0).unwrap().start());
                let card: Card = format!("{} of {}", &c[2], &c[3]).parse().expect("regex admits only cards");
                out.ops.push(Operation::CardAct { action: action(&c[1]), card, pile: format!("pile{}", &c[5]) });
            }
            warn_uncovered(text, &starts, &mut out.warnings);
        }
        DemoKind::Chip => {
            let mut starts = Vec::new();
            for c in CHIP_OP.captures_iter(text) {
                starts.push(c.get(0).unwrap().start());
                match c[2].parse::<u32>() {
                    Ok(value) => {
                        out.ops.push(Operation::ChipAct { action: action(&c[1]), value, cup: format!("cup{}", &c[4]) })
                    }
                    Err(_) => out.warnings.push(format!("chip value '{}' out of range", &c[2])),
                }
            }
            warn_uncovered(text, &starts, &mut out.warnings);
        }
    }
    out
}

fn action(s: &str) -> Action {
    if s.eq_ignore_ascii_case("add") {
        Action::Add
    } else {
        Action::Remove
    }
}

fn warn_uncovered(text: &str, starts: &[usize], warnings: &mut Vec<String>) {
    for m in ACTION_WORD.find_iter(text) {
        if !starts.contains(&m.start()) {
            warnings.push(format!("unparsed '{}' at byte {}", m.as_str(), m.start()));
        }
    }
}

fn compact(letter: &str, digits: &str) -> Option<Pos> {
    Pos::from_parts(CoordStyle::Compact, letter.chars().next()?, digits.parse().ok()?)
}

/// Whitespace split that keeps brace lists together. `Err` on nested braces.
fn tokens(s: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0usize;
    for ch in s.chars() {
        match ch {
            '{' => {
                depth += 1;
                if depth > 1 {
                    return Err("nested braces are not supported".into());
                }
                cur.push(ch);
            }
            '}' => {
                if depth == 0 {
                    return Err("unbalanced '}'".into());
                }
                depth -= 1;
                cur.push(ch);
            }
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c if c.is_whitespace() => {}
            c => cur.push(c),
        }
    }
    if depth != 0 {
        return Err("unclosed '{'".into());
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

/// `path0/{a.txt,b.py}` or `path0/a.txt` into a path and file names.
fn split_arg(arg: &str) -> Option<(String, Vec<String>)> {
    let arg = arg.trim_end_matches([',', '.', ')', '\'', '"']).trim_start_matches(['\'', '"', '(']);
    let (path, spec) = arg.trim_start_matches("./").split_once('/')?;
    if path.is_empty() || !path.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return None;
    }
    let path = path.to_ascii_lowercase();
    if let Some(inner) = spec.strip_prefix('{') {
        let inner = inner.strip_suffix('}')?;
        let files: Vec<String> = inner.split(',').map(|f| f.trim().to_ascii_lowercase()).filter(|f| !f.is_empty()).collect();
        Some((path, files))
    } else if spec.is_empty() {
        Some((path, Vec::new()))
    } else if spec.contains(['{', '}', '/']) {
        None
    } else {
        Some((path, vec![spec.to_ascii_lowercase()]))
    }
}

/// Every command in a fragment that contains no `&`.
pub(crate) fn parse_file_fragment(fragment: &str) -> (Vec<FileCommand>, Vec<String>) {
    let mut cmds = Vec::new();
    let mut warnings = Vec::new();
    let hits: Vec<(usize, usize, String)> = FILE_KEYWORD
        .captures_iter(fragment)
        .map(|c| {
            let kw = c.get(1).unwrap();
            (kw.start(), c.get(0).unwrap().end(), kw.as_str().to_ascii_lowercase())
        })
        .collect();
    for (i, (start, args_start, kw)) in hits.iter().enumerate() {
        let end = hits.get(i + 1).map_or(fragment.len(), |h| h.0);
        let body = &fragment[*args_start..end];
        match parse_command(kw, body) {
            Ok(mut found) => cmds.append(&mut found),
            Err(e) => warnings.push(format!("'{}' at byte {start}: {e}", fragment[*start..end].trim())),
        }
    }
    (cmds, warnings)
}

fn parse_command(kw: &str, body: &str) -> Result<Vec<FileCommand>, String> {
    let toks = tokens(body)?;
    let mut toks = toks.iter().map(String::as_str).peekable();
    if kw == "rm" {
        while toks.peek().is_some_and(|t| t.starts_with('-')) {
            toks.next();
        }
    }
    let args: Vec<(String, Vec<String>)> = toks.map_while(split_arg).collect();
    if args.is_empty() {
        return Err("no path argument".into());
    }
    match kw {
        "touch" | "rm" => {
            let mut out: Vec<(String, Vec<String>)> = Vec::new();
            for (path, files) in args {
                if files.is_empty() {
                    return Err(format!("no file named under {path}/"));
                }
                match out.last_mut() {
                    Some((p, fs)) if *p == path => fs.extend(files),
                    _ => out.push((path, files)),
                }
            }
            Ok(out
                .into_iter()
                .map(|(path, files)| {
                    if kw == "touch" {
                        FileCommand::Touch { path, files }
                    } else {
                        FileCommand::Rm { path, files }
                    }
                })
                .collect())
        }
        _ => {
            let [(src, sf), (dst, df)] = args.as_slice() else {
                return Err("expected source and destination".into());
            };
            let [file] = sf.as_slice() else {
                return Err("exactly one source file expected".into());
            };
            if !(df.is_empty() || df == sf) {
                return Err("destination must be a directory".into());
            }
            let (src, dst, file) = (src.clone(), dst.clone(), file.clone());
            Ok(vec![if kw == "cp" { FileCommand::Cp { src, dst, file } } else { FileCommand::Mv { src, dst, file } }])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cup_pairs_in_order() {
        let p = parse_operations(DemoKind::Cup, "(a1, b2), (c3, b1)");
        assert_eq!(p.ops.len(), 2);
        assert_eq!(p.ops[0], Operation::CupSwap { a: Pos::new(0, 0), b: Pos::new(1, 1) });
        assert_eq!(p.ops[1], Operation::CupSwap { a: Pos::new(2, 2), b: Pos::new(1, 0) });
        assert!(p.warnings.is_empty());
    }

    #[test]
    fn cup_extraction_list_form() {
        let p = parse_operations(DemoKind::Cup, "[('a1', 'b2'), ('c1', 'b1')] (oops)");
        assert_eq!(p.ops.len(), 2);
        assert_eq!(p.warnings.len(), 1);
    }

    #[test]
    fn file_commands_split_and_expand() {
        let p = parse_operations(DemoKind::File, "touch path0/{a.txt,b.txt} & rm -rf path0/{c.py,d.json}");
        assert_eq!(
            p.ops,
            vec![
                Operation::FileCmd {
                    cmd: FileCommand::Touch { path: "path0".into(), files: vec!["a.txt".into(), "b.txt".into()] }
                },
                Operation::FileCmd {
                    cmd: FileCommand::Rm { path: "path0".into(), files: vec!["c.py".into(), "d.json".into()] }
                },
            ]
        );
    }

    #[test]
    fn file_cp_and_nested_braces() {
        let p = parse_operations(DemoKind::File, "`cp path0/a.txt path1/` & touch path0/{a,{b}}");
        assert_eq!(
            p.ops,
            vec![Operation::FileCmd {
                cmd: FileCommand::Cp { src: "path0".into(), dst: "path1".into(), file: "a.txt".into() }
            }]
        );
        assert_eq!(p.warnings.len(), 1);
    }

    #[test]
    fn file_single_name_and_space_in_braces() {
        let p = parse_operations(DemoKind::File, "touch path0/x.py\nrm -r path0/{ a.csv, b.py }");
        assert_eq!(p.ops.len(), 2);
        let Operation::FileCmd { cmd: FileCommand::Rm { files, .. } } = &p.ops[1] else { panic!() };
        assert_eq!(files, &vec!["a.csv".to_string(), "b.py".to_string()]);
    }

    #[test]
    fn chip_phrases() {
        let p = parse_operations(DemoKind::Chip, "add 20 to cup0, remove 50 cup0");
        assert_eq!(
            p.ops,
            vec![
                Operation::ChipAct { action: Action::Add, value: 20, cup: "cup0".into() },
                Operation::ChipAct { action: Action::Remove, value: 50, cup: "cup0".into() },
            ]
        );
    }

    #[test]
    fn card_phrases() {
        let p = parse_operations(DemoKind::Card, "add 6 of Hearts to pile0, remove King of Clubs from the bottom of pile1, add it");
        assert_eq!(p.ops.len(), 2);
        assert_eq!(
            p.ops[1],
            Operation::CardAct { action: Action::Remove, card: "King of Clubs".parse().unwrap(), pile: "pile1".into() }
        );
        assert_eq!(p.warnings.len(), 1);
    }

    #[test]
    fn directions_and_empty() {
        let p = parse_operations(DemoKind::Circle, "['left', 'Up', 'down', 'right']");
        assert_eq!(p.ops.len(), 4);
        assert!(parse_operations(DemoKind::Number, "").ops.is_empty());
    }
}
