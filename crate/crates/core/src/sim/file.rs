// SPDX-License-Identifier: Apache-2.0

//! Directories of files manipulated by shell commands.

use super::{InvalidOp, StateError};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub const EXTENSIONS: [&str; 4] = ["txt", "py", "csv", "json"];

/// `path name -> file names`. Paths are `path0`, `path1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FileSystem {
    pub paths: BTreeMap<String, BTreeSet<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FileCmdKind {
    Touch,
    Rm,
    Cp,
    Mv,
}

impl FileCmdKind {
    pub const ALL: [FileCmdKind; 4] = [FileCmdKind::Touch, FileCmdKind::Rm, FileCmdKind::Cp, FileCmdKind::Mv];

    /// Command word as typed in the terminal.
    pub fn shell(self) -> &'static str {
        match self {
            FileCmdKind::Touch => "touch",
            FileCmdKind::Rm => "rm -rf",
            FileCmdKind::Cp => "cp",
            FileCmdKind::Mv => "mv",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum FileCommand {
    Touch { path: String, files: Vec<String> },
    Rm { path: String, files: Vec<String> },
    Cp { src: String, dst: String, file: String },
    Mv { src: String, dst: String, file: String },
}

impl FileCommand {
    pub fn kind(&self) -> FileCmdKind {
        match self {
            FileCommand::Touch { .. } => FileCmdKind::Touch,
            FileCommand::Rm { .. } => FileCmdKind::Rm,
            FileCommand::Cp { .. } => FileCmdKind::Cp,
            FileCommand::Mv { .. } => FileCmdKind::Mv,
        }
    }

    /// Every file name the command mentions.
    pub fn file_args(&self) -> Vec<&str> {
        match self {
            FileCommand::Touch { files, .. } | FileCommand::Rm { files, .. } => files.iter().map(String::as_str).collect(),
            FileCommand::Cp { file, .. } | FileCommand::Mv { file, .. } => vec![file.as_str()],
        }
    }

    /// Copy with brace lists sorted, for order-insensitive comparison.
    pub fn normalized(&self) -> FileCommand {
        let mut c = self.clone();
        if let FileCommand::Touch { files, .. } | FileCommand::Rm { files, .. } = &mut c {
            files.sort();
        }
        c
    }
}

fn path_arg(path: &str, files: &[String]) -> String {
    if files.len() == 1 {
        format!("{path}/{}", files[0])
    } else {
        format!("{path}/{{{}}}", files.join(","))
    }
}

impl fmt::Display for FileCommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FileCommand::Touch { path, files } => write!(f, "touch {}", path_arg(path, files)),
            FileCommand::Rm { path, files } => write!(f, "rm -rf {}", path_arg(path, files)),
            FileCommand::Cp { src, dst, file } => write!(f, "cp {src}/{file} {dst}/"),
            FileCommand::Mv { src, dst, file } => write!(f, "mv {src}/{file} {dst}/"),
        }
    }
}

/// `stem.ext` with a lowercase alphanumeric stem and a known extension.
pub fn is_valid_file_name(name: &str) -> bool {
    match name.rsplit_once('.') {
        Some((stem, ext)) => {
            !stem.is_empty()
                && stem.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
                && EXTENSIONS.contains(&ext)
        }
        None => false,
    }
}

pub fn extension(name: &str) -> Option<&str> {
    name.rsplit_once('.').map(|(_, e)| e)
}

impl FileSystem {
    pub fn check(&self) -> Result<(), StateError> {
        if self.paths.is_empty() || self.paths.len() > 2 {
            return Err(StateError::new(format!("{} paths, expected 1 or 2", self.paths.len())));
        }
        for (p, files) in &self.paths {
            if let Some(bad) = files.iter().find(|f| !is_valid_file_name(f)) {
                return Err(StateError::new(format!("bad file name '{bad}' in {p}")));
            }
        }
        Ok(())
    }

    pub fn files(&self, path: &str) -> Option<&BTreeSet<String>> {
        self.paths.get(path)
    }

    pub fn total_files(&self) -> usize {
        self.paths.values().map(BTreeSet::len).sum()
    }

    fn dir(&self, path: &str) -> Result<&BTreeSet<String>, InvalidOp> {
        self.paths.get(path).ok_or_else(|| InvalidOp::UnknownContainer { name: path.to_string() })
    }

    pub(crate) fn validate(&self, cmd: &FileCommand) -> Result<(), InvalidOp> {
        match cmd {
            FileCommand::Touch { path, files } | FileCommand::Rm { path, files } => {
                let dir = self.dir(path)?;
                if files.is_empty() {
                    return Err(InvalidOp::EmptyArguments);
                }
                let mut seen = BTreeSet::new();
                for f in files {
                    if !is_valid_file_name(f) {
                        return Err(InvalidOp::InvalidFileName { name: f.clone() });
                    }
                    if !seen.insert(f) {
                        return Err(InvalidOp::DuplicateArgument { name: f.clone() });
                    }
                    let present = dir.contains(f);
                    if matches!(cmd, FileCommand::Touch { .. }) && present {
                        return Err(InvalidOp::TargetExists { path: path.clone(), file: f.clone() });
                    }
                    if matches!(cmd, FileCommand::Rm { .. }) && !present {
                        return Err(InvalidOp::TargetMissing { path: path.clone(), file: f.clone() });
                    }
                }
                Ok(())
            }
            FileCommand::Cp { src, dst, file } | FileCommand::Mv { src, dst, file } => {
                let s = self.dir(src)?;
                let d = self.dir(dst)?;
                if src == dst {
                    return Err(InvalidOp::SameContainer);
                }
                if !s.contains(file) {
                    return Err(InvalidOp::TargetMissing { path: src.clone(), file: file.clone() });
                }
                if d.contains(file) {
                    return Err(InvalidOp::DestinationOccupied { path: dst.clone(), file: file.clone() });
                }
                Ok(())
            }
        }
    }

    pub(crate) fn apply(&mut self, cmd: &FileCommand) {
        match cmd {
            FileCommand::Touch { path, files } => {
                let dir = self.paths.get_mut(path).expect("validated");
                dir.extend(files.iter().cloned());
            }
            FileCommand::Rm { path, files } => {
                let dir = self.paths.get_mut(path).expect("validated");
                for f in files {
                    dir.remove(f);
                }
            }
            FileCommand::Cp { dst, file, .. } => {
                self.paths.get_mut(dst).expect("validated").insert(file.clone());
            }
            FileCommand::Mv { src, dst, file } => {
                self.paths.get_mut(src).expect("validated").remove(file);
                self.paths.get_mut(dst).expect("validated").insert(file.clone());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn one_path(xs: &[&str]) -> FileSystem {
        FileSystem { paths: [("path0".to_string(), xs.iter().map(|s| s.to_string()).collect())].into() }
    }

    #[test]
    fn touch_of_existing_file_is_rejected() {
        let fs = one_path(&["o.txt"]);
        let cmd = FileCommand::Touch { path: "path0".into(), files: names(&["o.txt"]) };
        assert_eq!(fs.validate(&cmd), Err(InvalidOp::TargetExists { path: "path0".into(), file: "o.txt".into() }));
    }

    #[test]
    fn rm_requires_presence() {
        let fs = one_path(&["o.txt"]);
        let cmd = FileCommand::Rm { path: "path0".into(), files: names(&["o.txt", "x.py"]) };
        assert!(matches!(fs.validate(&cmd), Err(InvalidOp::TargetMissing { .. })));
    }

    #[test]
    fn display_uses_braces_only_for_lists() {
        let t = FileCommand::Touch { path: "path0".into(), files: names(&["a.txt", "b.txt"]) };
        assert_eq!(t.to_string(), "touch path0/{a.txt,b.txt}");
        let r = FileCommand::Rm { path: "path1".into(), files: names(&["c.py"]) };
        assert_eq!(r.to_string(), "rm -rf path1/c.py");
        let m = FileCommand::Mv { src: "path0".into(), dst: "path1".into(), file: "a.txt".into() };
        assert_eq!(m.to_string(), "mv path0/a.txt path1/");
    }

    #[test]
    fn file_name_rules() {
        assert!(is_valid_file_name("q.json"));
        assert!(!is_valid_file_name("q.exe"));
        assert!(!is_valid_file_name(".txt"));
        assert!(!is_valid_file_name("Q.txt"));
    }
}
