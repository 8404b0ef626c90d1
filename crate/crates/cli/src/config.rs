//! Flat `key = value` files with `[section]` headers.
//!
//! ```text
//! # comment
//! [experiment]
//! kind = dynamics
//! preset = example1
//! ```
//!
//! Keys may repeat within a section (memories are listed that way); the
//! scalar getters reject repeats.

use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub name: String,
    pub line: usize,
    pub entries: Vec<Entry>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfigFile {
    pub sections: Vec<Section>,
    pub source: String,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut sections: Vec<Section> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(rest) = body.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| CliError::at(line, "unterminated section header"))?
                    .trim();
                if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(CliError::at(line, format!("bad section name `{name}`")));
                }
                if sections.iter().any(|s| s.name == name) {
                    return Err(CliError::at(
                        line,
                        format!("section [{name}] appears twice"),
                    ));
                }
                sections.push(Section {
                    name: name.to_string(),
                    line,
                    entries: Vec::new(),
                });
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| CliError::at(line, "expected `key = value`"))?;
            let key = key.trim();
            if key.is_empty() {
                return Err(CliError::at(line, "empty key"));
            }
            let section = sections.last_mut().ok_or_else(|| {
                CliError::at(line, format!("key `{key}` before any section header"))
            })?;
            section.entries.push(Entry {
                key: key.to_string(),
                value: value.trim().to_string(),
                line,
            });
        }
        Ok(ConfigFile {
            sections,
            source: text.to_string(),
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    /// Rejects sections and keys outside `allowed`.
    pub fn check_keys(&self, allowed: &[(&str, &[&str])]) -> Result<()> {
        for s in &self.sections {
            let keys = allowed
                .iter()
                .find(|(name, _)| *name == s.name)
                .map(|(_, keys)| *keys)
                .ok_or_else(|| CliError::at(s.line, format!("unknown section [{}]", s.name)))?;
            if let Some(e) = s.entries.iter().find(|e| !keys.contains(&e.key.as_str())) {
                return Err(CliError::at(
                    e.line,
                    format!("unknown key `{}` in [{}]", e.key, s.name),
                ));
            }
        }
        Ok(())
    }

    pub fn all(&self, section: &str, key: &str) -> Vec<&Entry> {
        self.section(section)
            .map(|s| s.entries.iter().filter(|e| e.key == key).collect())
            .unwrap_or_default()
    }

    pub fn get(&self, section: &str, key: &str) -> Result<Option<&Entry>> {
        let found = self.all(section, key);
        match found.as_slice() {
            [] => Ok(None),
            [e] => Ok(Some(e)),
            [_, dup, ..] => Err(CliError::at(dup.line, format!("duplicate key `{key}`"))),
        }
    }

    pub fn parsed<T: FromStr>(&self, section: &str, key: &str) -> Result<Option<(T, usize)>> {
        match self.get(section, key)? {
            None => Ok(None),
            Some(e) => e
                .value
                .parse::<T>()
                .map(|v| Some((v, e.line)))
                .map_err(|_| {
                    CliError::at(e.line, format!("cannot parse `{}` for `{key}`", e.value))
                }),
        }
    }

    pub fn value_or<T: FromStr>(&self, section: &str, key: &str, default: T) -> Result<T> {
        Ok(self.parsed(section, key)?.map_or(default, |(v, _)| v))
    }

    pub fn require<T: FromStr>(&self, section: &str, key: &str) -> Result<(T, usize)> {
        self.parsed(section, key)?
            .ok_or_else(|| CliError::Config(format!("missing `{key}` in [{section}]")))
    }

    /// Comma-separated list, each item parsed with `f`.
    pub fn list<T>(
        &self,
        section: &str,
        key: &str,
        f: impl Fn(&str) -> Option<T>,
    ) -> Result<Option<Vec<T>>> {
        let Some(e) = self.get(section, key)? else {
            return Ok(None);
        };
        e.value
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|item| {
                f(item).ok_or_else(|| CliError::at(e.line, format!("bad item `{item}` in `{key}`")))
            })
            .collect::<Result<Vec<T>>>()
            .map(Some)
    }
}
