//! key=value configuration files. Blank lines and `#` comments are skipped;
//! `tol` may repeat.

use std::path::Path;
use std::str::FromStr;

use anyhow::Context;

#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

const KEYS: [&str; 8] = ["nodes", "cells", "seed", "space", "suite", "out", "format", "tol"];

#[derive(Debug, Default)]
pub struct ConfigFile {
    entries: Vec<(String, String)>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| usage(format!("config line {}: expected key=value", i + 1)))?;
            let k = k.trim().trim_start_matches("--");
            if !KEYS.contains(&k) {
                return Err(usage(format!("config line {}: unknown key {k:?}", i + 1)));
            }
            entries.push((k.to_string(), v.trim().to_string()));
        }
        Ok(ConfigFile { entries })
    }

    /// Last value given for `key`.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn get_all(&self, key: &str) -> Vec<String> {
        self.entries.iter().filter(|(k, _)| k == key).map(|(_, v)| v.clone()).collect()
    }

    /// The flag when given, else the parsed file value.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> anyhow::Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.get(key) {
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| usage(format!("config value for {key} is invalid: {v:?}"))),
            None => Ok(None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let c = ConfigFile::parse("# comment\nnodes = 128\ntol=1=0.5\ntol=8=2\n").unwrap();
        assert_eq!(c.pick(Some(64usize), "nodes").unwrap(), Some(64));
        assert_eq!(c.pick(None::<usize>, "nodes").unwrap(), Some(128));
        assert_eq!(c.get_all("tol"), vec!["1=0.5", "8=2"]);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(ConfigFile::parse("colour=blue").is_err());
        assert!(ConfigFile::parse("nodes").is_err());
    }
}
