//! Flat `key=value` configuration, from the command line or a line-oriented file.
//!
//! File format: one `key = value` per line; `#` starts a comment.

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("invalid value `{value}` for key `{key}`: {reason}")]
    BadValue { key: String, value: String, reason: String },
    #[error("malformed config entry `{0}` (expected key=value)")]
    Malformed(String),
    #[error("cannot read config file {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// Ordered key/value pairs with the allowed keys fixed up front.
#[derive(Debug, Clone)]
pub struct FlatConfig {
    allowed: &'static [&'static str],
    values: BTreeMap<String, String>,
}

impl FlatConfig {
    pub fn new(allowed: &'static [&'static str]) -> Self {
        FlatConfig { allowed, values: BTreeMap::new() }
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let key = key.trim();
        if !self.allowed.contains(&key) {
            return Err(ConfigError::UnknownKey(key.to_string()));
        }
        self.values.insert(key.to_string(), value.trim().to_string());
        Ok(())
    }

    pub fn set_pair(&mut self, entry: &str) -> Result<(), ConfigError> {
        let (k, v) = entry.split_once('=').ok_or_else(|| ConfigError::Malformed(entry.to_string()))?;
        self.set(k, v)
    }

    pub fn load_str(&mut self, text: &str) -> Result<(), ConfigError> {
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                self.set_pair(line)?;
            }
        }
        Ok(())
    }

    pub fn load_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        self.load_str(&text)
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Parses a comma-separated list; an empty value gives an empty list.
    pub fn list<T, E: std::fmt::Display>(
        &self,
        key: &str,
        parse: impl Fn(&str) -> Result<T, E>,
    ) -> Result<Option<Vec<T>>, ConfigError> {
        let Some(raw) = self.get(key) else { return Ok(None) };
        raw.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| parse(s).map_err(|e| bad(key, s, e)))
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    pub fn scalar<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key).map(|s| s.parse::<T>().map_err(|e| bad(key, s, e))).transpose()
    }
}

fn bad(key: &str, value: &str, reason: impl std::fmt::Display) -> ConfigError {
    ConfigError::BadValue { key: key.to_string(), value: value.to_string(), reason: reason.to_string() }
}

/// `Fn` adaptor for `str::parse`.
pub fn parse<T: std::str::FromStr>(s: &str) -> Result<T, T::Err> {
    s.parse()
}
