//! Flat `key = value` configuration with `[section]` headers.
//!
//! Grammar, one construct per line:
//!
//! ```text
//! # comment            (also after a value: `n_points = 256  # grid`)
//! key = value          top-level keys precede the first section
//! [section]            later keys are addressed as `section.key`
//! ```
//!
//! Keys are `[A-Za-z0-9_]+`. Floats are parsed with Rust's `f64::from_str`,
//! which accepts every IEEE-754 round-trip decimal. Lists are comma
//! separated. Duplicate keys are an error.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("{path}: {message}")]
    Field { path: String, message: String },
}

impl ConfigError {
    pub fn field(path: &str, message: impl Into<String>) -> Self {
        Self::Field { path: path.into(), message: message.into() }
    }
}

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: usize,
}

/// Parsed configuration. Accessors record which keys were read so that
/// [`Config::reject_unused`] can flag typos.
#[derive(Debug, Default)]
pub struct Config {
    entries: BTreeMap<String, Entry>,
    used: RefCell<BTreeSet<String>>,
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        let mut section = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(rest) = body.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| ConfigError::Syntax { line, message: "unterminated section header".into() })?
                    .trim();
                if !valid_name(name) {
                    return Err(ConfigError::Syntax { line, message: format!("invalid section name {name:?}") });
                }
                section = name.to_string();
                continue;
            }
            let (k, v) = body
                .split_once('=')
                .ok_or_else(|| ConfigError::Syntax { line, message: "expected `key = value`".into() })?;
            let k = k.trim();
            if !valid_name(k) {
                return Err(ConfigError::Syntax { line, message: format!("invalid key {k:?}") });
            }
            let path = if section.is_empty() { k.to_string() } else { format!("{section}.{k}") };
            let entry = Entry { value: v.trim().to_string(), line };
            if let Some(prev) = entries.insert(path.clone(), entry) {
                return Err(ConfigError::Syntax { line, message: format!("{path} already set on line {}", prev.line) });
            }
        }
        Ok(Self { entries, used: RefCell::default() })
    }

    pub fn raw(&self, path: &str) -> Option<&str> {
        let e = self.entries.get(path)?;
        self.used.borrow_mut().insert(path.to_string());
        Some(&e.value)
    }

    pub fn get<T: FromStr>(&self, path: &str) -> Result<Option<T>, ConfigError> {
        match self.raw(path) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| ConfigError::field(path, format!("cannot parse {v:?} as {}", type_label::<T>()))),
        }
    }

    pub fn get_or<T: FromStr>(&self, path: &str, default: T) -> Result<T, ConfigError> {
        Ok(self.get(path)?.unwrap_or(default))
    }

    pub fn list<T: FromStr>(&self, path: &str) -> Result<Option<Vec<T>>, ConfigError> {
        let Some(v) = self.raw(path) else { return Ok(None) };
        v.split(',')
            .map(|s| {
                let s = s.trim();
                s.parse().map_err(|_| ConfigError::field(path, format!("cannot parse list item {s:?} as {}", type_label::<T>())))
            })
            .collect::<Result<Vec<T>, _>>()
            .map(Some)
    }

    /// Errors on the first key (in sorted order) no accessor asked for.
    pub fn reject_unused(&self, context: &str) -> Result<(), ConfigError> {
        let used = self.used.borrow();
        match self.entries.keys().find(|k| !used.contains(*k)) {
            Some(k) => Err(ConfigError::field(k, format!("unknown key for {context}"))),
            None => Ok(()),
        }
    }

    /// Every key with its raw value, in sorted order.
    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, e)| (k.as_str(), e.value.as_str()))
    }
}

fn type_label<T>() -> &'static str {
    let name = std::any::type_name::<T>();
    match name {
        "f64" => "a number",
        "usize" | "u64" => "a nonnegative integer",
        "bool" => "true or false",
        _ => name.rsplit("::").next().unwrap_or(name),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_comments_and_lists() {
        let c = Config::parse("experiment = bmt # trailing\n\n[sweep]\neps = 0.125, 6.25e-2\n[grid]\nn_points=64\n").unwrap();
        assert_eq!(c.raw("experiment"), Some("bmt"));
        assert_eq!(c.list::<f64>("sweep.eps").unwrap(), Some(vec![0.125, 0.0625]));
        assert_eq!(c.get::<usize>("grid.n_points").unwrap(), Some(64));
        assert!(c.reject_unused("test").is_ok());
    }

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            let c = Config::parse(&format!("x = {x:?}")).unwrap();
            assert_eq!(c.get::<f64>("x").unwrap().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn errors_name_lines_and_paths() {
        assert_eq!(
            Config::parse("[grid\n").unwrap_err(),
            ConfigError::Syntax { line: 1, message: "unterminated section header".into() }
        );
        assert!(matches!(Config::parse("a = 1\na = 2").unwrap_err(), ConfigError::Syntax { line: 2, .. }));
        assert!(matches!(Config::parse("just words").unwrap_err(), ConfigError::Syntax { line: 1, .. }));
        let c = Config::parse("[grid]\nn_points = many\nwindw = 1").unwrap();
        let e = c.get::<usize>("grid.n_points").unwrap_err();
        assert!(e.to_string().starts_with("grid.n_points: cannot parse"), "{e}");
        assert_eq!(c.reject_unused("bmt").unwrap_err().to_string(), "grid.windw: unknown key for bmt");
    }
}
