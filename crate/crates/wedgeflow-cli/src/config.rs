//! Flat key=value run configuration.
//!
//! A config file holds `key = value` lines (the `=` may be surrounded by
//! whitespace; `#` starts a comment). Explicit command-line flags
//! override file values, which override built-in defaults. Every run
//! echoes the fully resolved configuration in the same format, so the
//! echo can be fed back with `--config` to reproduce the run.

use std::collections::HashMap;
use std::fmt::Display;
use std::path::Path;

use wedgeflow::{Result, WedgeError};

/// Raw key=value pairs from a config file.
#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: HashMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(WedgeError::validation(format!(
                    "config line {}: expected `key = value`, got `{line}`",
                    lineno + 1
                )));
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Resolve one parameter: explicit flag beats file value beats default.
    pub fn resolve<T: std::str::FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.get(key) {
            Some(s) => s.parse().map_err(|_| {
                WedgeError::validation(format!("config key `{key}`: cannot parse `{s}`"))
            }),
            None => Ok(default),
        }
    }

    /// Resolve a parameter with no default.
    pub fn resolve_opt<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        if let Some(v) = flag {
            return Ok(Some(v));
        }
        match self.get(key) {
            Some(s) => s
                .parse()
                .map(Some)
                .map_err(|_| WedgeError::validation(format!("config key `{key}`: cannot parse `{s}`"))),
            None => Ok(None),
        }
    }
}

/// Fully resolved configuration of a run, echoed alongside results.
#[derive(Debug, Default, Clone)]
pub struct Resolved {
    entries: Vec<(String, String)>,
}

impl Resolved {
    pub fn push(&mut self, key: &str, value: impl Display) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn extend_from(&mut self, other: &Resolved) {
        self.entries.extend(other.entries.iter().cloned());
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }
}
