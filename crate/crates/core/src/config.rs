//! Layered configuration: defaults, then a `key = value` file, then
//! `PROXIKEY_*` environment variables, then explicit overrides.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::lexicon::LexiconConfig;
use crate::search::combiner::DEFAULT_WINDOW;
use crate::search::SearchParams;

pub const ENV_PREFIX: &str = "PROXIKEY_";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub max_distance: u32,
    pub sw_count: u32,
    pub fu_count: u32,
    pub window_size: u32,
    pub dictionary: Option<PathBuf>,
    pub index: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        let lex = LexiconConfig::default();
        Config {
            max_distance: lex.max_distance,
            sw_count: lex.sw_count,
            fu_count: lex.fu_count,
            window_size: DEFAULT_WINDOW,
            dictionary: None,
            index: None,
        }
    }
}

fn parse_u32(key: &str, value: &str) -> Result<u32> {
    value.parse().map_err(|_| {
        Error::Config(format!(
            "{key}: expected an unsigned integer, got {value:?}"
        ))
    })
}

impl Config {
    /// Sets one key. Keys are case-insensitive; `-` and `_` are equivalent.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let norm = key.trim().to_ascii_lowercase().replace('-', "_");
        let value = value.trim();
        match norm.as_str() {
            "max_distance" => self.max_distance = parse_u32(key, value)?,
            "sw_count" => self.sw_count = parse_u32(key, value)?,
            "fu_count" => self.fu_count = parse_u32(key, value)?,
            "window_size" => self.window_size = parse_u32(key, value)?,
            "dictionary" => self.dictionary = Some(PathBuf::from(value)),
            "index" => self.index = Some(PathBuf::from(value)),
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    pub fn apply_source(&mut self, source: &str, file: &str) -> Result<()> {
        for (i, line) in source.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                file: file.to_string(),
                line: i + 1,
                reason: "expected key = value".to_string(),
            })?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let source = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.apply_source(&source, &path.display().to_string())
    }

    /// Applies `PROXIKEY_<KEY>` variables; other variables are ignored.
    pub fn apply_env<I>(&mut self, vars: I) -> Result<()>
    where
        I: IntoIterator<Item = (String, String)>,
    {
        for (name, value) in vars {
            if let Some(key) = name.strip_prefix(ENV_PREFIX) {
                if key == "CONFIG" {
                    continue;
                }
                self.set(key, &value)?;
            }
        }
        Ok(())
    }

    pub fn lexicon(&self) -> LexiconConfig {
        LexiconConfig {
            sw_count: self.sw_count,
            fu_count: self.fu_count,
            max_distance: self.max_distance,
        }
    }

    pub fn search_params(&self) -> SearchParams {
        SearchParams {
            window_size: self.window_size,
            seed_start: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.lexicon().validate()?;
        self.search_params().validate(self.max_distance)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layering() {
        let mut cfg = Config::default();
        assert_eq!(cfg.max_distance, 5);
        assert_eq!(cfg.window_size, 64);
        cfg.apply_source("# comment\nmax_distance = 7\nwindow-size=20\n", "c")
            .unwrap();
        assert_eq!(cfg.max_distance, 7);
        cfg.apply_env([
            ("PROXIKEY_MAX_DISTANCE".to_string(), "3".to_string()),
            ("HOME".to_string(), "/x".to_string()),
        ])
        .unwrap();
        assert_eq!(cfg.max_distance, 3);
        assert_eq!(cfg.window_size, 20);
        cfg.validate().unwrap();
    }

    #[test]
    fn rejects_bad_input() {
        let mut cfg = Config::default();
        assert!(cfg.set("colour", "blue").is_err());
        assert!(cfg.set("sw_count", "-1").is_err());
        assert!(cfg.apply_source("nonsense\n", "c").is_err());
        cfg.window_size = 8;
        assert!(cfg.validate().is_err());
        cfg.window_size = 65;
        assert!(cfg.validate().is_err());
    }
}
