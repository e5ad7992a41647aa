//! Word segmentation and dictionary lemmatization.
//!
//! Tokens are maximal runs of alphanumeric characters, lowercased, numbered
//! from zero in text order. Lemmatization is a plain dictionary lookup; a word
//! missing from the dictionary is its own lemma.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub position: u32,
}

pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let flush = |current: &mut String, tokens: &mut Vec<Token>| {
        if !current.is_empty() {
            let position = tokens.len() as u32;
            tokens.push(Token {
                surface: std::mem::take(current),
                position,
            });
        }
    };
    for ch in text.chars() {
        if ch.is_alphanumeric() {
            // Some lowercase mappings add combining marks; drop them so a
            // surface never contains a separator.
            current.extend(ch.to_lowercase().filter(|c| c.is_alphanumeric()));
        } else {
            flush(&mut current, &mut tokens);
        }
    }
    flush(&mut current, &mut tokens);
    tokens
}

/// Maps surface words to their ordered, duplicate-free lemma lists.
#[derive(Debug, Clone, Default)]
pub struct Dictionary {
    entries: HashMap<String, Vec<String>>,
}

impl Dictionary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds or replaces an entry. Duplicate lemmas are dropped, keeping the
    /// first occurrence; an empty list removes the entry.
    pub fn insert<I, S>(&mut self, word: &str, lemmas: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut list: Vec<String> = Vec::new();
        for lemma in lemmas {
            let lemma = lemma.into();
            if !list.contains(&lemma) {
                list.push(lemma);
            }
        }
        if list.is_empty() {
            self.entries.remove(word);
        } else {
            self.entries.insert(word.to_lowercase(), list);
        }
    }

    /// Parses the `word<TAB>lemma1,lemma2` format. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn parse(source: &str, file: &str) -> Result<Self> {
        let mut dict = Dictionary::new();
        for (idx, raw) in source.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |reason: &str| Error::Parse {
                file: file.to_string(),
                line: idx + 1,
                reason: reason.to_string(),
            };
            let (word, lemmas) = line
                .split_once('\t')
                .ok_or_else(|| parse_err("expected word<TAB>lemmas"))?;
            let word = word.trim();
            if word.is_empty() {
                return Err(parse_err("empty word"));
            }
            let lemmas: Vec<&str> = lemmas
                .split(',')
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect();
            if lemmas.is_empty() {
                return Err(parse_err("empty lemma list"));
            }
            dict.insert(word, lemmas);
        }
        Ok(dict)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let source = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&source, &path.display().to_string())
    }

    pub fn lemmatize<'a>(&'a self, word: &'a str) -> Vec<&'a str> {
        match self.entries.get(word) {
            Some(lemmas) => lemmas.iter().map(String::as_str).collect(),
            None => vec![word],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
