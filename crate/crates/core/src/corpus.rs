//! Corpus directories and lexicon construction.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::index::{build_index, corpus_lemma_counts, Document, Index};
use crate::lexicon::{FlList, LexiconConfig};
use crate::text::Dictionary;

/// Reads every `.txt` file of `dir`, ordered by file name.
pub fn load_corpus_dir(dir: impl AsRef<Path>) -> Result<Vec<Document>> {
    let dir = dir.as_ref();
    let mut paths = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "txt") {
            paths.push(path);
        }
    }
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            let name = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok(Document::new(name, text))
        })
        .collect()
}

/// Parses `lemma<TAB>count` lines. Blank lines and `#` comments are skipped.
pub fn parse_fl_counts(source: &str, file: &str) -> Result<HashMap<String, u64>> {
    let mut out = HashMap::new();
    for (i, line) in source.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |reason: &str| Error::Parse {
            file: file.to_string(),
            line: i + 1,
            reason: reason.to_string(),
        };
        let (lemma, count) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| err("expected lemma and count"))?;
        let count = count
            .trim()
            .parse::<u64>()
            .map_err(|_| err("count is not an unsigned integer"))?;
        out.insert(lemma.to_lowercase(), count);
    }
    Ok(out)
}

pub fn load_fl_counts(path: impl AsRef<Path>) -> Result<HashMap<String, u64>> {
    let path = path.as_ref();
    let source = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_fl_counts(&source, &path.display().to_string())
}

/// FL-list from corpus token counts; `overrides` replace the counts of the
/// lemmas they list and may add lemmas absent from the corpus.
pub fn corpus_fl(
    docs: &[Document],
    dict: &Dictionary,
    overrides: &HashMap<String, u64>,
) -> Result<FlList> {
    let mut counts = corpus_lemma_counts(docs, dict);
    for (lemma, &count) in overrides {
        counts.insert(lemma.clone(), count);
    }
    FlList::from_counts(counts)
}

/// Lexicon and index over `docs` in one step.
pub fn build_corpus(
    docs: &[Document],
    dict: &Dictionary,
    cfg: &LexiconConfig,
    overrides: &HashMap<String, u64>,
) -> Result<Index> {
    let fl = corpus_fl(docs, dict, overrides)?;
    build_index(docs, dict, cfg, fl)
}
