//! Structural and semantic checks over a built index.

use std::path::Path;

use crate::error::Result;
use crate::index::{Index, Posting};
use crate::oracle::oracle_tri_postings;

/// Corpora up to this many tokens are also compared against the oracle.
pub const ORACLE_TOKEN_LIMIT: u64 = 200_000;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub keys_checked: usize,
    pub postings_checked: u64,
    pub oracle_checked: bool,
    pub violations: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Opens and checks an index directory. Unreadable or malformed files are
/// reported as violations.
pub fn verify_dir(dir: impl AsRef<Path>) -> VerifyReport {
    match Index::open(dir).and_then(|index| verify_index(&index)) {
        Ok(report) => report,
        Err(e) => VerifyReport {
            violations: vec![e.to_string()],
            ..VerifyReport::default()
        },
    }
}

pub fn verify_index(index: &Index) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    let meta = &index.meta;
    let m = meta.max_distance;
    let docs = &meta.docs;
    let in_doc = |doc: u32, pos: i64| {
        docs.get(doc as usize)
            .is_some_and(|d| pos >= 0 && pos < i64::from(d.tokens))
    };

    if let Err(e) = meta.lexicon_config().validate() {
        report.violations.push(format!("meta: {e}"));
    }

    for (lemma, name, _) in index.lexicon.iter() {
        let entry = index.ordinary.entries[lemma.0 as usize];
        let mut it = match index.open_ordinary_iterator(lemma) {
            Ok(it) => it,
            Err(e) => {
                report
                    .violations
                    .push(format!("ordinary list {name:?}: {e}"));
                continue;
            }
        };
        let mut prev = None;
        let mut n = 0u64;
        let before = report.violations.len();
        while let Some(p) = it.value() {
            if prev.is_some_and(|q| q >= p) {
                report
                    .violations
                    .push(format!("ordinary list {name:?}: posting {n} out of order"));
                break;
            }
            if !in_doc(p.doc, i64::from(p.pos)) {
                report.violations.push(format!(
                    "ordinary list {name:?}: posting {n} outside its document"
                ));
                break;
            }
            prev = Some(p);
            n += 1;
            if let Err(e) = it.advance() {
                report
                    .violations
                    .push(format!("ordinary list {name:?}: {e}"));
                break;
            }
        }
        if n != entry.count && report.violations.len() == before {
            report.violations.push(format!(
                "ordinary list {name:?}: {n} postings, catalog says {}",
                entry.count
            ));
        }
        report.postings_checked += n;
    }

    for entry in index.catalog() {
        report.keys_checked += 1;
        let key = entry.key;
        let label = format!(
            "key {} at offset {}",
            key.display(&index.lexicon),
            entry.offset
        );
        if key.t.0 >= meta.sw_count || key.t.0 as usize >= index.lexicon.len() {
            report
                .violations
                .push(format!("{label}: component is not a stop lemma"));
        }
        let mut it = match index.open_tri_iterator(key) {
            Ok(it) => it,
            Err(e) => {
                report.violations.push(format!("{label}: {e}"));
                continue;
            }
        };
        let mut prev: Option<Posting> = None;
        let mut n = 0u64;
        let mut failed = false;
        while let Some(p) = it.value() {
            let problem = if prev.is_some_and(|q| q >= p) {
                Some("postings out of order")
            } else if !p.is_valid(m) {
                Some("distance rule violated")
            } else if !p.positions().iter().all(|&x| in_doc(p.doc, x)) {
                Some("position outside its document")
            } else {
                None
            };
            if let Some(reason) = problem {
                report
                    .violations
                    .push(format!("{label}: posting {n} {p}: {reason}"));
                failed = true;
                break;
            }
            prev = Some(p);
            n += 1;
            if let Err(e) = it.advance() {
                report.violations.push(format!("{label}: {e}"));
                failed = true;
                break;
            }
        }
        if !failed && (n != entry.count || it.offset() as u64 != entry.len) {
            report.violations.push(format!(
                "{label}: {n} postings in {} bytes, catalog says {} in {}",
                it.offset(),
                entry.count,
                entry.len
            ));
        }
        report.postings_checked += n;
    }

    if report.passed() && meta.total_tokens() <= ORACLE_TOKEN_LIMIT {
        report.oracle_checked = true;
        let expected = oracle_tri_postings(&index.reconstruct_documents()?, &meta.lexicon_config());
        if expected.len() != index.catalog().len() {
            report.violations.push(format!(
                "oracle: {} keys expected, index has {}",
                expected.len(),
                index.catalog().len()
            ));
        }
        for (key, list) in &expected {
            let Some(entry) = index.catalog_entry(key) else {
                report.violations.push(format!(
                    "oracle: key {} missing",
                    key.display(&index.lexicon)
                ));
                continue;
            };
            if &index.tri_postings(*key)? != list {
                report.violations.push(format!(
                    "oracle: key {} at offset {} differs",
                    key.display(&index.lexicon),
                    entry.offset
                ));
            }
        }
    }
    Ok(report)
}
