//! Corpus analysis and construction of the ordinary and three-component key
//! posting lists.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::postings::{encode_ordinary_list, OrdinaryPosting, Posting, TriBlockWriter, TriKey};
use super::{CatalogEntry, DocInfo, Index, IndexMeta, ListEntry, OrdinaryLists, TriKeyLists};
use crate::error::{Error, Result};
use crate::lexicon::{classify_rank, FlList, LemmaClass, LemmaId, LexiconConfig};
use crate::text::{tokenize, Dictionary};

const MAX_DOC_TOKENS: usize = 1 << 31;
const BUILD_CHUNK: usize = 512;

#[derive(Debug, Clone)]
pub struct Document {
    pub name: String,
    pub text: String,
}

impl Document {
    pub fn new(name: impl Into<String>, text: impl Into<String>) -> Self {
        Document {
            name: name.into(),
            text: text.into(),
        }
    }
}

/// A lemma occurring at a word position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occurrence {
    pub pos: u32,
    pub lemma: LemmaId,
}

/// A document reduced to lemma occurrences, sorted by `(pos, lemma)`.
#[derive(Debug, Clone)]
pub struct AnalyzedDoc {
    pub name: String,
    pub tokens: u32,
    pub occurrences: Vec<Occurrence>,
}

/// Token-level occurrence counts per lemma. A word with several lemmas adds
/// one occurrence to each of them.
pub fn corpus_lemma_counts(docs: &[Document], dict: &Dictionary) -> HashMap<String, u64> {
    let mut counts: HashMap<String, u64> = HashMap::new();
    for doc in docs {
        for token in tokenize(&doc.text) {
            for lemma in dict.lemmatize(&token.surface) {
                if let Some(c) = counts.get_mut(lemma) {
                    *c += 1;
                } else {
                    counts.insert(lemma.to_string(), 1);
                }
            }
        }
    }
    counts
}

/// Lemmatizes a document against the FL-list. Lemmas unknown to the list
/// are dropped; they cannot take part in any key.
pub fn analyze_document(doc: &Document, dict: &Dictionary, fl: &FlList) -> Result<AnalyzedDoc> {
    let tokens = tokenize(&doc.text);
    if tokens.len() >= MAX_DOC_TOKENS {
        return Err(Error::DocumentTooLarge {
            name: doc.name.clone(),
            tokens: tokens.len(),
        });
    }
    let mut occurrences = Vec::with_capacity(tokens.len());
    for token in &tokens {
        let start = occurrences.len();
        for lemma in dict.lemmatize(&token.surface) {
            if let Some(id) = fl.id(lemma) {
                occurrences.push(Occurrence {
                    pos: token.position,
                    lemma: id,
                });
            }
        }
        occurrences[start..].sort_unstable();
    }
    occurrences.dedup();
    Ok(AnalyzedDoc {
        name: doc.name.clone(),
        tokens: tokens.len() as u32,
        occurrences,
    })
}

/// Enumerates every three-component key posting of one document.
///
/// `stops` must be sorted by `(pos, lemma)` and hold only stop lemmas. Each
/// posting is anchored at the occurrence of the lowest-ranked lemma; partners
/// lie within `max_distance` of the anchor at distinct positions. When two
/// components share a lemma, the earlier occurrence takes the earlier slot,
/// so an unordered occurrence triple yields at most one posting.
pub fn enumerate_tri_postings(
    doc: u32,
    stops: &[Occurrence],
    max_distance: u32,
) -> BTreeMap<TriKey, Vec<Posting>> {
    let mut out: BTreeMap<TriKey, Vec<Posting>> = BTreeMap::new();
    for (key, posting) in enumerate_pairs(doc, stops, max_distance) {
        out.entry(key).or_default().push(posting);
    }
    for list in out.values_mut() {
        list.sort_unstable();
    }
    out
}

fn enumerate_pairs(doc: u32, stops: &[Occurrence], max_distance: u32) -> Vec<(TriKey, Posting)> {
    let mut out = Vec::new();
    let mut neighbours: Vec<Occurrence> = Vec::new();
    let mut lo = 0usize;
    for anchor in stops {
        let f = anchor.lemma;
        while stops[lo].pos + max_distance < anchor.pos {
            lo += 1;
        }
        neighbours.clear();
        neighbours.extend(
            stops[lo..]
                .iter()
                .take_while(|o| o.pos <= anchor.pos + max_distance)
                .filter(|o| o.pos != anchor.pos && o.lemma >= f)
                // Same lemma as the anchor: only later occurrences may partner.
                .filter(|o| o.lemma != f || o.pos > anchor.pos),
        );
        for (i, a) in neighbours.iter().enumerate() {
            for b in &neighbours[i + 1..] {
                if a.pos == b.pos {
                    continue;
                }
                let (s, t) = if (a.lemma, a.pos) < (b.lemma, b.pos) {
                    (a, b)
                } else {
                    (b, a)
                };
                let posting = Posting {
                    doc,
                    pos: anchor.pos,
                    d1: s.pos as i32 - anchor.pos as i32,
                    d2: t.pos as i32 - anchor.pos as i32,
                };
                out.push((TriKey::new(f, s.lemma, t.lemma), posting));
            }
        }
    }
    out
}

/// Builds both index families over `docs`, which must already be analyzed
/// against `fl`. Document ids follow slice order.
pub fn build_analyzed(docs: &[AnalyzedDoc], fl: FlList, cfg: &LexiconConfig) -> Result<Index> {
    cfg.validate()?;
    if docs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if fl.is_empty() {
        return Err(Error::EmptyLexicon);
    }
    let m = cfg.max_distance;

    let mut ordinary: Vec<Vec<OrdinaryPosting>> = vec![Vec::new(); fl.len()];
    let mut writers: HashMap<TriKey, TriBlockWriter> = HashMap::new();

    for (chunk_idx, chunk) in docs.chunks(BUILD_CHUNK).enumerate() {
        let base = chunk_idx * BUILD_CHUNK;
        let per_doc: Vec<Vec<(TriKey, Posting)>> = chunk
            .par_iter()
            .enumerate()
            .map(|(i, doc)| {
                let stops: Vec<Occurrence> = doc
                    .occurrences
                    .iter()
                    .copied()
                    .filter(|o| classify_rank(o.lemma, cfg) == LemmaClass::Stop)
                    .collect();
                let mut pairs = enumerate_pairs((base + i) as u32, &stops, m);
                pairs.sort_unstable();
                pairs
            })
            .collect();
        for (i, doc) in chunk.iter().enumerate() {
            let id = (base + i) as u32;
            for o in &doc.occurrences {
                ordinary[o.lemma.0 as usize].push(OrdinaryPosting {
                    doc: id,
                    pos: o.pos,
                });
            }
        }
        for pairs in per_doc {
            for (key, posting) in pairs {
                writers.entry(key).or_default().push(&posting);
            }
        }
    }

    let mut ord_entries = Vec::with_capacity(ordinary.len());
    let mut ord_data = Vec::new();
    for list in &ordinary {
        let offset = ord_data.len() as u64;
        encode_ordinary_list(list, &mut ord_data);
        ord_entries.push(ListEntry {
            offset,
            len: ord_data.len() as u64 - offset,
            count: list.len() as u64,
        });
    }
    drop(ordinary);

    let mut keyed: Vec<(TriKey, TriBlockWriter)> = writers.into_iter().collect();
    keyed.sort_unstable_by_key(|(k, _)| *k);
    let mut catalog = Vec::with_capacity(keyed.len());
    let mut tri_data = Vec::new();
    for (key, writer) in keyed {
        let offset = tri_data.len() as u64;
        let count = writer.count();
        writer.finish_into(&mut tri_data);
        catalog.push(CatalogEntry {
            key,
            offset,
            len: tri_data.len() as u64 - offset,
            count,
        });
    }

    let meta = IndexMeta {
        max_distance: cfg.max_distance,
        sw_count: cfg.sw_count,
        fu_count: cfg.fu_count,
        docs: docs
            .iter()
            .map(|d| DocInfo {
                name: d.name.clone(),
                tokens: d.tokens,
            })
            .collect(),
    };
    Ok(Index {
        meta,
        lexicon: fl,
        ordinary: OrdinaryLists {
            entries: ord_entries,
            data: ord_data,
        },
        trikeys: TriKeyLists {
            catalog,
            data: tri_data,
        },
    })
}

/// Analyzes and indexes raw documents. `fl` should be built over the same
/// corpus (see [`corpus_lemma_counts`]).
pub fn build_index(
    docs: &[Document],
    dict: &Dictionary,
    cfg: &LexiconConfig,
    fl: FlList,
) -> Result<Index> {
    if docs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let analyzed = docs
        .par_iter()
        .map(|d| analyze_document(d, dict, &fl))
        .collect::<Result<Vec<_>>>()?;
    build_analyzed(&analyzed, fl, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn occ(list: &[(u32, u32)]) -> Vec<Occurrence> {
        let mut v: Vec<Occurrence> = list
            .iter()
            .map(|&(pos, l)| Occurrence {
                pos,
                lemma: LemmaId(l),
            })
            .collect();
        v.sort_unstable();
        v
    }

    fn key(f: u32, s: u32, t: u32) -> TriKey {
        TriKey::new(LemmaId(f), LemmaId(s), LemmaId(t))
    }

    #[test]
    fn repeated_second_lemma_orders_by_position() {
        // be=0, who=1: "who has reality who is real who is true"
        let stops = occ(&[(0, 1), (3, 1), (4, 0), (6, 1), (7, 0)]);
        let out = enumerate_tri_postings(1, &stops, 5);
        let list = &out[&key(0, 1, 1)];
        assert_eq!(
            list,
            &vec![
                Posting::new(1, 4, -4, -1),
                Posting::new(1, 4, -4, 2),
                Posting::new(1, 4, -1, 2),
                Posting::new(1, 7, -4, -1),
            ]
        );
    }

    #[test]
    fn repeated_anchor_lemma_anchors_first_occurrence() {
        let stops = occ(&[(0, 0), (2, 0), (3, 1)]);
        let out = enumerate_tri_postings(0, &stops, 5);
        assert_eq!(out[&key(0, 0, 1)], vec![Posting::new(0, 0, 2, 3)]);
        // Anchor at 0 cannot reach 9, so the triple {0, 5, 9} has no posting.
        let stops = occ(&[(0, 0), (5, 0), (9, 1)]);
        assert!(!enumerate_tri_postings(0, &stops, 5).contains_key(&key(0, 0, 1)));
    }

    #[test]
    fn all_equal_lemmas() {
        let stops = occ(&[(1, 2), (2, 2), (4, 2), (9, 2)]);
        let out = enumerate_tri_postings(0, &stops, 3);
        assert_eq!(
            out[&key(2, 2, 2)],
            vec![Posting::new(0, 1, 1, 3)],
            "only anchor 1 sees two later occurrences"
        );
    }

    #[test]
    fn homograph_position_never_pairs_with_itself() {
        // lemmas 0 and 1 share position 2
        let stops = occ(&[(2, 0), (2, 1), (3, 2)]);
        let out = enumerate_tri_postings(0, &stops, 5);
        assert!(out.is_empty());
    }

    #[test]
    fn single_token_has_no_keys() {
        assert!(enumerate_tri_postings(0, &occ(&[(0, 0)]), 5).is_empty());
        assert!(enumerate_tri_postings(0, &[], 5).is_empty());
    }
}
