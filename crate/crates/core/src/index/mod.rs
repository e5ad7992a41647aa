//! Ordinary positional lists (one per lemma) and three-component key lists
//! (one per FL-ordered triple of stop lemmas), held as encoded bytes.

pub mod baseline;
pub mod build;
pub mod postings;
mod store;

pub use build::{
    analyze_document, build_analyzed, build_index, corpus_lemma_counts, enumerate_tri_postings,
    AnalyzedDoc, Document, Occurrence,
};
pub use postings::{
    decode_posting_block, encode_posting_block, OrdinaryPosting, OrdinaryPostingIter, Posting,
    TriKey, TriPostingIter,
};
pub use store::INDEX_FILES;

use crate::error::Result;
use crate::lexicon::{FlList, LemmaId, LexiconConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocInfo {
    pub name: String,
    pub tokens: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexMeta {
    pub max_distance: u32,
    pub sw_count: u32,
    pub fu_count: u32,
    pub docs: Vec<DocInfo>,
}

impl IndexMeta {
    pub fn lexicon_config(&self) -> LexiconConfig {
        LexiconConfig {
            sw_count: self.sw_count,
            fu_count: self.fu_count,
            max_distance: self.max_distance,
        }
    }

    pub fn total_tokens(&self) -> u64 {
        self.docs.iter().map(|d| u64::from(d.tokens)).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct ListEntry {
    pub offset: u64,
    pub len: u64,
    pub count: u64,
}

/// One row of the sorted key catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogEntry {
    pub key: TriKey,
    pub offset: u64,
    pub len: u64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct OrdinaryLists {
    pub entries: Vec<ListEntry>,
    pub data: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct TriKeyLists {
    pub catalog: Vec<CatalogEntry>,
    pub data: Vec<u8>,
}

/// An immutable index. Share it freely between readers; every cursor is
/// independent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Index {
    pub meta: IndexMeta,
    pub lexicon: FlList,
    pub(crate) ordinary: OrdinaryLists,
    pub(crate) trikeys: TriKeyLists,
}

impl Index {
    pub fn max_distance(&self) -> u32 {
        self.meta.max_distance
    }

    pub fn doc_count(&self) -> usize {
        self.meta.docs.len()
    }

    pub fn catalog(&self) -> &[CatalogEntry] {
        &self.trikeys.catalog
    }

    pub fn catalog_entry(&self, key: &TriKey) -> Option<&CatalogEntry> {
        let cat = &self.trikeys.catalog;
        cat.binary_search_by(|e| e.key.cmp(key))
            .ok()
            .map(|i| &cat[i])
    }

    /// Cursor over `key`'s postings; an absent key yields an exhausted cursor.
    pub fn open_tri_iterator(&self, key: TriKey) -> Result<TriPostingIter<'_>> {
        match self.catalog_entry(&key) {
            None => Ok(TriPostingIter::empty(key)),
            Some(e) => {
                let data = &self.trikeys.data[e.offset as usize..(e.offset + e.len) as usize];
                TriPostingIter::open(Some(key), data, "trikey")
            }
        }
    }

    pub fn ordinary_count(&self, lemma: LemmaId) -> u64 {
        self.ordinary
            .entries
            .get(lemma.0 as usize)
            .map_or(0, |e| e.count)
    }

    pub fn open_ordinary_iterator(&self, lemma: LemmaId) -> Result<OrdinaryPostingIter<'_>> {
        let data = match self.ordinary.entries.get(lemma.0 as usize) {
            Some(e) => &self.ordinary.data[e.offset as usize..(e.offset + e.len) as usize],
            None => &[][..],
        };
        OrdinaryPostingIter::open(lemma, data)
    }

    /// Decodes one key's full list.
    pub fn tri_postings(&self, key: TriKey) -> Result<Vec<Posting>> {
        let mut it = self.open_tri_iterator(key)?;
        let mut out = Vec::new();
        while let Some(p) = it.value() {
            out.push(p);
            it.advance()?;
        }
        Ok(out)
    }

    pub fn ordinary_postings(&self, lemma: LemmaId) -> Result<Vec<OrdinaryPosting>> {
        let mut it = self.open_ordinary_iterator(lemma)?;
        let mut out = Vec::new();
        while let Some(p) = it.value() {
            out.push(p);
            it.advance()?;
        }
        Ok(out)
    }

    /// Total size of the encoded posting data in bytes.
    pub fn data_bytes(&self) -> u64 {
        (self.ordinary.data.len() + self.trikeys.data.len()) as u64
    }

    /// Rebuilds each document's lemma occurrences from the ordinary lists.
    pub fn reconstruct_documents(&self) -> Result<Vec<Vec<Occurrence>>> {
        let mut docs: Vec<Vec<Occurrence>> = vec![Vec::new(); self.doc_count()];
        for (id, _, _) in self.lexicon.iter() {
            for p in self.ordinary_postings(id)? {
                if let Some(doc) = docs.get_mut(p.doc as usize) {
                    doc.push(Occurrence {
                        pos: p.pos,
                        lemma: id,
                    });
                }
            }
        }
        for doc in &mut docs {
            doc.sort_unstable();
        }
        Ok(docs)
    }
}
