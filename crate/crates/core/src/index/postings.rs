//! Posting records, their block encoding, and forward-only cursors over
//! encoded lists.
//!
//! A three-component key block is `count` followed by one record per posting:
//! document delta, anchor position (delta within a document, absolute after a
//! document change), then the two zigzag-mapped signed distances. Ordinary
//! lists are sequences of independently decodable blocks of at most
//! [`ORDINARY_BLOCK_LEN`] `(doc, position)` records using the same delta rules.

use std::fmt;

use crate::codec::{get_varint, put_varint, unzigzag, zigzag};
use crate::error::{Error, Result};
use crate::lexicon::{FlList, LemmaId};

pub const ORDINARY_BLOCK_LEN: usize = 4096;

/// Physical index key. Components are ordered by FL-number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriKey {
    pub f: LemmaId,
    pub s: LemmaId,
    pub t: LemmaId,
}

impl TriKey {
    pub fn new(f: LemmaId, s: LemmaId, t: LemmaId) -> Self {
        debug_assert!(f <= s && s <= t, "unsorted key ({f}, {s}, {t})");
        TriKey { f, s, t }
    }

    pub fn components(&self) -> [LemmaId; 3] {
        [self.f, self.s, self.t]
    }

    pub fn display<'a>(&'a self, fl: &'a FlList) -> impl fmt::Display + 'a {
        KeyDisplay { key: self, fl }
    }
}

struct KeyDisplay<'a> {
    key: &'a TriKey,
    fl: &'a FlList,
}

impl fmt::Display for KeyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            self.fl.lemma(self.key.f),
            self.fl.lemma(self.key.s),
            self.fl.lemma(self.key.t)
        )
    }
}

/// One anchored co-occurrence: the `f` lemma at `pos`, the `s` lemma at
/// `pos + d1`, the `t` lemma at `pos + d2`. Field order gives the list order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Posting {
    pub doc: u32,
    pub pos: u32,
    pub d1: i32,
    pub d2: i32,
}

impl Posting {
    pub fn new(doc: u32, pos: u32, d1: i32, d2: i32) -> Self {
        Posting { doc, pos, d1, d2 }
    }

    /// Absolute positions of the three components.
    pub fn positions(&self) -> [i64; 3] {
        let p = i64::from(self.pos);
        [p, p + i64::from(self.d1), p + i64::from(self.d2)]
    }

    /// Checks the distance rules for a list built with `max_distance`.
    pub fn is_valid(&self, max_distance: u32) -> bool {
        let m = max_distance as i32;
        let [_, a, b] = self.positions();
        self.d1 != 0
            && self.d2 != 0
            && self.d1 != self.d2
            && self.d1.abs() <= m
            && self.d2.abs() <= m
            && a >= 0
            && b >= 0
    }
}

impl fmt::Display for Posting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.doc, self.pos, self.d1, self.d2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrdinaryPosting {
    pub doc: u32,
    pub pos: u32,
}

/// Incremental encoder for one key's block body.
#[derive(Debug, Default, Clone)]
pub(crate) struct TriBlockWriter {
    body: Vec<u8>,
    count: u64,
    last: Option<(u32, u32)>,
}

impl TriBlockWriter {
    pub(crate) fn push(&mut self, p: &Posting) {
        let (last_doc, last_pos) = self.last.unwrap_or((0, 0));
        debug_assert!(self.last.is_none() || (p.doc, p.pos) >= (last_doc, last_pos));
        put_varint(&mut self.body, u64::from(p.doc - last_doc));
        if p.doc == last_doc && self.last.is_some() {
            put_varint(&mut self.body, u64::from(p.pos - last_pos));
        } else {
            put_varint(&mut self.body, u64::from(p.pos));
        }
        put_varint(&mut self.body, zigzag(i64::from(p.d1)));
        put_varint(&mut self.body, zigzag(i64::from(p.d2)));
        self.count += 1;
        self.last = Some((p.doc, p.pos));
    }

    pub(crate) fn count(&self) -> u64 {
        self.count
    }

    pub(crate) fn finish_into(self, out: &mut Vec<u8>) {
        put_varint(out, self.count);
        out.extend_from_slice(&self.body);
    }
}

pub fn encode_posting_block(postings: &[Posting]) -> Vec<u8> {
    let mut writer = TriBlockWriter::default();
    for p in postings {
        writer.push(p);
    }
    let mut out = Vec::new();
    writer.finish_into(&mut out);
    out
}

pub fn decode_posting_block(bytes: &[u8]) -> Result<Vec<Posting>> {
    let mut it = TriPostingIter::open(None, bytes, "posting block")?;
    let mut out = Vec::new();
    while let Some(p) = it.value() {
        out.push(p);
        it.advance()?;
    }
    if it.offset() != bytes.len() {
        return Err(Error::Decode {
            context: "posting block".into(),
            offset: it.offset(),
            reason: "trailing bytes",
        });
    }
    Ok(out)
}

/// Forward-only cursor over one three-component key's postings.
///
/// `value()` is the current record; `advance()` decodes the next one. Every
/// decoded record counts towards `postings_read()`.
#[derive(Debug, Clone)]
pub struct TriPostingIter<'a> {
    key: Option<TriKey>,
    data: &'a [u8],
    offset: usize,
    remaining: u64,
    current: Option<Posting>,
    read: u64,
    context: &'static str,
}

impl<'a> TriPostingIter<'a> {
    pub fn empty(key: TriKey) -> Self {
        TriPostingIter {
            key: Some(key),
            data: &[],
            offset: 0,
            remaining: 0,
            current: None,
            read: 0,
            context: "trikey",
        }
    }

    pub(crate) fn open(key: Option<TriKey>, data: &'a [u8], context: &'static str) -> Result<Self> {
        let mut offset = 0;
        let remaining = get_varint(data, &mut offset).ok_or_else(|| Error::Decode {
            context: describe(context, key),
            offset: 0,
            reason: "truncated block header",
        })?;
        let mut it = TriPostingIter {
            key,
            data,
            offset,
            remaining,
            current: None,
            read: 0,
            context,
        };
        it.advance()?;
        Ok(it)
    }

    pub fn key(&self) -> Option<TriKey> {
        self.key
    }

    #[inline]
    pub fn value(&self) -> Option<Posting> {
        self.current
    }

    pub fn postings_read(&self) -> u64 {
        self.read
    }

    pub(crate) fn offset(&self) -> usize {
        self.offset
    }

    pub fn advance(&mut self) -> Result<()> {
        if self.remaining == 0 {
            self.current = None;
            return Ok(());
        }
        let start = self.offset;
        let (data, key, context) = (self.data, self.key, self.context);
        let fail = |reason| Error::Decode {
            context: describe(context, key),
            offset: start,
            reason,
        };
        let mut off = self.offset;
        let mut next = || get_varint(data, &mut off).ok_or_else(|| fail("truncated posting"));
        let doc_delta = next()?;
        let pos_raw = next()?;
        let d1 = unzigzag(next()?);
        let d2 = unzigzag(next()?);
        let (doc, pos) = match self.current {
            Some(prev) if doc_delta == 0 => (u64::from(prev.doc), u64::from(prev.pos) + pos_raw),
            Some(prev) => (u64::from(prev.doc) + doc_delta, pos_raw),
            None => (doc_delta, pos_raw),
        };
        let to_i32 = |v: i64| i32::try_from(v).map_err(|_| fail("distance out of range"));
        let posting = Posting {
            doc: u32::try_from(doc).map_err(|_| fail("document id overflow"))?,
            pos: u32::try_from(pos).map_err(|_| fail("position overflow"))?,
            d1: to_i32(d1)?,
            d2: to_i32(d2)?,
        };
        self.offset = off;
        self.remaining -= 1;
        self.current = Some(posting);
        self.read += 1;
        Ok(())
    }
}

fn describe(context: &str, key: Option<TriKey>) -> String {
    match key {
        Some(k) => format!("{context} ({}, {}, {})", k.f.0, k.s.0, k.t.0),
        None => context.to_string(),
    }
}

pub(crate) fn encode_ordinary_list(postings: &[OrdinaryPosting], out: &mut Vec<u8>) {
    for block in postings.chunks(ORDINARY_BLOCK_LEN) {
        put_varint(out, block.len() as u64);
        let mut last: Option<OrdinaryPosting> = None;
        for p in block {
            match last {
                Some(prev) if prev.doc == p.doc => {
                    put_varint(out, 0);
                    put_varint(out, u64::from(p.pos - prev.pos));
                }
                Some(prev) => {
                    put_varint(out, u64::from(p.doc - prev.doc));
                    put_varint(out, u64::from(p.pos));
                }
                None => {
                    put_varint(out, u64::from(p.doc));
                    put_varint(out, u64::from(p.pos));
                }
            }
            last = Some(*p);
        }
    }
}

/// Forward-only cursor over one lemma's ordinary positional list.
#[derive(Debug, Clone)]
pub struct OrdinaryPostingIter<'a> {
    lemma: LemmaId,
    data: &'a [u8],
    offset: usize,
    block_remaining: u64,
    current: Option<OrdinaryPosting>,
    fresh_block: bool,
    read: u64,
}

impl<'a> OrdinaryPostingIter<'a> {
    pub(crate) fn open(lemma: LemmaId, data: &'a [u8]) -> Result<Self> {
        let mut it = OrdinaryPostingIter {
            lemma,
            data,
            offset: 0,
            block_remaining: 0,
            current: None,
            fresh_block: true,
            read: 0,
        };
        it.advance()?;
        Ok(it)
    }

    pub fn lemma(&self) -> LemmaId {
        self.lemma
    }

    #[inline]
    pub fn value(&self) -> Option<OrdinaryPosting> {
        self.current
    }

    pub fn postings_read(&self) -> u64 {
        self.read
    }

    pub fn advance(&mut self) -> Result<()> {
        let lemma = self.lemma;
        let fail = |offset, reason| Error::Decode {
            context: format!("ordinary list {}", lemma.0),
            offset,
            reason,
        };
        let mut off = self.offset;
        if self.block_remaining == 0 {
            if off >= self.data.len() {
                self.current = None;
                return Ok(());
            }
            self.block_remaining = get_varint(self.data, &mut off)
                .ok_or_else(|| fail(self.offset, "truncated block header"))?;
            if self.block_remaining == 0 {
                return Err(fail(self.offset, "empty block"));
            }
            self.fresh_block = true;
        }
        let start = off;
        let a = get_varint(self.data, &mut off).ok_or_else(|| fail(start, "truncated posting"))?;
        let b = get_varint(self.data, &mut off).ok_or_else(|| fail(start, "truncated posting"))?;
        let (doc, pos) = match self.current {
            Some(prev) if !self.fresh_block && a == 0 => {
                (u64::from(prev.doc), u64::from(prev.pos) + b)
            }
            Some(prev) if !self.fresh_block => (u64::from(prev.doc) + a, b),
            _ => (a, b),
        };
        let doc = u32::try_from(doc).map_err(|_| fail(start, "document id overflow"))?;
        let pos = u32::try_from(pos).map_err(|_| fail(start, "position overflow"))?;
        self.offset = off;
        self.block_remaining -= 1;
        self.fresh_block = false;
        self.current = Some(OrdinaryPosting { doc, pos });
        self.read += 1;
        Ok(())
    }
}
