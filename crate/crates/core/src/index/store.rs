//! Index directory persistence. Every file is a sealed envelope
//! (see [`crate::codec::seal`]); integers are little-endian.

use std::fs;
use std::path::Path;

use super::postings::TriKey;
use super::{CatalogEntry, DocInfo, Index, IndexMeta, ListEntry, OrdinaryLists, TriKeyLists};
use crate::codec::{self, Reader, SectionTag};
use crate::error::{Error, Result};
use crate::lexicon::{FlList, LemmaId};

pub const INDEX_FILES: [&str; 5] = [
    "meta",
    "lexicon.fl",
    "ordinary.idx",
    "trikey.cat",
    "trikey.idx",
];

const META_MAGIC: &[u8; 8] = b"PXMETA\0\0";
const ORDINARY_MAGIC: &[u8; 8] = b"PXORDIX\0";
const CATALOG_MAGIC: &[u8; 8] = b"PXTRCAT\0";
const TRIKEY_MAGIC: &[u8; 8] = b"PXTRIDX\0";

fn format_err(file: &str, reason: impl Into<String>) -> Error {
    Error::Format {
        file: file.to_string(),
        reason: reason.into(),
    }
}

fn encode_meta(meta: &IndexMeta) -> Vec<u8> {
    let mut p = Vec::new();
    codec::put_u32(&mut p, meta.max_distance);
    codec::put_u32(&mut p, meta.sw_count);
    codec::put_u32(&mut p, meta.fu_count);
    codec::put_u32(&mut p, meta.docs.len() as u32);
    for d in &meta.docs {
        codec::put_str(&mut p, &d.name);
        codec::put_u32(&mut p, d.tokens);
    }
    codec::seal(META_MAGIC, &p)
}

fn decode_meta(bytes: &[u8]) -> Result<IndexMeta> {
    let payload = codec::unseal(bytes, META_MAGIC, "meta")?;
    let mut r = Reader::new(payload, "meta");
    let max_distance = r.u32()?;
    let sw_count = r.u32()?;
    let fu_count = r.u32()?;
    let n = r.u32()? as usize;
    let mut docs = Vec::with_capacity(n.min(1 << 20));
    for _ in 0..n {
        let name = r.string()?;
        let tokens = r.u32()?;
        docs.push(DocInfo { name, tokens });
    }
    if !r.is_empty() {
        return Err(format_err("meta", "trailing bytes"));
    }
    Ok(IndexMeta {
        max_distance,
        sw_count,
        fu_count,
        docs,
    })
}

fn encode_ordinary(lists: &OrdinaryLists) -> Vec<u8> {
    let mut p = Vec::with_capacity(lists.data.len() + lists.entries.len() * 24 + 8);
    p.push(SectionTag::Ordinary as u8);
    codec::put_u32(&mut p, lists.entries.len() as u32);
    for e in &lists.entries {
        codec::put_u64(&mut p, e.offset);
        codec::put_u64(&mut p, e.len);
        codec::put_u64(&mut p, e.count);
    }
    p.extend_from_slice(&lists.data);
    codec::seal(ORDINARY_MAGIC, &p)
}

fn decode_ordinary(bytes: &[u8]) -> Result<OrdinaryLists> {
    const FILE: &str = "ordinary.idx";
    let payload = codec::unseal(bytes, ORDINARY_MAGIC, FILE)?;
    let mut r = Reader::new(payload, FILE);
    if r.u8()? != SectionTag::Ordinary as u8 {
        return Err(format_err(FILE, "unexpected section tag"));
    }
    let n = r.u32()? as usize;
    let mut entries = Vec::with_capacity(n.min(1 << 24));
    for _ in 0..n {
        entries.push(ListEntry {
            offset: r.u64()?,
            len: r.u64()?,
            count: r.u64()?,
        });
    }
    let data = payload[r.position()..].to_vec();
    check_extents(FILE, entries.iter().map(|e| (e.offset, e.len)), data.len())?;
    Ok(OrdinaryLists { entries, data })
}

fn encode_catalog(catalog: &[CatalogEntry]) -> Vec<u8> {
    let mut p = Vec::with_capacity(catalog.len() * 36 + 4);
    codec::put_u32(&mut p, catalog.len() as u32);
    for e in catalog {
        codec::put_u32(&mut p, e.key.f.0);
        codec::put_u32(&mut p, e.key.s.0);
        codec::put_u32(&mut p, e.key.t.0);
        codec::put_u64(&mut p, e.offset);
        codec::put_u64(&mut p, e.len);
        codec::put_u64(&mut p, e.count);
    }
    codec::seal(CATALOG_MAGIC, &p)
}

fn decode_catalog(bytes: &[u8]) -> Result<Vec<CatalogEntry>> {
    const FILE: &str = "trikey.cat";
    let payload = codec::unseal(bytes, CATALOG_MAGIC, FILE)?;
    let mut r = Reader::new(payload, FILE);
    let n = r.u32()? as usize;
    let mut catalog = Vec::with_capacity(n.min(1 << 24));
    for _ in 0..n {
        let f = LemmaId(r.u32()?);
        let s = LemmaId(r.u32()?);
        let t = LemmaId(r.u32()?);
        if !(f <= s && s <= t) {
            return Err(format_err(
                FILE,
                format!("unsorted key ({}, {}, {})", f.0, s.0, t.0),
            ));
        }
        catalog.push(CatalogEntry {
            key: TriKey { f, s, t },
            offset: r.u64()?,
            len: r.u64()?,
            count: r.u64()?,
        });
    }
    if !r.is_empty() {
        return Err(format_err(FILE, "trailing bytes"));
    }
    if catalog.windows(2).any(|w| w[0].key >= w[1].key) {
        return Err(format_err(FILE, "catalog keys not strictly increasing"));
    }
    Ok(catalog)
}

fn encode_trikeys(data: &[u8]) -> Vec<u8> {
    let mut p = Vec::with_capacity(data.len() + 1);
    p.push(SectionTag::TriKey as u8);
    p.extend_from_slice(data);
    codec::seal(TRIKEY_MAGIC, &p)
}

fn decode_trikeys(bytes: &[u8]) -> Result<Vec<u8>> {
    const FILE: &str = "trikey.idx";
    let payload = codec::unseal(bytes, TRIKEY_MAGIC, FILE)?;
    match payload.first() {
        Some(&tag) if tag == SectionTag::TriKey as u8 => Ok(payload[1..].to_vec()),
        _ => Err(format_err(FILE, "unexpected section tag")),
    }
}

fn check_extents(file: &str, extents: impl Iterator<Item = (u64, u64)>, len: usize) -> Result<()> {
    for (offset, size) in extents {
        if offset.checked_add(size).is_none_or(|end| end > len as u64) {
            return Err(format_err(
                file,
                format!("list extent {offset}+{size} beyond data"),
            ));
        }
    }
    Ok(())
}

fn read(dir: &Path, name: &str) -> Result<Vec<u8>> {
    let path = dir.join(name);
    fs::read(&path).map_err(|e| Error::io(path, e))
}

fn write(dir: &Path, name: &str, bytes: &[u8]) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| Error::io(path, e))
}

impl Index {
    /// Encoded file contents in [`INDEX_FILES`] order.
    pub fn encode_files(&self) -> Vec<(&'static str, Vec<u8>)> {
        vec![
            ("meta", encode_meta(&self.meta)),
            ("lexicon.fl", self.lexicon.encode()),
            ("ordinary.idx", encode_ordinary(&self.ordinary)),
            ("trikey.cat", encode_catalog(&self.trikeys.catalog)),
            ("trikey.idx", encode_trikeys(&self.trikeys.data)),
        ]
    }

    /// Writes the index directory, creating it if needed. Returns the
    /// number of bytes written.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<u64> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut total = 0u64;
        for (name, bytes) in self.encode_files() {
            write(dir, name, &bytes)?;
            total += bytes.len() as u64;
        }
        Ok(total)
    }

    pub fn open(dir: impl AsRef<Path>) -> Result<Index> {
        let dir = dir.as_ref();
        let meta = decode_meta(&read(dir, "meta")?)?;
        let lexicon = FlList::decode(&read(dir, "lexicon.fl")?, "lexicon.fl")?;
        let ordinary = decode_ordinary(&read(dir, "ordinary.idx")?)?;
        let catalog = decode_catalog(&read(dir, "trikey.cat")?)?;
        let data = decode_trikeys(&read(dir, "trikey.idx")?)?;
        check_extents(
            "trikey.cat",
            catalog.iter().map(|e| (e.offset, e.len)),
            data.len(),
        )?;
        if ordinary.entries.len() != lexicon.len() {
            return Err(format_err(
                "ordinary.idx",
                format!(
                    "{} lists for {} lemmas",
                    ordinary.entries.len(),
                    lexicon.len()
                ),
            ));
        }
        Ok(Index {
            meta,
            lexicon,
            ordinary,
            trikeys: TriKeyLists { catalog, data },
        })
    }
}
