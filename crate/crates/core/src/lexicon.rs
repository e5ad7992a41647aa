//! The FL-list: lemmas ranked by decreasing corpus occurrence count, and the
//! stop / frequently-used / ordinary classification derived from the rank.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::codec::{self, Reader};
use crate::error::{Error, Result};

/// A lemma identified by its FL-number (0 = most frequent).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LemmaId(pub u32);

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LexiconConfig {
    pub sw_count: u32,
    pub fu_count: u32,
    pub max_distance: u32,
}

impl Default for LexiconConfig {
    fn default() -> Self {
        LexiconConfig {
            sw_count: 700,
            fu_count: 2100,
            max_distance: 5,
        }
    }
}

impl LexiconConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sw_count == 0 {
            return Err(Error::Config("SWCount must be positive".into()));
        }
        if self.max_distance == 0 {
            return Err(Error::Config("MaxDistance must be at least 1".into()));
        }
        // Distances are stored as signed bytes.
        if self.max_distance > 127 {
            return Err(Error::Config("MaxDistance must be at most 127".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaClass {
    Stop,
    FrequentlyUsed,
    Ordinary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlList {
    lemmas: Vec<String>,
    counts: Vec<u64>,
    rank: HashMap<String, LemmaId>,
}

const MAGIC: &[u8; 8] = b"PXFLLST\0";

impl FlList {
    /// Ranks lemmas by decreasing count, breaking ties by ascending lemma
    /// string.
    pub fn from_counts<I, S>(counts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let mut merged: HashMap<String, u64> = HashMap::new();
        for (lemma, count) in counts {
            *merged.entry(lemma.into()).or_default() += count;
        }
        if merged.is_empty() {
            return Err(Error::EmptyLexicon);
        }
        let mut entries: Vec<(String, u64)> = merged.into_iter().collect();
        entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        Ok(Self::from_ranked(entries))
    }

    fn from_ranked(entries: Vec<(String, u64)>) -> Self {
        let rank = entries
            .iter()
            .enumerate()
            .map(|(i, (lemma, _))| (lemma.clone(), LemmaId(i as u32)))
            .collect();
        let (lemmas, counts) = entries.into_iter().unzip();
        FlList {
            lemmas,
            counts,
            rank,
        }
    }

    pub fn len(&self) -> usize {
        self.lemmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lemmas.is_empty()
    }

    pub fn id(&self, lemma: &str) -> Option<LemmaId> {
        self.rank.get(lemma).copied()
    }

    pub fn lemma(&self, id: LemmaId) -> &str {
        &self.lemmas[id.0 as usize]
    }

    pub fn count(&self, id: LemmaId) -> u64 {
        self.counts[id.0 as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (LemmaId, &str, u64)> {
        self.lemmas
            .iter()
            .zip(&self.counts)
            .enumerate()
            .map(|(i, (l, &c))| (LemmaId(i as u32), l.as_str(), c))
    }

    /// Lemmas absent from the list are ordinary.
    pub fn classify(&self, lemma: &str, cfg: &LexiconConfig) -> LemmaClass {
        match self.id(lemma) {
            Some(id) => classify_rank(id, cfg),
            None => LemmaClass::Ordinary,
        }
    }

    pub fn compare(&self, a: &str, b: &str) -> Option<Ordering> {
        Some(self.id(a)?.cmp(&self.id(b)?))
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut payload = Vec::new();
        codec::put_u32(&mut payload, self.lemmas.len() as u32);
        for (lemma, &count) in self.lemmas.iter().zip(&self.counts) {
            codec::put_str(&mut payload, lemma);
            codec::put_u64(&mut payload, count);
        }
        codec::seal(MAGIC, &payload)
    }

    pub fn decode(bytes: &[u8], file: &str) -> Result<Self> {
        let payload = codec::unseal(bytes, MAGIC, file)?;
        let mut r = Reader::new(payload, file);
        let n = r.u32()? as usize;
        let mut entries = Vec::with_capacity(n.min(1 << 20));
        for _ in 0..n {
            let lemma = r.string()?;
            let count = r.u64()?;
            entries.push((lemma, count));
        }
        if !r.is_empty() {
            return Err(Error::Format {
                file: file.into(),
                reason: "trailing bytes".into(),
            });
        }
        let fl = Self::from_ranked(entries);
        if fl.rank.len() != fl.lemmas.len() {
            return Err(Error::Format {
                file: file.into(),
                reason: "duplicate lemma".into(),
            });
        }
        Ok(fl)
    }
}

pub fn classify_rank(id: LemmaId, cfg: &LexiconConfig) -> LemmaClass {
    let rank = u64::from(id.0);
    let sw = u64::from(cfg.sw_count);
    if rank < sw {
        LemmaClass::Stop
    } else if rank < sw + u64::from(cfg.fu_count) {
        LemmaClass::FrequentlyUsed
    } else {
        LemmaClass::Ordinary
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg(sw: u32, fu: u32) -> LexiconConfig {
        LexiconConfig {
            sw_count: sw,
            fu_count: fu,
            max_distance: 5,
        }
    }

    #[test]
    fn ranks_break_ties_lexicographically() {
        let fl = FlList::from_counts([("c", 5), ("a", 10), ("b", 5)]).unwrap();
        assert_eq!(fl.id("a"), Some(LemmaId(0)));
        assert_eq!(fl.id("b"), Some(LemmaId(1)));
        assert_eq!(fl.id("c"), Some(LemmaId(2)));
        let single = FlList::from_counts([("x", 1)]).unwrap();
        assert_eq!(single.id("x"), Some(LemmaId(0)));
    }

    #[test]
    fn empty_counts_fail() {
        let empty: Vec<(String, u64)> = vec![];
        assert!(matches!(
            FlList::from_counts(empty),
            Err(Error::EmptyLexicon)
        ));
    }

    #[test]
    fn more_frequent_lemma_orders_first() {
        let fl = FlList::from_counts([("who", 3), ("you", 9), ("the", 20)]).unwrap();
        assert_eq!(fl.compare("you", "who"), Some(Ordering::Less));
        assert_eq!(fl.compare("who", "who"), Some(Ordering::Equal));
        assert_eq!(fl.compare("who", "nope"), None);
    }

    #[test]
    fn class_boundaries() {
        let c = cfg(700, 2100);
        assert_eq!(classify_rank(LemmaId(0), &c), LemmaClass::Stop);
        assert_eq!(classify_rank(LemmaId(699), &c), LemmaClass::Stop);
        assert_eq!(classify_rank(LemmaId(700), &c), LemmaClass::FrequentlyUsed);
        assert_eq!(classify_rank(LemmaId(2799), &c), LemmaClass::FrequentlyUsed);
        assert_eq!(classify_rank(LemmaId(2800), &c), LemmaClass::Ordinary);
        let fl = FlList::from_counts([("a", 2)]).unwrap();
        assert_eq!(fl.classify("unseen", &c), LemmaClass::Ordinary);
        assert_eq!(fl.classify("a", &c), LemmaClass::Stop);
    }

    #[test]
    fn encode_decode() {
        let fl = FlList::from_counts([("be", 4), ("who", 5), ("album", 1)]).unwrap();
        let bytes = fl.encode();
        assert_eq!(FlList::decode(&bytes, "lexicon.fl").unwrap(), fl);
        let mut bad = bytes.clone();
        bad[14] ^= 1;
        assert!(FlList::decode(&bad, "lexicon.fl").is_err());
    }

    proptest! {
        #[test]
        fn ranks_follow_counts(counts in proptest::collection::hash_map("[a-f]{1,3}", 0u64..20, 1..30)) {
            let fl = FlList::from_counts(counts.clone()).unwrap();
            let mut seen: Vec<u32> = counts.keys().map(|k| fl.id(k).unwrap().0).collect();
            seen.sort_unstable();
            prop_assert_eq!(seen, (0..counts.len() as u32).collect::<Vec<_>>());
            for (a, ca) in &counts {
                for (b, cb) in &counts {
                    if ca > cb {
                        prop_assert!(fl.id(a) < fl.id(b));
                    }
                }
            }
        }

        #[test]
        fn classes_partition_ranks(rank in 0u32..5000, sw in 1u32..1000, fu in 0u32..3000) {
            let c = cfg(sw, fu);
            let class = classify_rank(LemmaId(rank), &c);
            let expected = if rank < sw { LemmaClass::Stop }
                else if rank < sw + fu { LemmaClass::FrequentlyUsed }
                else { LemmaClass::Ordinary };
            prop_assert_eq!(class, expected);
        }
    }
}
