//! Per-lemma occurrence accounting for the sliding fragment window.

use std::collections::VecDeque;

/// An occurrence of a subquery lemma, by local lemma number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LocalOcc {
    pub pos: u32,
    pub lem: u8,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Entry {
    max: u32,
    count: u32,
}

#[derive(Debug, Clone)]
pub struct LemmaTable {
    entries: Vec<Entry>,
    max: u32,
    count: u32,
}

impl LemmaTable {
    /// `required[l]` is the multiplicity of local lemma `l` in the subquery.
    pub fn new(required: &[u32]) -> Self {
        LemmaTable {
            entries: required
                .iter()
                .map(|&max| Entry { max, count: 0 })
                .collect(),
            max: required.iter().sum(),
            count: 0,
        }
    }

    pub fn reset(&mut self) {
        for e in &mut self.entries {
            e.count = 0;
        }
        self.count = 0;
    }

    /// Credits one occurrence. Returns whether every slot is now covered.
    pub fn add(&mut self, lem: u8) -> bool {
        let e = &mut self.entries[lem as usize];
        if e.count < e.max {
            self.count += 1;
        }
        e.count += 1;
        self.is_complete()
    }

    /// Reverses one earlier [`add`](Self::add).
    pub fn remove(&mut self, lem: u8) {
        let e = &mut self.entries[lem as usize];
        debug_assert!(e.count > 0);
        e.count -= 1;
        if e.count < e.max {
            self.count -= 1;
        }
    }

    pub fn is_complete(&self) -> bool {
        self.count == self.max
    }

    fn is_surplus(&self, lem: u8) -> bool {
        let e = self.entries[lem as usize];
        e.count > e.max
    }

    /// Drops front records whose lemma stays covered without them.
    pub fn shrink(&mut self, processed: &mut VecDeque<LocalOcc>) {
        while let Some(&front) = processed.front() {
            if !self.is_surplus(front.lem) {
                break;
            }
            self.entries[front.lem as usize].count -= 1;
            processed.pop_front();
        }
    }

    /// Table count equals the sum of per-entry credited counts.
    pub fn is_consistent(&self) -> bool {
        let credited: u32 = self.entries.iter().map(|e| e.count.min(e.max)).sum();
        credited == self.count && self.entries.iter().map(|e| e.max).sum::<u32>() == self.max
    }
}
