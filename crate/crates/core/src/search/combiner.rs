//! Document-at-a-time evaluation of one subquery over its key lists.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use super::lemma_table::{LemmaTable, LocalOcc};
use super::plan::{PlanKey, QueryPlan};
use super::position_table::{PositionTable, MAX_WINDOW};
use super::trace::{TraceEvent, TraceSink};
use super::Fragment;
use crate::error::{Error, Result};
use crate::index::{Index, TriPostingIter};

pub const DEFAULT_WINDOW: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchParams {
    pub window_size: u32,
    /// Overrides the first buffer origin of each Step-3 entry when lower than
    /// the computed one.
    pub seed_start: Option<u32>,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            window_size: DEFAULT_WINDOW,
            seed_start: None,
        }
    }
}

impl SearchParams {
    pub fn validate(&self, max_distance: u32) -> Result<()> {
        if self.window_size < 2 * max_distance || self.window_size > MAX_WINDOW {
            return Err(Error::Config(format!(
                "window size {} outside [{}, {MAX_WINDOW}]",
                self.window_size,
                2 * max_distance
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SubqueryOutput {
    pub fragments: Vec<Fragment>,
    pub postings_read: u64,
}

/// Moves the iterators to the next document all of them contain.
pub fn align_documents(iters: &mut [TriPostingIter<'_>]) -> Result<Option<u32>> {
    let mut heap = BinaryHeap::with_capacity(iters.len());
    let mut max = 0;
    for (i, it) in iters.iter().enumerate() {
        let Some(p) = it.value() else { return Ok(None) };
        max = max.max(p.doc);
        heap.push(Reverse((p.doc, i)));
    }
    while let Some(&Reverse((doc, i))) = heap.peek() {
        if doc == max {
            return Ok(Some(doc));
        }
        heap.pop();
        iters[i].advance()?;
        let Some(p) = iters[i].value() else {
            return Ok(None);
        };
        max = max.max(p.doc);
        heap.push(Reverse((p.doc, i)));
    }
    Ok(None)
}

/// Moves the iterators within `doc` until their anchors lie within `gate`
/// of each other. Returns false once any iterator leaves the document.
pub fn align_positions(iters: &mut [TriPostingIter<'_>], doc: u32, gate: u32) -> Result<bool> {
    let mut heap = BinaryHeap::with_capacity(iters.len());
    let mut max = 0;
    for (i, it) in iters.iter().enumerate() {
        match it.value() {
            Some(p) if p.doc == doc => {
                max = max.max(p.pos);
                heap.push(Reverse((p.pos, i)));
            }
            _ => return Ok(false),
        }
    }
    while let Some(&Reverse((pos, i))) = heap.peek() {
        if max - pos <= gate {
            return Ok(true);
        }
        heap.pop();
        iters[i].advance()?;
        match iters[i].value() {
            Some(p) if p.doc == doc => {
                max = max.max(p.pos);
                heap.push(Reverse((p.pos, i)));
            }
            _ => return Ok(false),
        }
    }
    Ok(false)
}

struct Step3<'p> {
    keys: &'p [PlanKey],
    plan: &'p QueryPlan,
    m: u32,
    window: u32,
    pt: PositionTable,
    lt: LemmaTable,
    processed: VecDeque<LocalOcc>,
    source: Vec<LocalOcc>,
    last_front: Option<u32>,
}

impl Step3<'_> {
    fn fill<S: TraceSink>(
        &mut self,
        iters: &mut [TriPostingIter<'_>],
        doc: u32,
        sink: &mut S,
    ) -> Result<()> {
        let border = self.pt.start() + 3 * self.window / 2;
        for (key, it) in self.keys.iter().zip(iters.iter_mut()) {
            while let Some(p) = it.value() {
                if p.doc != doc || p.pos >= border {
                    break;
                }
                if !p.is_valid(self.m) {
                    return Err(Error::Format {
                        file: "trikey.idx".to_string(),
                        reason: format!("invalid posting {p}"),
                    });
                }
                let positions = p.positions().map(|x| x as u32);
                if sink.enabled() {
                    sink.record(TraceEvent::ReadPosting {
                        positions,
                        key: key.components.map(|c| (c.lemma, c.star)),
                    });
                }
                for (c, &pos) in key.components.iter().zip(&positions) {
                    if c.star {
                        continue;
                    }
                    let buffer = self.pt.set(pos, c.local);
                    if sink.enabled() {
                        sink.record(TraceEvent::Set {
                            pos,
                            lemma: c.lemma,
                            buffer,
                        });
                    }
                }
                it.advance()?;
            }
        }
        Ok(())
    }

    fn drain<S: TraceSink>(&mut self, doc: u32, out: &mut Vec<Fragment>, sink: &mut S) {
        self.pt.drain_first(&mut self.source);
        if sink.enabled() {
            sink.record(TraceEvent::PopulateSource);
        }
        for i in 0..self.source.len() {
            let rec = self.source[i];
            let lemma = self.plan.locals[rec.lem as usize];
            if sink.enabled() {
                sink.record(TraceEvent::Fetch {
                    pos: rec.pos,
                    lemma,
                });
            }
            self.processed.push_back(rec);
            let complete = self.lt.add(rec.lem);
            if sink.enabled() {
                sink.record(TraceEvent::Add { lemma, complete });
            }
            // Occurrences sharing a position are consumed together.
            let last_at_pos = self.source.get(i + 1).is_none_or(|n| n.pos != rec.pos);
            if complete && last_at_pos {
                self.lt.shrink(&mut self.processed);
                let front = self.processed.front().expect("complete window").pos;
                // A repeated front means a shorter fragment already ended here.
                if self.last_front != Some(front) {
                    self.last_front = Some(front);
                    if rec.pos - front <= 2 * self.m {
                        out.push(Fragment {
                            doc,
                            start: front,
                            end: rec.pos,
                        });
                        if sink.enabled() {
                            sink.record(TraceEvent::Result {
                                start: front,
                                end: rec.pos,
                            });
                        }
                    }
                }
            }
        }
        debug_assert!(self.lt.is_consistent());
    }

    fn switch<S: TraceSink>(&mut self, sink: &mut S) {
        let limit = self.pt.start() + self.window;
        while let Some(&front) = self.processed.front() {
            if limit - front.pos <= 2 * self.m {
                break;
            }
            self.processed.pop_front();
            self.lt.remove(front.lem);
        }
        self.pt.switch();
        if sink.enabled() {
            sink.record(TraceEvent::BufferSwitch {
                start: self.pt.start(),
            });
        }
    }

    fn reset(&mut self, start: u32) {
        self.pt.shift(start);
        self.lt.reset();
        self.processed.clear();
        self.last_front = None;
    }
}

/// Evaluates one subquery plan. Fragments come out sorted.
pub fn search_subquery<S: TraceSink>(
    plan: &QueryPlan,
    index: &Index,
    params: &SearchParams,
    sink: &mut S,
) -> Result<SubqueryOutput> {
    let m = index.max_distance();
    params.validate(m)?;
    let mut iters = plan
        .keys
        .iter()
        .map(|k| index.open_tri_iterator(k.key))
        .collect::<Result<Vec<_>>>()?;
    let mut fragments = Vec::new();
    if iters.is_empty() {
        return Ok(SubqueryOutput::default());
    }

    let mut state = Step3 {
        keys: &plan.keys,
        plan,
        m,
        window: params.window_size,
        pt: PositionTable::new(params.window_size),
        lt: LemmaTable::new(&plan.required),
        processed: VecDeque::new(),
        source: Vec::new(),
        last_front: None,
    };

    while let Some(doc) = align_documents(&mut iters)? {
        while align_positions(&mut iters, doc, 4 * m)? {
            let min = iters
                .iter()
                .filter_map(|it| it.value())
                .map(|p| p.pos)
                .min()
                .expect("aligned iterators");
            let mut start = min - min.min(m);
            if let Some(seed) = params.seed_start {
                start = start.min(seed);
            }
            state.reset(start);
            if sink.enabled() {
                sink.record(TraceEvent::Shift { start });
            }
            loop {
                state.fill(&mut iters, doc, sink)?;
                state.drain(doc, &mut fragments, sink);
                state.switch(sink);
                if state.pt.is_empty()
                    && (state.processed.is_empty()
                        || iters
                            .iter()
                            .all(|it| it.value().is_none_or(|p| p.doc != doc)))
                {
                    break;
                }
            }
        }
    }

    fragments.sort_unstable();
    fragments.dedup();
    Ok(SubqueryOutput {
        fragments,
        postings_read: iters.iter().map(|it| it.postings_read()).sum(),
    })
}
