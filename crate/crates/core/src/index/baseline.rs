//! Reference evaluation over the ordinary positional lists.
//!
//! Documents are merged on all subquery lemmas, their occurrences rebuilt
//! from the lists, and the key postings of the plan recomputed in memory.
//! Fragments are minimal windows over the occurrences those postings expose,
//! so the result matches the key-list evaluation while reading every
//! occurrence of every lemma.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use super::build::{enumerate_tri_postings, Occurrence};
use super::postings::OrdinaryPostingIter;
use super::Index;
use crate::error::Result;
use crate::lexicon::LemmaId;
use crate::search::{
    select_keys, Fragment, LemmaTable, LocalOcc, QueryPlan, Subquery, SubqueryOutput,
};

fn align(iters: &mut [OrdinaryPostingIter<'_>]) -> Result<Option<u32>> {
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

/// Inclusion-minimal windows of span at most `2 * max_distance` over sorted
/// occurrences.
pub(crate) fn minimal_windows(
    doc: u32,
    occs: &[LocalOcc],
    required: &[u32],
    max_distance: u32,
    out: &mut Vec<Fragment>,
) {
    let mut lt = LemmaTable::new(required);
    let mut window: VecDeque<LocalOcc> = VecDeque::new();
    let mut last_front = None;
    for (i, &rec) in occs.iter().enumerate() {
        window.push_back(rec);
        let complete = lt.add(rec.lem);
        if !complete || occs.get(i + 1).is_some_and(|n| n.pos == rec.pos) {
            continue;
        }
        lt.shrink(&mut window);
        let front = window.front().expect("complete window").pos;
        if last_front != Some(front) {
            last_front = Some(front);
            if rec.pos - front <= 2 * max_distance {
                out.push(Fragment {
                    doc,
                    start: front,
                    end: rec.pos,
                });
            }
        }
    }
}

/// Evaluates `plan` from the ordinary lists of its lemmas.
pub fn baseline_plan_search(index: &Index, plan: &QueryPlan) -> Result<SubqueryOutput> {
    let m = index.max_distance();
    let mut iters = plan
        .locals
        .iter()
        .map(|&l| index.open_ordinary_iterator(l))
        .collect::<Result<Vec<_>>>()?;
    let mut fragments = Vec::new();
    let mut occs: Vec<Occurrence> = Vec::new();
    let mut visible: Vec<LocalOcc> = Vec::new();
    while let Some(doc) = align(&mut iters)? {
        occs.clear();
        for it in iters.iter_mut() {
            let lemma = it.lemma();
            while let Some(p) = it.value().filter(|p| p.doc == doc) {
                occs.push(Occurrence { pos: p.pos, lemma });
                it.advance()?;
            }
        }
        occs.sort_unstable();
        let postings = enumerate_tri_postings(doc, &occs, m);
        visible.clear();
        for key in &plan.keys {
            for p in postings.get(&key.key).into_iter().flatten() {
                for (c, &pos) in key.components.iter().zip(&p.positions()) {
                    if !c.star {
                        visible.push(LocalOcc {
                            pos: pos as u32,
                            lem: c.local,
                        });
                    }
                }
            }
        }
        visible.sort_unstable();
        visible.dedup();
        minimal_windows(doc, &visible, &plan.required, m, &mut fragments);
    }
    Ok(SubqueryOutput {
        fragments,
        postings_read: iters.iter().map(|it| it.postings_read()).sum(),
    })
}

/// Evaluates a subquery given as lemmas in query order. A single lemma
/// matches each of its occurrences.
pub fn baseline_positional_search(index: &Index, lemmas: &[LemmaId]) -> Result<SubqueryOutput> {
    if let [lemma] = lemmas {
        let mut it = index.open_ordinary_iterator(*lemma)?;
        let mut fragments = Vec::new();
        while let Some(p) = it.value() {
            fragments.push(Fragment {
                doc: p.doc,
                start: p.pos,
                end: p.pos,
            });
            it.advance()?;
        }
        return Ok(SubqueryOutput {
            fragments,
            postings_read: it.postings_read(),
        });
    }
    let plan = select_keys(&Subquery::new(lemmas.to_vec()))?;
    baseline_plan_search(index, &plan)
}
