//! Query evaluation: subquery expansion, key selection and the windowed
//! combiner over three-component key lists.

pub mod combiner;
pub mod lemma_table;
pub mod plan;
pub mod position_table;
pub mod trace;

use std::collections::BTreeMap;

pub use combiner::{
    align_documents, align_positions, search_subquery, SearchParams, SubqueryOutput,
};
pub use lemma_table::{LemmaTable, LocalOcc};
pub use plan::{expand_subqueries, select_keys, PlanComponent, PlanKey, QueryPlan, Subquery};
pub use position_table::PositionTable;
pub use trace::{TraceEvent, TraceSink};

use crate::error::Result;
use crate::index::{baseline, Index};
use crate::text::Dictionary;

/// A matched text span, both ends inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fragment {
    pub doc: u32,
    pub start: u32,
    pub end: u32,
}

impl Fragment {
    pub fn span(&self) -> u32 {
        self.end - self.start
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DocResult {
    pub doc: u32,
    pub score: f64,
    pub fragments: Vec<Fragment>,
}

pub trait Relevance {
    fn score(&self, fragments: &[Fragment]) -> f64;
}

/// Sum of `1 / (1 + span)^2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct InverseSquareSpan;

impl Relevance for InverseSquareSpan {
    fn score(&self, fragments: &[Fragment]) -> f64 {
        fragments
            .iter()
            .map(|f| {
                let d = 1.0 + f64::from(f.span());
                1.0 / (d * d)
            })
            .sum()
    }
}

pub fn score(fragments: &[Fragment]) -> f64 {
    InverseSquareSpan.score(fragments)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    TriKey,
    Baseline,
}

#[derive(Debug, Clone, Default)]
pub struct SearchOutput {
    pub results: Vec<DocResult>,
    pub postings_read: u64,
    pub subqueries: usize,
}

/// Evaluates every subquery of `query` and ranks documents by fragment score.
pub fn search<S: TraceSink>(
    query: &str,
    index: &Index,
    dict: &Dictionary,
    params: &SearchParams,
    strategy: Strategy,
    sink: &mut S,
) -> Result<SearchOutput> {
    search_with(
        query,
        index,
        dict,
        params,
        strategy,
        &InverseSquareSpan,
        sink,
    )
}

pub fn search_with<S: TraceSink, R: Relevance>(
    query: &str,
    index: &Index,
    dict: &Dictionary,
    params: &SearchParams,
    strategy: Strategy,
    relevance: &R,
    sink: &mut S,
) -> Result<SearchOutput> {
    let cfg = index.meta.lexicon_config();
    params.validate(cfg.max_distance)?;
    let subqueries = expand_subqueries(query, dict, &index.lexicon, &cfg)?;
    let mut fragments = Vec::new();
    let mut postings_read = 0;
    for sq in &subqueries {
        let plan = select_keys(sq)?;
        let out = match strategy {
            Strategy::TriKey => search_subquery(&plan, index, params, sink)?,
            Strategy::Baseline => baseline::baseline_plan_search(index, &plan)?,
        };
        postings_read += out.postings_read;
        fragments.extend(out.fragments);
    }
    fragments.sort_unstable();
    fragments.dedup();

    let mut by_doc: BTreeMap<u32, Vec<Fragment>> = BTreeMap::new();
    for f in fragments {
        by_doc.entry(f.doc).or_default().push(f);
    }
    let mut results: Vec<DocResult> = by_doc
        .into_iter()
        .map(|(doc, fragments)| DocResult {
            doc,
            score: relevance.score(&fragments),
            fragments,
        })
        .collect();
    results.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.doc.cmp(&b.doc)));
    Ok(SearchOutput {
        results,
        postings_read,
        subqueries: subqueries.len(),
    })
}
