//! Randomized cross-checks of the combiner against the oracle and the
//! positional baseline.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zipf};
use rayon::prelude::*;

use crate::corpus::build_corpus;
use crate::error::Result;
use crate::index::{analyze_document, baseline::baseline_plan_search, Document, Index, Occurrence};
use crate::lexicon::{LemmaId, LexiconConfig};
use crate::oracle::oracle_fragments;
use crate::search::{search_subquery, select_keys, Fragment, QueryPlan, SearchParams, Subquery};
use crate::text::Dictionary;

/// Window sizes exercised for a given maximum distance.
pub fn window_sweep(max_distance: u32) -> Vec<u32> {
    let mut w = vec![2 * max_distance, 2 * max_distance + 1, 32, 64];
    w.retain(|&x| x >= 2 * max_distance && x <= 64);
    w.sort_unstable();
    w.dedup();
    w
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CaseOutcome {
    pub label: String,
    pub oracle_fragments: usize,
    /// Every swept window size reproduced the oracle.
    pub matches_oracle: bool,
    /// All swept window sizes produced the same fragments.
    pub window_invariant: bool,
    pub matches_baseline: bool,
    pub postings_trikey: u64,
    pub postings_baseline: u64,
}

/// Runs one plan through the oracle, the combiner at every swept window
/// size, and the baseline.
pub fn check_plan(
    index: &Index,
    docs: &[Vec<Occurrence>],
    plan: &QueryPlan,
    label: String,
) -> Result<CaseOutcome> {
    let cfg = index.meta.lexicon_config();
    let expected: Vec<Fragment> = docs
        .iter()
        .enumerate()
        .flat_map(|(i, d)| oracle_fragments(i as u32, d, plan, &cfg))
        .collect();
    let mut runs = Vec::new();
    let mut postings_trikey = 0;
    for w in window_sweep(cfg.max_distance) {
        let params = SearchParams {
            window_size: w,
            seed_start: None,
        };
        let out = search_subquery(plan, index, &params, &mut ())?;
        postings_trikey = out.postings_read;
        runs.push(out.fragments);
    }
    let base = baseline_plan_search(index, plan)?;
    Ok(CaseOutcome {
        label,
        oracle_fragments: expected.len(),
        matches_oracle: runs.iter().all(|r| *r == expected),
        window_invariant: runs.windows(2).all(|p| p[0] == p[1]),
        matches_baseline: runs.first().is_some_and(|r| *r == base.fragments),
        postings_trikey,
        postings_baseline: base.postings_read,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomCheckConfig {
    pub corpora: usize,
    pub queries_per_corpus: usize,
    pub max_vocab: u32,
    pub max_docs: usize,
    pub max_doc_len: u32,
    pub seed: u64,
}

impl Default for RandomCheckConfig {
    fn default() -> Self {
        RandomCheckConfig {
            corpora: 50,
            queries_per_corpus: 20,
            max_vocab: 50,
            max_docs: 40,
            max_doc_len: 300,
            seed: 1,
        }
    }
}

struct RandomCorpus {
    docs: Vec<Document>,
    dict: Dictionary,
    cfg: LexiconConfig,
}

fn random_corpus(rng: &mut ChaCha8Rng, rc: &RandomCheckConfig, corpus: usize) -> RandomCorpus {
    let vocab = rng.random_range(4..=rc.max_vocab.max(4));
    let exponent = rng.random_range(0.6..1.4);
    let zipf = Zipf::new(f64::from(vocab), exponent).expect("valid zipf parameters");
    // A few homographs: surface "h<k>" carries two lemmas.
    let mut dict = Dictionary::new();
    let homographs = rng.random_range(0..=3u32);
    for k in 0..homographs {
        let a = rng.random_range(0..vocab);
        let b = rng.random_range(0..vocab);
        dict.insert(&format!("h{k}"), [format!("w{a}"), format!("w{b}")]);
    }
    let ndocs = rng.random_range(1..=rc.max_docs.max(1));
    let docs = (0..ndocs)
        .map(|d| {
            let len = rng.random_range(0..=rc.max_doc_len);
            let words: Vec<String> = (0..len)
                .map(|_| {
                    if homographs > 0 && rng.random_bool(0.05) {
                        format!("h{}", rng.random_range(0..homographs))
                    } else {
                        format!("w{}", zipf.sample(rng) as u32 - 1)
                    }
                })
                .collect();
            Document::new(format!("c{corpus}d{d}"), words.join(" "))
        })
        .collect();
    let max_distance = [3, 5, 7][rng.random_range(0..3)];
    let cfg = LexiconConfig {
        sw_count: rng.random_range(vocab / 2..=vocab).max(2),
        fu_count: vocab,
        max_distance,
    };
    RandomCorpus { docs, dict, cfg }
}

/// Generates seeded random corpora and subqueries and checks each case.
pub fn random_check(rc: &RandomCheckConfig) -> Result<Vec<CaseOutcome>> {
    let per_corpus: Vec<Result<Vec<CaseOutcome>>> = (0..rc.corpora)
        .into_par_iter()
        .map(|c| {
            let mut rng =
                ChaCha8Rng::seed_from_u64(rc.seed.wrapping_mul(1_000_003).wrapping_add(c as u64));
            let RandomCorpus { docs, dict, cfg } = random_corpus(&mut rng, rc, c);
            let index = build_corpus(&docs, &dict, &cfg, &Default::default())?;
            let analyzed: Vec<Vec<Occurrence>> = docs
                .iter()
                .map(|d| analyze_document(d, &dict, &index.lexicon).map(|a| a.occurrences))
                .collect::<Result<_>>()?;
            let stops = cfg.sw_count.min(index.lexicon.len() as u32);
            let mut out = Vec::with_capacity(rc.queries_per_corpus);
            for q in 0..rc.queries_per_corpus {
                let len = rng.random_range(2..=6);
                // Favour frequent lemmas so that most cases have matches.
                let lemmas: Vec<LemmaId> = (0..len)
                    .map(|_| {
                        let hi = rng.random_range(1..=stops);
                        LemmaId(rng.random_range(0..hi))
                    })
                    .collect();
                let plan = select_keys(&Subquery::new(lemmas.clone()))?;
                let label = format!(
                    "corpus {c} query {q} M={} lemmas {:?}",
                    cfg.max_distance,
                    lemmas
                        .iter()
                        .map(|l| index.lexicon.lemma(*l))
                        .collect::<Vec<_>>()
                );
                out.push(check_plan(&index, &analyzed, &plan, label)?);
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for r in per_corpus {
        all.extend(r?);
    }
    Ok(all)
}
