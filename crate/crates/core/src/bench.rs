//! Seeded synthetic benchmark comparing key-list and positional evaluation.

use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zipf};

use crate::corpus::build_corpus;
use crate::error::{Error, Result};
use crate::index::{Document, Index};
use crate::lexicon::LexiconConfig;
use crate::search::{search, SearchParams, Strategy};
use crate::text::Dictionary;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub docs: usize,
    pub vocab: u32,
    pub zipf_exponent: f64,
    pub min_doc_len: u32,
    pub max_doc_len: u32,
    pub queries: usize,
    pub min_query_len: usize,
    pub max_query_len: usize,
    pub seed: u64,
    pub lexicon: LexiconConfig,
    pub window_size: u32,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            docs: 10_000,
            vocab: 5_000,
            zipf_exponent: 1.0,
            min_doc_len: 50,
            max_doc_len: 100,
            queries: 100,
            min_query_len: 3,
            max_query_len: 5,
            seed: 42,
            lexicon: LexiconConfig::default(),
            window_size: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StrategyStats {
    pub mean_postings_read: f64,
    pub mean_micros: f64,
    pub fragments: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub tokens: u64,
    pub trikeys: usize,
    pub queries: Vec<String>,
    pub trikey: StrategyStats,
    pub baseline: StrategyStats,
    /// Queries whose fragment sets differ between the two strategies.
    pub mismatches: usize,
}

impl BenchReport {
    /// Baseline over key-list mean postings read; `None` without queries.
    pub fn reduction_factor(&self) -> Option<f64> {
        if self.queries.is_empty() {
            return None;
        }
        Some(self.baseline.mean_postings_read / self.trikey.mean_postings_read.max(1.0))
    }

    /// Stable table; only the `mean_time_us` column depends on the machine.
    pub fn render(&self) -> String {
        let c = &self.config;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "profile docs={} vocab={} zipf={} doc_len={}..{} queries={} query_len={}..{} seed={} max_distance={} sw_count={} window={}",
            c.docs,
            c.vocab,
            c.zipf_exponent,
            c.min_doc_len,
            c.max_doc_len,
            c.queries,
            c.min_query_len,
            c.max_query_len,
            c.seed,
            c.lexicon.max_distance,
            c.lexicon.sw_count,
            c.window_size
        );
        let _ = writeln!(s, "corpus tokens={} trikeys={}", self.tokens, self.trikeys);
        let _ = writeln!(
            s,
            "{:<10} {:>20} {:>14} {:>10}",
            "strategy", "mean_postings_read", "mean_time_us", "fragments"
        );
        if let Some(factor) = self.reduction_factor() {
            for (name, st) in [("trikey", &self.trikey), ("baseline", &self.baseline)] {
                let _ = writeln!(
                    s,
                    "{:<10} {:>20.1} {:>14.1} {:>10}",
                    name, st.mean_postings_read, st.mean_micros, st.fragments
                );
            }
            let _ = writeln!(s, "reduction_factor={factor:.2}");
            let _ = writeln!(s, "mismatches={}", self.mismatches);
        }
        s
    }
}

/// Documents of Zipf-distributed words `w<rank>`.
pub fn generate_corpus(cfg: &BenchConfig) -> Result<Vec<Document>> {
    if cfg.vocab == 0 || cfg.min_doc_len > cfg.max_doc_len {
        return Err(Error::Config(
            "empty vocabulary or document length range".into(),
        ));
    }
    let zipf = Zipf::new(f64::from(cfg.vocab), cfg.zipf_exponent)
        .map_err(|e| Error::Config(format!("zipf: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut docs = Vec::with_capacity(cfg.docs);
    for d in 0..cfg.docs {
        let len = rng.random_range(cfg.min_doc_len..=cfg.max_doc_len);
        let mut text = String::with_capacity(len as usize * 6);
        for i in 0..len {
            if i > 0 {
                text.push(' ');
            }
            let rank = zipf.sample(&mut rng) as u32 - 1;
            let _ = write!(text, "w{rank}");
        }
        docs.push(Document::new(format!("doc{d:06}"), text));
    }
    Ok(docs)
}

/// Stop-only queries copied from the corpus: runs of consecutive stop words
/// (other words skipped) starting at a random token, so every query matches
/// at least one document.
pub fn sample_queries(cfg: &BenchConfig, docs: &[Document], index: &Index) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let is_stop = |w: &str| {
        index
            .lexicon
            .id(w)
            .is_some_and(|id| id.0 < cfg.lexicon.sw_count)
    };
    let mut out = Vec::with_capacity(cfg.queries);
    let mut attempts = 0;
    while out.len() < cfg.queries && attempts < cfg.queries * 100 {
        attempts += 1;
        let len = rng.random_range(cfg.min_query_len..=cfg.max_query_len);
        let doc = &docs[rng.random_range(0..docs.len())];
        let words: Vec<&str> = doc.text.split(' ').collect();
        let from = rng.random_range(0..words.len());
        let picked: Vec<&str> = words[from..]
            .iter()
            .copied()
            .filter(|w| is_stop(w))
            .take(len)
            .collect();
        if picked.len() == len {
            out.push(picked.join(" "));
        }
    }
    out
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    let docs = generate_corpus(cfg)?;
    let dict = Dictionary::new();
    let index = build_corpus(&docs, &dict, &cfg.lexicon, &Default::default())?;
    let queries = if docs.is_empty() {
        Vec::new()
    } else {
        sample_queries(cfg, &docs, &index)
    };
    drop(docs);
    let params = SearchParams {
        window_size: cfg.window_size,
        seed_start: None,
    };

    let mut trikey = StrategyStats::default();
    let mut baseline = StrategyStats::default();
    let mut mismatches = 0;
    for q in &queries {
        let t = Instant::now();
        let a = search(q, &index, &dict, &params, Strategy::TriKey, &mut ())?;
        trikey.mean_micros += t.elapsed().as_secs_f64() * 1e6;
        let t = Instant::now();
        let b = search(q, &index, &dict, &params, Strategy::Baseline, &mut ())?;
        baseline.mean_micros += t.elapsed().as_secs_f64() * 1e6;

        trikey.mean_postings_read += a.postings_read as f64;
        baseline.mean_postings_read += b.postings_read as f64;
        let count = |r: &[crate::search::DocResult]| {
            r.iter().map(|d| d.fragments.len() as u64).sum::<u64>()
        };
        trikey.fragments += count(&a.results);
        baseline.fragments += count(&b.results);
        let frags = |r: &[crate::search::DocResult]| {
            r.iter()
                .flat_map(|d| d.fragments.iter().copied())
                .collect::<std::collections::BTreeSet<_>>()
        };
        if frags(&a.results) != frags(&b.results) {
            mismatches += 1;
        }
    }
    if !queries.is_empty() {
        let n = queries.len() as f64;
        for st in [&mut trikey, &mut baseline] {
            st.mean_micros /= n;
            st.mean_postings_read /= n;
        }
    }
    Ok(BenchReport {
        config: cfg.clone(),
        tokens: index.meta.total_tokens(),
        trikeys: index.catalog().len(),
        queries,
        trikey,
        baseline,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> BenchConfig {
        BenchConfig {
            docs: 60,
            vocab: 80,
            queries: 8,
            lexicon: LexiconConfig {
                sw_count: 30,
                ..LexiconConfig::default()
            },
            ..BenchConfig::default()
        }
    }

    #[test]
    fn deterministic_except_timing() {
        let a = run_bench(&small()).unwrap();
        let b = run_bench(&small()).unwrap();
        assert_eq!(a.queries, b.queries);
        assert_eq!(a.trikey.mean_postings_read, b.trikey.mean_postings_read);
        assert_eq!(a.baseline.mean_postings_read, b.baseline.mean_postings_read);
        assert_eq!(a.mismatches, 0);
        assert!(a.reduction_factor().is_some());
    }

    #[test]
    fn no_queries_no_rows() {
        let cfg = BenchConfig {
            queries: 0,
            ..small()
        };
        let report = run_bench(&cfg).unwrap();
        assert!(report.reduction_factor().is_none());
        let text = report.render();
        assert_eq!(text.lines().count(), 3);
        assert!(!text.contains("trikey "));
    }
}
