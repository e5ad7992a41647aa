use proxikey::index::baseline::baseline_plan_search;
use proxikey::index::{build_analyzed, AnalyzedDoc, Occurrence};
use proxikey::oracle::oracle_fragments;
use proxikey::search::{search_subquery, select_keys, Fragment, SearchParams, Subquery};
use proxikey::{FlList, LemmaId, LexiconConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lexicon(n: u32) -> FlList {
    FlList::from_counts((0..n).map(|i| (format!("w{i:03}"), u64::from(10_000 - i)))).unwrap()
}

fn random_corpus(rng: &mut ChaCha8Rng, vocab: u32, docs: usize) -> Vec<AnalyzedDoc> {
    (0..docs)
        .map(|d| {
            let len = rng.random_range(0..120u32);
            let mut occurrences = Vec::new();
            for pos in 0..len {
                // Skewed towards low ids.
                let a: u32 = rng.random_range(0..vocab);
                let lemma = rng.random_range(0..=a);
                occurrences.push(Occurrence {
                    pos,
                    lemma: LemmaId(lemma),
                });
                if rng.random_bool(0.08) {
                    let other = rng.random_range(0..vocab);
                    if other != lemma {
                        occurrences.push(Occurrence {
                            pos,
                            lemma: LemmaId(other),
                        });
                    }
                }
            }
            occurrences.sort_unstable();
            AnalyzedDoc {
                name: format!("d{d}"),
                tokens: len,
                occurrences,
            }
        })
        .collect()
}

#[test]
fn engine_matches_oracle_and_baseline() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for round in 0..12 {
        let vocab = rng.random_range(4..14);
        let m = [3, 5, 7][round % 3];
        let cfg = LexiconConfig {
            sw_count: vocab,
            fu_count: 10,
            max_distance: m,
        };
        let docs = random_corpus(&mut rng, vocab, 15);
        let index = build_analyzed(&docs, lexicon(vocab), &cfg).unwrap();
        for _ in 0..15 {
            let len = rng.random_range(2..=6);
            let lemmas: Vec<LemmaId> = (0..len)
                .map(|_| LemmaId(rng.random_range(0..vocab)))
                .collect();
            let plan = select_keys(&Subquery::new(lemmas.clone())).unwrap();
            let mut expected: Vec<Fragment> = Vec::new();
            for (i, d) in docs.iter().enumerate() {
                expected.extend(oracle_fragments(i as u32, &d.occurrences, &plan, &cfg));
            }
            let base = baseline_plan_search(&index, &plan).unwrap();
            assert_eq!(
                base.fragments, expected,
                "baseline, lemmas {lemmas:?} m {m}"
            );
            for w in [2 * m, 2 * m + 1, 32, 64] {
                let params = SearchParams {
                    window_size: w,
                    seed_start: None,
                };
                let out = search_subquery(&plan, &index, &params, &mut ()).unwrap();
                assert_eq!(
                    out.fragments, expected,
                    "engine W={w}, lemmas {lemmas:?} m {m}"
                );
            }
            checked += expected.len();
        }
    }
    assert!(checked > 100, "too few fragments exercised: {checked}");
}
