//! Brute-force reference implementations used by tests and `verify`.
//!
//! Nothing here shares code with the index builder or the combiner.

use std::collections::{BTreeMap, BTreeSet};

use crate::index::{Occurrence, Posting, TriKey};
use crate::lexicon::{LemmaId, LexiconConfig};
use crate::search::{Fragment, QueryPlan};

/// Every key posting of every document, by exhaustive triple enumeration.
/// `docs[i]` holds document `i`'s occurrences in any order; non-stop lemmas
/// are ignored.
pub fn oracle_tri_postings(
    docs: &[Vec<Occurrence>],
    cfg: &LexiconConfig,
) -> BTreeMap<TriKey, Vec<Posting>> {
    let m = i64::from(cfg.max_distance);
    let mut out: BTreeMap<TriKey, BTreeSet<Posting>> = BTreeMap::new();
    for (doc, occs) in docs.iter().enumerate() {
        let stops: Vec<(i64, LemmaId)> = occs
            .iter()
            .filter(|o| o.lemma.0 < cfg.sw_count)
            .map(|o| (i64::from(o.pos), o.lemma))
            .collect();
        for &(pi, li) in &stops {
            for &(pj, lj) in &stops {
                if pj == pi || (pj - pi).abs() > m || lj < li || (lj == li && pj < pi) {
                    continue;
                }
                for &(pk, lk) in &stops {
                    if pk == pi || pk == pj || (pk - pi).abs() > m || lk < lj {
                        continue;
                    }
                    if lk == lj && pk < pj {
                        continue;
                    }
                    out.entry(TriKey {
                        f: li,
                        s: lj,
                        t: lk,
                    })
                    .or_default()
                    .insert(Posting {
                        doc: doc as u32,
                        pos: pi as u32,
                        d1: (pj - pi) as i32,
                        d2: (pk - pi) as i32,
                    });
                }
            }
        }
    }
    out.into_iter()
        .map(|(k, v)| (k, v.into_iter().collect()))
        .collect()
}

/// Occurrences of `doc` exposed through the non-starred components of the
/// plan's keys, as sorted `(position, lemma)` pairs.
pub fn oracle_visible_occurrences(
    doc: &[Occurrence],
    plan: &QueryPlan,
    cfg: &LexiconConfig,
) -> Vec<(u32, LemmaId)> {
    let relevant: Vec<Occurrence> = doc
        .iter()
        .copied()
        .filter(|o| plan.locals.contains(&o.lemma))
        .collect();
    let postings = oracle_tri_postings(&[relevant], cfg);
    let mut out = BTreeSet::new();
    for key in &plan.keys {
        let Some(list) = postings.get(&key.key) else {
            continue;
        };
        for p in list {
            let pos = [
                i64::from(p.pos),
                i64::from(p.pos) + i64::from(p.d1),
                i64::from(p.pos) + i64::from(p.d2),
            ];
            for (c, &at) in key.components.iter().zip(&pos) {
                if !c.star {
                    out.insert((at as u32, c.lemma));
                }
            }
        }
    }
    out.into_iter().collect()
}

fn covers(occs: &[(u32, LemmaId)], from: u32, to: u32, plan: &QueryPlan) -> bool {
    plan.locals.iter().zip(&plan.required).all(|(&l, &need)| {
        occs.iter()
            .filter(|&&(p, x)| x == l && p >= from && p <= to)
            .count() as u32
            >= need
    })
}

/// Minimal fragments of document `doc_id` by direct window checks: for each
/// end position the latest covering start, kept when the window is not
/// covered without its last position and spans at most `2M`.
pub fn oracle_fragments(
    doc_id: u32,
    doc: &[Occurrence],
    plan: &QueryPlan,
    cfg: &LexiconConfig,
) -> Vec<Fragment> {
    let visible = oracle_visible_occurrences(doc, plan, cfg);
    let positions: Vec<u32> = visible
        .iter()
        .map(|&(p, _)| p)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let limit = 2 * cfg.max_distance;
    let mut out = Vec::new();
    for (ei, &end) in positions.iter().enumerate() {
        let Some(&start) = positions[..=ei]
            .iter()
            .rev()
            .take_while(|&&s| end - s <= limit)
            .find(|&&s| covers(&visible, s, end, plan))
        else {
            continue;
        };
        let shorter = ei > 0 && covers(&visible, start, positions[ei - 1], plan);
        if !shorter {
            out.push(Fragment {
                doc: doc_id,
                start,
                end,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{select_keys, Subquery};

    fn occ(list: &[(u32, u32)]) -> Vec<Occurrence> {
        list.iter()
            .map(|&(pos, l)| Occurrence {
                pos,
                lemma: LemmaId(l),
            })
            .collect()
    }

    fn cfg(m: u32) -> LexiconConfig {
        LexiconConfig {
            max_distance: m,
            ..LexiconConfig::default()
        }
    }

    #[test]
    fn triple_rules() {
        // "who(1) has reality who is(0) real who is(0) true"
        let doc = occ(&[(0, 1), (3, 1), (4, 0), (6, 1), (7, 0)]);
        let all = oracle_tri_postings(&[doc], &cfg(5));
        let key = TriKey {
            f: LemmaId(0),
            s: LemmaId(1),
            t: LemmaId(1),
        };
        assert_eq!(
            all[&key],
            vec![
                Posting::new(0, 4, -4, -1),
                Posting::new(0, 4, -4, 2),
                Posting::new(0, 4, -1, 2),
                Posting::new(0, 7, -4, -1),
            ]
        );
    }

    #[test]
    fn fragments_of_small_doc() {
        // a=0 b=1: "a x b a" with M=3; plan (a, b, b*)
        let doc = occ(&[(0, 0), (2, 1), (3, 0)]);
        let plan = select_keys(&Subquery::new(vec![LemmaId(0), LemmaId(1)])).unwrap();
        let frags = oracle_fragments(7, &doc, &plan, &cfg(3));
        let spans: Vec<(u32, u32)> = frags.iter().map(|f| (f.start, f.end)).collect();
        // Key (a, b, b) needs two b occurrences; none qualify.
        assert!(spans.is_empty());
        let doc = occ(&[(0, 0), (2, 1), (3, 0), (4, 1)]);
        let frags = oracle_fragments(7, &doc, &plan, &cfg(3));
        let spans: Vec<(u32, u32)> = frags.iter().map(|f| (f.start, f.end)).collect();
        // Only the anchor at 3 reaches two b occurrences; the later one is starred.
        assert_eq!(spans, vec![(2, 3)]);
    }
}
