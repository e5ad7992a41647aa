//! Subquery expansion and key selection.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::index::TriKey;
use crate::lexicon::{classify_rank, FlList, LemmaClass, LemmaId, LexiconConfig};
use crate::text::{tokenize, Dictionary};

pub const MAX_QUERY_WORDS: usize = 16;

/// One lemma per query word, in query order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subquery {
    pub lemmas: Vec<LemmaId>,
}

impl Subquery {
    pub fn new(lemmas: Vec<LemmaId>) -> Self {
        Subquery { lemmas }
    }

    pub fn len(&self) -> usize {
        self.lemmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lemmas.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlanComponent {
    pub lemma: LemmaId,
    /// Duplicate mark: the component only narrows the key, its positions are
    /// not fed to the position table.
    pub star: bool,
    /// Query slot the component was chosen for; `None` when starred.
    pub slot: Option<usize>,
    /// Local lemma number within the subquery.
    pub local: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanKey {
    pub key: TriKey,
    /// Components in physical key order.
    pub components: [PlanComponent; 3],
}

impl PlanKey {
    pub fn display<'a>(&'a self, fl: &'a FlList) -> impl fmt::Display + 'a {
        PlanKeyDisplay { key: self, fl }
    }
}

struct PlanKeyDisplay<'a> {
    key: &'a PlanKey,
    fl: &'a FlList,
}

impl fmt::Display for PlanKeyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.key.components.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(self.fl.lemma(c.lemma))?;
            if c.star {
                f.write_str("*")?;
            }
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryPlan {
    pub subquery: Subquery,
    pub keys: Vec<PlanKey>,
    /// Distinct subquery lemmas, indexed by local number.
    pub locals: Vec<LemmaId>,
    /// Required occurrence count per local number.
    pub required: Vec<u32>,
}

impl QueryPlan {
    pub fn local_of(&self, lemma: LemmaId) -> Option<u8> {
        self.locals
            .iter()
            .position(|&l| l == lemma)
            .map(|i| i as u8)
    }
}

/// Tokenizes `query` and expands every word into its stop-lemma
/// alternatives. The Cartesian product is returned in dictionary order with
/// duplicates removed.
pub fn expand_subqueries(
    query: &str,
    dict: &Dictionary,
    fl: &FlList,
    cfg: &LexiconConfig,
) -> Result<Vec<Subquery>> {
    let words = tokenize(query);
    if words.is_empty() {
        return Err(Error::EmptyQuery);
    }
    if words.len() > MAX_QUERY_WORDS {
        return Err(Error::QueryTooLong {
            len: words.len(),
            max: MAX_QUERY_WORDS,
        });
    }
    let mut alternatives: Vec<Vec<LemmaId>> = Vec::with_capacity(words.len());
    for word in &words {
        let mut stops: Vec<LemmaId> = Vec::new();
        for lemma in dict.lemmatize(&word.surface) {
            if let Some(id) = fl.id(lemma) {
                if classify_rank(id, cfg) == LemmaClass::Stop && !stops.contains(&id) {
                    stops.push(id);
                }
            }
        }
        if stops.is_empty() {
            return Err(Error::NotStopOnly {
                word: word.surface.clone(),
            });
        }
        alternatives.push(stops);
    }

    let mut out: Vec<Subquery> = vec![Subquery::new(Vec::new())];
    for alts in &alternatives {
        out = out
            .into_iter()
            .flat_map(|sq| {
                alts.iter().map(move |&l| {
                    let mut lemmas = sq.lemmas.clone();
                    lemmas.push(l);
                    Subquery::new(lemmas)
                })
            })
            .collect();
    }
    let mut seen = HashSet::new();
    out.retain(|sq| seen.insert(sq.clone()));
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
struct Pick {
    slot: usize,
    lemma: LemmaId,
    star: bool,
}

/// Chooses the keys covering a subquery.
///
/// Each key takes the most frequent unused lemma first, then the least
/// frequent unused lemmas at other query slots. A lemma becomes used as soon
/// as it is chosen without a star. A component with no unused candidate falls
/// back to any lemma at another slot (or any slot at all when the subquery is
/// too short) and is starred. Ties go to the lowest slot.
pub fn select_keys(subquery: &Subquery) -> Result<QueryPlan> {
    let slots = &subquery.lemmas;
    match slots.len() {
        0 => return Err(Error::EmptyQuery),
        1 => return Err(Error::SingleLemmaQuery),
        n if n > MAX_QUERY_WORDS => {
            return Err(Error::QueryTooLong {
                len: n,
                max: MAX_QUERY_WORDS,
            })
        }
        _ => {}
    }

    let mut locals: Vec<LemmaId> = slots.clone();
    locals.sort_unstable();
    locals.dedup();
    let required: Vec<u32> = locals
        .iter()
        .map(|l| slots.iter().filter(|s| *s == l).count() as u32)
        .collect();
    let local_of = |l: LemmaId| locals.binary_search(&l).unwrap() as u8;

    // Least frequent = highest FL-number; ties resolved by the lowest slot.
    let least_frequent = |pred: &dyn Fn(usize, LemmaId) -> bool| -> Option<(usize, LemmaId)> {
        slots
            .iter()
            .copied()
            .enumerate()
            .filter(|&(i, l)| pred(i, l))
            .fold(None, |best: Option<(usize, LemmaId)>, (i, l)| match best {
                Some((_, bl)) if bl >= l => best,
                _ => Some((i, l)),
            })
    };

    let mut used: HashSet<LemmaId> = HashSet::new();
    let mut keys = Vec::new();
    while let Some((first_slot, first_lemma)) = slots
        .iter()
        .copied()
        .enumerate()
        .filter(|(_, l)| !used.contains(l))
        .min_by_key(|&(i, l)| (l, i))
    {
        let first = Pick {
            slot: first_slot,
            lemma: first_lemma,
            star: false,
        };
        used.insert(first_lemma);
        let second = match least_frequent(&|i, l| i != first.slot && !used.contains(&l)) {
            Some((slot, lemma)) => Pick {
                slot,
                lemma,
                star: false,
            },
            None => {
                let (slot, lemma) = least_frequent(&|i, _| i != first.slot)
                    .expect("subquery has at least two slots");
                Pick {
                    slot,
                    lemma,
                    star: true,
                }
            }
        };
        if !second.star {
            used.insert(second.lemma);
        }
        let distinct = |i: usize| i != first.slot && i != second.slot;
        let third = if let Some((slot, lemma)) =
            least_frequent(&|i, l| distinct(i) && !used.contains(&l))
        {
            Pick {
                slot,
                lemma,
                star: false,
            }
        } else {
            let (slot, lemma) = least_frequent(&|i, _| distinct(i))
                .or_else(|| least_frequent(&|_, _| true))
                .expect("non-empty subquery");
            Pick {
                slot,
                lemma,
                star: true,
            }
        };

        if !third.star {
            used.insert(third.lemma);
        }
        let mut picks = [first, second, third];
        // Stable: equal lemmas keep their selection order.
        picks.sort_by_key(|p| p.lemma);
        let components = picks.map(|p| PlanComponent {
            lemma: p.lemma,
            star: p.star,
            slot: (!p.star).then_some(p.slot),
            local: local_of(p.lemma),
        });
        keys.push(PlanKey {
            key: TriKey::new(picks[0].lemma, picks[1].lemma, picks[2].lemma),
            components,
        });
    }

    Ok(QueryPlan {
        subquery: subquery.clone(),
        keys,
        locals,
        required,
    })
}
