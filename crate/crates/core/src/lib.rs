//! Proximity full-text search for queries made only of stop words.
//!
//! Stop lemmas are indexed through three-component keys: every FL-ordered
//! triple of stop lemmas occurring within `max_distance` of an anchor gets a
//! posting list of `(doc, pos, d1, d2)` records. A query is evaluated over
//! the few key lists that cover its lemmas instead of the very long
//! per-lemma positional lists.

pub mod bench;
pub mod check;
pub mod codec;
pub mod config;
pub mod corpus;
pub mod error;
pub mod index;
pub mod lexicon;
pub mod oracle;
pub mod search;
pub mod text;
pub mod verify;

pub use error::{Error, Result};
pub use index::{build_index, Document, Index};
pub use lexicon::{FlList, LemmaId, LexiconConfig};
pub use search::{search, Fragment, SearchParams, Strategy};
pub use text::Dictionary;
