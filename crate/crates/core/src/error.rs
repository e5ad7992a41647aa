use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("empty lexicon")]
    EmptyLexicon,

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("document {name} has {tokens} tokens, limit is 2^31")]
    DocumentTooLarge { name: String, tokens: usize },

    #[error("query is not stop-only: word {word:?} has no stop lemma")]
    NotStopOnly { word: String },

    #[error("unsupported single-lemma stop query")]
    SingleLemmaQuery,

    #[error("query has {len} words, at most {max} are supported")]
    QueryTooLong { len: usize, max: usize },

    #[error("empty query")]
    EmptyQuery,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{file}: malformed line {line}: {reason}")]
    Parse {
        file: String,
        line: usize,
        reason: String,
    },

    #[error("decode error in {context} at offset {offset}: {reason}")]
    Decode {
        context: String,
        offset: usize,
        reason: &'static str,
    },

    #[error("{file}: {reason}")]
    Format { file: String, reason: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
