use thiserror::Error;

/// Errors produced by any stage of the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    FileFormat { line: usize, msg: String },
    #[error("line {line}: duplicate id `{id}`")]
    DuplicateId { line: usize, id: String },
    #[error("empty lexicon")]
    EmptyLexicon,
    #[error("no embedding vectors in input")]
    EmptyEmbeddings,
    #[error("line {line}: pattern uses a construct outside the supported dialect: {construct}")]
    PatternDialect { line: usize, construct: String },
    #[error("invalid phrase `{phrase}`: {msg}")]
    InvalidPhrase { phrase: String, msg: String },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("shape mismatch in {op}: {details}")]
    ShapeMismatch { op: &'static str, details: String },
    #[error("empty sequence passed to {0}")]
    EmptySequence(&'static str),
    #[error("non-finite value produced by {layer}")]
    NonFinite { layer: &'static str },
    #[error("training corpus contains a single class")]
    SingleClassCorpus,
    #[error("no positives: no text contains a seed name")]
    NoPositives,
    #[error("not enough negative candidates: need {needed}, have {available}")]
    NotEnoughNegatives { needed: usize, available: usize },
    #[error("ensemble seeds must be pairwise distinct")]
    DuplicateSeeds,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("id mismatch at position {index}: `{left}` vs `{right}`")]
    IdMismatch {
        index: usize,
        left: String,
        right: String,
    },
    #[error("weights must sum to 1 (got {sum})")]
    WeightSum { sum: f64 },
    #[error("checkpoint error: {0}")]
    Checkpoint(String),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("tweet {id}: {source}")]
    TweetContext {
        id: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wrap an error with the id of the tweet being processed.
    pub fn for_tweet(id: &str, source: Error) -> Self {
        Error::TweetContext {
            id: id.to_string(),
            source: Box::new(source),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
