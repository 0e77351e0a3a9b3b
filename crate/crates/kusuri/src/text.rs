//! Tweet data model, normalization, tokenization, corpus file I/O,
//! deduplication and train/test splitting.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on tokens kept per tweet; the tail is dropped.
pub const MAX_TOKENS: usize = 64;
/// Upper bound on characters kept per token; longer tokens are truncated.
pub const MAX_TOKEN_CHARS: usize = 25;

/// Placeholder substituted for @-mentions during normalization.
pub const USER_PLACEHOLDER: &str = "<user>";
/// Placeholder substituted for URLs during normalization.
pub const URL_PLACEHOLDER: &str = "<url>";

// Characters that always become their own token. Hyphens, hashes,
// apostrophes and '@' stay inside words, so "percocet-thief" survives as a
// single token and the lexicon misses it (a failure mode we surface, not
// hide).
const SPLIT_PUNCT: &str = ".,!?;:\"()[]{}…~|/\\*+=^$%&";

/// One whitespace-free unit of a normalized tweet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    text: String,
}

impl Token {
    fn new(text: String) -> Self {
        debug_assert!(!text.is_empty());
        Token { text }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    /// Characters of the token in order.
    pub fn chars(&self) -> impl Iterator<Item = char> + '_ {
        self.text.chars()
    }

    pub fn len_chars(&self) -> usize {
        self.text.chars().count()
    }
}

/// Binary classification label: a tweet either mentions a medication or not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    pub fn from_u8(v: u8) -> Option<Label> {
        match v {
            0 => Some(Label::Negative),
            1 => Some(Label::Positive),
            _ => None,
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Label::Negative => 0,
            Label::Positive => 1,
        }
    }

    pub fn is_positive(self) -> bool {
        matches!(self, Label::Positive)
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.as_u8())
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = u8::deserialize(d)?;
        Label::from_u8(v).ok_or_else(|| serde::de::Error::custom("label must be 0 or 1"))
    }
}

/// A single text unit: raw content plus its normalized and tokenized forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tweet {
    id: String,
    raw: String,
    norm: String,
    tokens: Vec<Token>,
}

impl Tweet {
    /// Build a tweet from its raw text, normalizing and tokenizing it.
    pub fn new(id: impl Into<String>, raw: impl Into<String>) -> Self {
        let raw = raw.into();
        let norm = normalize(&raw);
        let tokens = tokenize(&norm);
        Tweet {
            id: id.into(),
            raw,
            norm,
            tokens,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn raw(&self) -> &str {
        &self.raw
    }

    pub fn norm(&self) -> &str {
        &self.norm
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    /// Token texts as plain string slices.
    pub fn token_texts(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.text()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// A tweet paired with its gold label.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledTweet {
    pub tweet: Tweet,
    pub label: Label,
}

/// One corpus entry: a tweet with an optional gold label.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusItem {
    pub tweet: Tweet,
    pub label: Option<Label>,
}

/// Ordered collection of tweets, optionally labeled.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Corpus {
    items: Vec<CorpusItem>,
    provenance: String,
}

#[derive(Serialize, Deserialize)]
struct CorpusRecord {
    id: String,
    text: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<Label>,
}

impl Corpus {
    pub fn new(items: Vec<CorpusItem>, provenance: impl Into<String>) -> Self {
        Corpus {
            items,
            provenance: provenance.into(),
        }
    }

    pub fn items(&self) -> &[CorpusItem] {
        &self.items
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn tweets(&self) -> impl Iterator<Item = &Tweet> {
        self.items.iter().map(|i| &i.tweet)
    }

    /// All items that carry a label, as `LabeledTweet`s.
    pub fn labeled(&self) -> Vec<LabeledTweet> {
        self.items
            .iter()
            .filter_map(|i| {
                i.label.map(|label| LabeledTweet {
                    tweet: i.tweet.clone(),
                    label,
                })
            })
            .collect()
    }
}

/// Lowercase, replace URLs and @-mentions with placeholders, collapse
/// whitespace. Idempotent; empty input yields empty output.
pub fn normalize(raw: &str) -> String {
    let mut words: Vec<String> = Vec::new();
    for word in raw.split_whitespace() {
        let lower = word.to_lowercase();
        if is_url_word(&lower) {
            words.push(URL_PLACEHOLDER.to_string());
            continue;
        }
        // Mentions may hide behind punctuation ("(@bob)"). When one is
        // present the word is rewritten along the same boundaries the
        // tokenizer uses, so placeholders always stand alone.
        if split_punct_segments(&lower)
            .iter()
            .any(|seg| mention_remainder(seg).is_some())
        {
            for seg in split_punct_segments(&lower) {
                push_segment(seg, &mut words);
            }
        } else {
            words.push(lower);
        }
    }
    words.join(" ")
}

fn is_url_word(lower: &str) -> bool {
    lower.contains("http://") || lower.contains("https://") || lower.starts_with("www.")
}

/// Split a word into maximal runs of non-splitting characters and
/// single splitting-punctuation characters, in order.
fn split_punct_segments(word: &str) -> Vec<&str> {
    let mut segments = Vec::new();
    let mut run_start = 0;
    for (idx, ch) in word.char_indices() {
        if SPLIT_PUNCT.contains(ch) {
            if idx > run_start {
                segments.push(&word[run_start..idx]);
            }
            segments.push(&word[idx..idx + ch.len_utf8()]);
            run_start = idx + ch.len_utf8();
        }
    }
    if run_start < word.len() {
        segments.push(&word[run_start..]);
    }
    segments
}

fn push_segment(mut seg: &str, words: &mut Vec<String>) {
    while let Some(rest) = mention_remainder(seg) {
        words.push(USER_PLACEHOLDER.to_string());
        if rest.is_empty() {
            return;
        }
        seg = rest;
    }
    words.push(seg.to_string());
}

/// If `seg` starts with an @-mention (an '@' followed by at least one
/// alphanumeric or underscore), return the text after the handle.
fn mention_remainder(seg: &str) -> Option<&str> {
    let rest = seg.strip_prefix('@')?;
    let handle_len = rest
        .char_indices()
        .take_while(|(_, c)| c.is_alphanumeric() || *c == '_')
        .map(|(i, c)| i + c.len_utf8())
        .last()?;
    Some(&rest[handle_len..])
}

/// Split normalized text into tokens. Placeholder words stay atomic;
/// sentence punctuation becomes single-character tokens; token and tweet
/// lengths are capped (truncated, never dropped mid-token).
pub fn tokenize(norm: &str) -> Vec<Token> {
    let mut tokens: Vec<Token> = Vec::new();
    for word in norm.split_whitespace() {
        if tokens.len() >= MAX_TOKENS {
            break;
        }
        if word == USER_PLACEHOLDER || word == URL_PLACEHOLDER {
            tokens.push(Token::new(word.to_string()));
            continue;
        }
        let mut current = String::new();
        for ch in word.chars() {
            if SPLIT_PUNCT.contains(ch) {
                if !current.is_empty() {
                    tokens.push(Token::new(truncate_chars(&current)));
                    current.clear();
                }
                tokens.push(Token::new(ch.to_string()));
            } else {
                current.push(ch);
            }
        }
        if !current.is_empty() {
            tokens.push(Token::new(truncate_chars(&current)));
        }
    }
    tokens.truncate(MAX_TOKENS);
    tokens
}

fn truncate_chars(s: &str) -> String {
    s.chars().take(MAX_TOKEN_CHARS).collect()
}

/// Read a corpus from line-delimited records `{id, text, label?}`.
pub fn load_corpus(reader: impl BufRead, provenance: &str) -> Result<Corpus> {
    let mut items = Vec::new();
    let mut seen_ids: HashSet<String> = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: CorpusRecord =
            serde_json::from_str(&line).map_err(|e| Error::FileFormat {
                line: line_no,
                msg: e.to_string(),
            })?;
        if !seen_ids.insert(record.id.clone()) {
            return Err(Error::DuplicateId {
                line: line_no,
                id: record.id,
            });
        }
        items.push(CorpusItem {
            tweet: Tweet::new(record.id, record.text),
            label: record.label,
        });
    }
    Ok(Corpus::new(items, provenance))
}

/// Write a corpus as line-delimited records; `load_corpus` of the output
/// reproduces the input.
pub fn write_corpus(corpus: &Corpus, mut writer: impl Write) -> Result<()> {
    for item in corpus.items() {
        let record = CorpusRecord {
            id: item.tweet.id().to_string(),
            text: item.tweet.raw().to_string(),
            label: item.label,
        };
        serde_json::to_writer(&mut writer, &record)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

/// Drop tweets whose normalized text was already seen, keeping first
/// occurrences in order.
pub fn dedup(corpus: &Corpus) -> Corpus {
    let mut seen: HashSet<&str> = HashSet::new();
    let items = corpus
        .items()
        .iter()
        .filter(|item| seen.insert(item.tweet.norm()))
        .cloned()
        .collect();
    Corpus::new(items, corpus.provenance().to_string())
}

/// Randomly partition a corpus into train and test sets. The train size is
/// `|corpus| * train_fraction` rounded to the nearest integer; both sides
/// keep the original corpus order.
pub fn split_corpus(corpus: &Corpus, train_fraction: f64, rng_seed: u64) -> Result<(Corpus, Corpus)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "train_fraction must be in (0, 1), got {train_fraction}"
        )));
    }
    if corpus.len() < 2 {
        return Err(Error::InvalidConfig(
            "cannot split a corpus with fewer than 2 items".to_string(),
        ));
    }
    let n = corpus.len();
    let n_train = ((n as f64) * train_fraction).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut indices: Vec<usize> = (0..n).collect();
    indices.shuffle(&mut rng);
    let mut train_idx: Vec<usize> = indices[..n_train].to_vec();
    let mut test_idx: Vec<usize> = indices[n_train..].to_vec();
    train_idx.sort_unstable();
    test_idx.sort_unstable();
    let pick = |idx: &[usize], tag: &str| {
        Corpus::new(
            idx.iter().map(|&i| corpus.items()[i].clone()).collect(),
            format!("{} [{}]", corpus.provenance(), tag),
        )
    };
    Ok((pick(&train_idx, "train"), pick(&test_idx, "test")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalize_lowercases() {
        assert_eq!(normalize("NyQuil is my friend"), "nyquil is my friend");
    }

    #[test]
    fn normalize_placeholders() {
        assert_eq!(
            normalize("@Bob take this http://x.co/a"),
            "<user> take this <url>"
        );
    }

    #[test]
    fn normalize_empty() {
        assert_eq!(normalize(""), "");
    }

    #[test]
    fn normalize_collapses_whitespace() {
        assert_eq!(normalize("  a \t b\n c  "), "a b c");
    }

    #[test]
    fn normalize_mention_with_trailing_punct() {
        assert_eq!(normalize("@Bob! hi"), "<user> ! hi");
    }

    #[test]
    fn normalize_bare_at_sign_is_kept() {
        assert_eq!(normalize("me @ home"), "me @ home");
    }

    #[test]
    fn tokenize_splits_punctuation() {
        let toks = tokenize("lyrica experiences?");
        assert_eq!(texts(&toks), vec!["lyrica", "experiences", "?"]);
    }

    #[test]
    fn tokenize_keeps_placeholders_atomic() {
        let toks = tokenize("<user> hi");
        assert_eq!(texts(&toks), vec!["<user>", "hi"]);
    }

    #[test]
    fn tokenize_interior_comma() {
        let toks = tokenize("a,b");
        assert_eq!(texts(&toks), vec!["a", ",", "b"]);
    }

    #[test]
    fn tokenize_keeps_hyphens_and_hashes() {
        let toks = tokenize("the percocet-thief plot #amusthave");
        assert_eq!(
            texts(&toks),
            vec!["the", "percocet-thief", "plot", "#amusthave"]
        );
    }

    #[test]
    fn tokenize_truncates_long_tokens() {
        let long = "x".repeat(80);
        let toks = tokenize(&long);
        assert_eq!(toks.len(), 1);
        assert_eq!(toks[0].len_chars(), MAX_TOKEN_CHARS);
    }

    #[test]
    fn tokenize_caps_token_count() {
        let norm = vec!["w"; 200].join(" ");
        assert_eq!(tokenize(&norm).len(), MAX_TOKENS);
    }

    fn texts(tokens: &[Token]) -> Vec<&str> {
        tokens.iter().map(|t| t.text()).collect()
    }

    #[test]
    fn dedup_keeps_first_occurrence() {
        let corpus = corpus_of(&[("t1", "hi"), ("t2", "hi"), ("t3", "yo")]);
        let out = dedup(&corpus);
        let ids: Vec<&str> = out.tweets().map(|t| t.id()).collect();
        assert_eq!(ids, vec!["t1", "t3"]);
    }

    #[test]
    fn dedup_empty_and_distinct() {
        assert_eq!(dedup(&Corpus::default()).len(), 0);
        let corpus = corpus_of(&[("a", "x"), ("b", "y")]);
        assert_eq!(dedup(&corpus), corpus_of(&[("a", "x"), ("b", "y")]));
    }

    #[test]
    fn dedup_is_idempotent() {
        let corpus = corpus_of(&[("a", "x"), ("b", "x"), ("c", "y"), ("d", "Y")]);
        let once = dedup(&corpus);
        let twice = dedup(&once);
        assert_eq!(once, twice);
    }

    #[test]
    fn split_is_disjoint_and_exhaustive() {
        let corpus = corpus_of(&[
            ("a", "1"),
            ("b", "2"),
            ("c", "3"),
            ("d", "4"),
            ("e", "5"),
            ("f", "6"),
            ("g", "7"),
            ("h", "8"),
            ("i", "9"),
            ("j", "10"),
        ]);
        let (train, test) = split_corpus(&corpus, 0.5, 7).unwrap();
        assert_eq!(train.len(), 5);
        assert_eq!(test.len(), 5);
        let mut all: Vec<&str> = train.tweets().chain(test.tweets()).map(|t| t.id()).collect();
        all.sort_unstable();
        assert_eq!(all, vec!["a", "b", "c", "d", "e", "f", "g", "h", "i", "j"]);
    }

    #[test]
    fn split_is_deterministic() {
        let corpus = corpus_of(&[("a", "1"), ("b", "2"), ("c", "3"), ("d", "4")]);
        let (t1, e1) = split_corpus(&corpus, 0.5, 42).unwrap();
        let (t2, e2) = split_corpus(&corpus, 0.5, 42).unwrap();
        assert_eq!(t1, t2);
        assert_eq!(e1, e2);
    }

    #[test]
    fn split_rounds_to_nearest() {
        let items: Vec<CorpusItem> = (0..15_005)
            .map(|i| CorpusItem {
                tweet: Tweet::new(format!("t{i}"), format!("text {i}")),
                label: None,
            })
            .collect();
        let corpus = Corpus::new(items, "synthetic");
        let (train, test) = split_corpus(&corpus, 0.64, 0).unwrap();
        assert_eq!(train.len(), 9_603);
        assert_eq!(test.len(), 5_402);
    }

    #[test]
    fn split_rejects_tiny_corpus() {
        let corpus = corpus_of(&[("a", "1")]);
        assert!(split_corpus(&corpus, 0.5, 0).is_err());
    }

    #[test]
    fn corpus_roundtrip_preserves_labels() {
        let items = vec![
            CorpusItem {
                tweet: Tweet::new("a", "Hello @Bob"),
                label: Some(Label::Positive),
            },
            CorpusItem {
                tweet: Tweet::new("b", "plain text"),
                label: None,
            },
        ];
        let corpus = Corpus::new(items, "test");
        let mut buf = Vec::new();
        write_corpus(&corpus, &mut buf).unwrap();
        let loaded = load_corpus(buf.as_slice(), "test").unwrap();
        assert_eq!(loaded, corpus);
    }

    #[test]
    fn load_corpus_reports_malformed_line() {
        let data = b"{\"id\":\"a\",\"text\":\"ok\"}\nnot json\n";
        match load_corpus(&data[..], "t") {
            Err(Error::FileFormat { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn load_corpus_rejects_duplicate_ids() {
        let data = b"{\"id\":\"a\",\"text\":\"x\"}\n{\"id\":\"a\",\"text\":\"y\"}\n";
        match load_corpus(&data[..], "t") {
            Err(Error::DuplicateId { line, id }) => {
                assert_eq!(line, 2);
                assert_eq!(id, "a");
            }
            other => panic!("expected duplicate id error, got {other:?}"),
        }
    }

    #[test]
    fn load_corpus_rejects_bad_label() {
        let data = b"{\"id\":\"a\",\"text\":\"x\",\"label\":2}\n";
        assert!(matches!(
            load_corpus(&data[..], "t"),
            Err(Error::FileFormat { line: 1, .. })
        ));
    }

    fn corpus_of(pairs: &[(&str, &str)]) -> Corpus {
        Corpus::new(
            pairs
                .iter()
                .map(|(id, text)| CorpusItem {
                    tweet: Tweet::new(*id, *text),
                    label: None,
                })
                .collect(),
            "test",
        )
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(raw in ".{0,200}") {
            let once = normalize(&raw);
            prop_assert_eq!(normalize(&once), once);
        }

        #[test]
        fn tokenize_never_emits_empty_tokens(raw in ".{0,200}") {
            for token in tokenize(&normalize(&raw)) {
                prop_assert!(!token.text().is_empty());
            }
        }

        #[test]
        fn token_join_is_normalize_fixed_point(raw in ".{0,200}") {
            let tokens = tokenize(&normalize(&raw));
            let joined = tokens.iter().map(|t| t.text()).collect::<Vec<_>>().join(" ");
            prop_assert_eq!(normalize(&joined), joined.clone());
        }
    }
}
