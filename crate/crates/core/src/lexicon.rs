//! Opinion-lexicon polarity scoring and threshold labelling.
//!
//! A document's score is `(pos_count - neg_count) / max(1, token_count)`,
//! which lies in `[-1, 1]`. Documents scoring at or above the threshold
//! (default 0.1) are labelled positive, everything else negative. There is
//! no neutral class.

use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, BufReader, Read};

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, LabeledDocument};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::text::TextPipeline;

pub const DEFAULT_THRESHOLD: f64 = 0.1;

const BUNDLED_POSITIVE: &str = include_str!("../resources/positive-words.txt");
const BUNDLED_NEGATIVE: &str = include_str!("../resources/negative-words.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SentimentLabel {
    Negative = 0,
    Positive = 1,
}

impl SentimentLabel {
    pub fn value(self) -> u8 {
        self as u8
    }

    pub fn from_value(v: u8) -> Result<Self> {
        match v {
            0 => Ok(SentimentLabel::Negative),
            1 => Ok(SentimentLabel::Positive),
            other => Err(Error::invalid(format!("label must be 0 or 1, got {other}"))),
        }
    }

    pub fn is_positive(self) -> bool {
        self == SentimentLabel::Positive
    }
}

impl fmt::Display for SentimentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Disjoint positive and negative word sets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OpinionLexicon {
    positive: HashSet<String>,
    negative: HashSet<String>,
    conflicts: usize,
}

impl OpinionLexicon {
    /// Lowercases and deduplicates both lists. Words present in both are
    /// dropped from both and counted as conflicts.
    pub fn new<P, N, S>(positive: P, negative: N) -> Result<Self>
    where
        P: IntoIterator<Item = S>,
        N: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let norm = |w: S| {
            let w = w.as_ref().trim().to_lowercase();
            (!w.is_empty()).then_some(w)
        };
        let positive: HashSet<String> = positive.into_iter().filter_map(norm).collect();
        let negative: HashSet<String> = negative.into_iter().filter_map(norm).collect();
        if positive.is_empty() && negative.is_empty() {
            return Err(Error::config("both opinion word lists are empty"));
        }
        Ok(Self::disjoint(positive, negative))
    }

    fn disjoint(mut positive: HashSet<String>, mut negative: HashSet<String>) -> Self {
        let shared: Vec<String> = positive.intersection(&negative).cloned().collect();
        for w in &shared {
            positive.remove(w);
            negative.remove(w);
        }
        OpinionLexicon { positive, negative, conflicts: shared.len() }
    }

    /// Reads two word-per-line lists; `;` comment lines are ignored.
    pub fn from_readers<P: Read, N: Read>(positive: P, negative: N) -> Result<Self> {
        let pos = read_word_list(positive)?;
        let neg = read_word_list(negative)?;
        OpinionLexicon::new(pos, neg)
    }

    pub fn bundled() -> Self {
        OpinionLexicon::from_readers(BUNDLED_POSITIVE.as_bytes(), BUNDLED_NEGATIVE.as_bytes())
            .expect("bundled lexicon parses")
    }

    /// Maps every entry through `f` (e.g. the token stemmer). Entries whose
    /// images collide across the two lists become conflicts.
    pub fn map_words(&self, f: impl Fn(&str) -> String) -> Self {
        let positive = self.positive.iter().map(|w| f(w)).filter(|w| !w.is_empty()).collect();
        let negative = self.negative.iter().map(|w| f(w)).filter(|w| !w.is_empty()).collect();
        let mut mapped = Self::disjoint(positive, negative);
        mapped.conflicts += self.conflicts;
        mapped
    }

    /// Lexicon in the token space produced by `pipeline`.
    pub fn for_pipeline(&self, pipeline: &TextPipeline) -> Self {
        self.map_words(|w| pipeline.normalize_word(w))
    }

    pub fn positive(&self) -> &HashSet<String> {
        &self.positive
    }

    pub fn negative(&self) -> &HashSet<String> {
        &self.negative
    }

    pub fn conflicts(&self) -> usize {
        self.conflicts
    }

    pub fn len(&self) -> usize {
        self.positive.len() + self.negative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn read_word_list<R: Read>(source: R) -> Result<Vec<String>> {
    let mut words = Vec::new();
    for line in BufReader::new(source).lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with(';') {
            continue;
        }
        words.push(line.to_owned());
    }
    Ok(words)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SentimentScore<T> {
    pub pos_count: usize,
    pub neg_count: usize,
    pub token_count: usize,
    pub score: T,
}

impl<T: Scalar> SentimentScore<T> {
    pub fn from_counts(pos_count: usize, neg_count: usize, token_count: usize) -> Self {
        let diff = T::of_usize(pos_count) - T::of_usize(neg_count);
        let score = diff / T::of_usize(token_count.max(1));
        SentimentScore { pos_count, neg_count, token_count, score }
    }
}

/// Anything that can turn processed tokens into a polarity score. The
/// counting rule over an [`OpinionLexicon`] is the bundled implementation.
pub trait PolarityScorer: Sync {
    fn polarity(&self, tokens: &[String]) -> SentimentScore<f64>;
}

impl PolarityScorer for OpinionLexicon {
    fn polarity(&self, tokens: &[String]) -> SentimentScore<f64> {
        polarity_score(tokens, self)
    }
}

/// Counts lexicon hits with multiplicity; matching is exact on tokens.
pub fn polarity_score<T: Scalar>(tokens: &[String], lexicon: &OpinionLexicon) -> SentimentScore<T> {
    let pos = tokens.iter().filter(|t| lexicon.positive.contains(t.as_str())).count();
    let neg = tokens.iter().filter(|t| lexicon.negative.contains(t.as_str())).count();
    SentimentScore::from_counts(pos, neg, tokens.len())
}

/// Positive iff `score >= threshold`.
pub fn assign_label<T: Scalar>(score: &SentimentScore<T>, threshold: T) -> SentimentLabel {
    label_for_value(score.score, threshold)
}

pub fn label_for_value<T: Scalar>(value: T, threshold: T) -> SentimentLabel {
    if value >= threshold {
        SentimentLabel::Positive
    } else {
        SentimentLabel::Negative
    }
}

#[derive(Debug, Clone)]
pub struct Labeling {
    pub docs: Vec<LabeledDocument>,
    pub positive: usize,
    pub negative: usize,
}

/// Preprocesses, scores and labels every record of `corpus`.
pub fn label_corpus(
    corpus: &Corpus,
    pipeline: &TextPipeline,
    scorer: &dyn PolarityScorer,
    threshold: f64,
) -> Result<Labeling> {
    if corpus.is_empty() {
        return Err(Error::invalid("cannot label an empty corpus"));
    }
    let docs: Vec<LabeledDocument> = corpus
        .records()
        .iter()
        .map(|r| {
            let tokens = pipeline.preprocess(&r.text);
            let score = scorer.polarity(&tokens);
            let label = assign_label(&score, threshold);
            LabeledDocument { id: r.id.clone(), tokens, score, label }
        })
        .collect();
    let positive = docs.iter().filter(|d| d.label.is_positive()).count();
    Ok(Labeling { negative: docs.len() - positive, positive, docs })
}
