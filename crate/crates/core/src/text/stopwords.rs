use std::collections::HashSet;
use std::io::{BufRead, BufReader, Read};

use crate::error::{Error, Result};

use super::tokenize::TokenSequence;

const BUNDLED: &str = include_str!("../../resources/stopwords.txt");

/// Lowercase, non-empty words removed before stemming.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopwordList {
    words: HashSet<String>,
}

impl StopwordList {
    pub fn new<I, S>(words: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut set = HashSet::new();
        for w in words {
            let w: String = w.into();
            let w = w.trim();
            if w.is_empty() {
                return Err(Error::config("empty stopword"));
            }
            set.insert(w.to_lowercase());
        }
        Ok(StopwordList { words: set })
    }

    /// Reads one word per line; blank lines and `#` comments are skipped.
    pub fn from_reader<R: Read>(source: R) -> Result<Self> {
        let mut words = Vec::new();
        for line in BufReader::new(source).lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            words.push(line.to_owned());
        }
        StopwordList::new(words)
    }

    pub fn bundled() -> Self {
        StopwordList::from_reader(BUNDLED.as_bytes()).expect("bundled stopword list parses")
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Exact-match removal, order preserved.
pub fn remove_stopwords(tokens: TokenSequence, list: &StopwordList) -> TokenSequence {
    TokenSequence::from_vec_unchecked(
        tokens.into_inner().into_iter().filter(|t| !list.contains(t)).collect(),
    )
}
