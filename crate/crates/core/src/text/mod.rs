//! Text normalisation: cleaning, whitespace tokenisation, stopword removal
//! and Porter stemming, composed in that fixed order by [`TextPipeline`].

mod clean;
mod porter;
mod stopwords;
mod tokenize;

pub use clean::{clean_text, CleaningConfig, CleaningStep};
pub use porter::stem;
pub use stopwords::{remove_stopwords, StopwordList};
pub use tokenize::{tokenize, TokenSequence};

/// `stem ∘ remove_stopwords ∘ tokenize ∘ clean_text`.
#[derive(Debug, Clone)]
pub struct TextPipeline {
    pub cleaning: CleaningConfig,
    pub stopwords: StopwordList,
    pub stemming: bool,
}

impl Default for TextPipeline {
    fn default() -> Self {
        TextPipeline {
            cleaning: CleaningConfig::default(),
            stopwords: StopwordList::bundled(),
            stemming: true,
        }
    }
}

impl TextPipeline {
    pub fn new(cleaning: CleaningConfig, stopwords: StopwordList, stemming: bool) -> Self {
        TextPipeline { cleaning, stopwords, stemming }
    }

    pub fn preprocess(&self, raw: &str) -> TokenSequence {
        let cleaned = clean_text(raw, &self.cleaning);
        let kept = remove_stopwords(tokenize(&cleaned), &self.stopwords);
        if !self.stemming {
            return kept;
        }
        TokenSequence::from_vec_unchecked(kept.iter().map(|t| stem(t)).collect())
    }

    /// Normalises a single dictionary word the way a token would be
    /// (lowercase, stem). Used to bring lexicon entries into token space.
    pub fn normalize_word(&self, word: &str) -> String {
        let lower = word.trim().to_lowercase();
        if self.stemming {
            stem(&lower)
        } else {
            lower
        }
    }
}

/// Free-function form of [`TextPipeline::preprocess`].
pub fn preprocess(raw: &str, config: &CleaningConfig, stopwords: &StopwordList) -> TokenSequence {
    TextPipeline::new(config.clone(), stopwords.clone(), true).preprocess(raw)
}
