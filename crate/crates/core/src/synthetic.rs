//! Seeded generator of tweet-like electricity-price texts. Sentiment is
//! planted through words of the bundled opinion lexicon, so labelling the
//! output with that lexicon yields the ground truth.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::corpus::{Corpus, Country, TweetRecord};
use crate::error::{Error, Result};
use crate::seed;

/// Two themes. Positive and opinion-free tweets lean towards the first,
/// negative ones towards the second, so theme words correlate with the
/// label without deciding it.
const GREEN: &[&str] = &[
    "solar", "wind", "panel", "rooftop", "battery", "renewable", "subsidy", "scheme", "plant", "grid",
    "village", "project", "capacity", "farm", "storage", "mission", "target", "hydro", "offshore", "transition",
];
const COST: &[&str] = &[
    "electricity", "price", "bill", "tariff", "supplier", "meter", "unit", "month", "winter", "household",
    "cost", "rate", "payment", "consumer", "demand", "peak", "hour", "heating", "gas", "company",
];

/// Subsets of the bundled lists; the module tests pin their membership.
pub const PLANTED_POSITIVE: &[&str] =
    &["good", "great", "cheap", "fair", "happy", "affordable", "relief", "benefit", "excellent", "stable"];
pub const PLANTED_NEGATIVE: &[&str] =
    &["bad", "expensive", "unfair", "angry", "outage", "crisis", "terrible", "poor", "shock", "hike"];

const FILLER: &[&str] = &["the", "is", "so", "and", "my", "this", "are", "again", "for", "rt"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticConfig {
    pub n_docs: usize,
    pub seed: u64,
    /// Inclusive range of content words per tweet.
    pub min_words: usize,
    pub max_words: usize,
    /// Share of tweets carrying no opinion word.
    pub neutral_share: f64,
    /// Share of tweets mixing both polarities.
    pub mixed_share: f64,
    /// Probability that a theme word comes from the tweet's leaning theme.
    pub theme_bias: f64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            n_docs: 2000,
            seed: 2024,
            min_words: 4,
            max_words: 12,
            neutral_share: 0.2,
            mixed_share: 0.2,
            theme_bias: 0.75,
        }
    }
}

impl SyntheticConfig {
    pub fn with_docs(n_docs: usize, seed: u64) -> Self {
        SyntheticConfig { n_docs, seed, ..Default::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.n_docs == 0 {
            return Err(Error::config("synthetic corpus needs at least one document"));
        }
        if self.min_words < 3 || self.min_words > self.max_words {
            return Err(Error::config(format!(
                "word range must satisfy 3 <= min <= max, got {}..={}",
                self.min_words, self.max_words
            )));
        }
        let shares = [self.neutral_share, self.mixed_share, self.theme_bias];
        if shares.iter().any(|s| !(0.0..=1.0).contains(s)) || self.neutral_share + self.mixed_share > 1.0 {
            return Err(Error::config("shares must lie in [0, 1] and neutral plus mixed must not exceed 1"));
        }
        Ok(())
    }
}

fn decorate<R: Rng>(rng: &mut R, words: Vec<String>, i: usize) -> String {
    let mut parts = Vec::with_capacity(words.len() + 6);
    if rng.gen_bool(0.3) {
        parts.push(format!("@user{}", rng.gen_range(1..500)));
    }
    for w in words {
        if rng.gen_bool(0.15) {
            parts.push(FILLER.choose(rng).unwrap().to_string());
        }
        match rng.gen_range(0..20) {
            0 => parts.push(format!("#{w}")),
            1 => parts.push(w.to_uppercase()),
            2 => parts.push(format!("{w}!")),
            _ => parts.push(w),
        }
    }
    if rng.gen_bool(0.25) {
        parts.push(format!("{}p/kWh", rng.gen_range(10..60)));
    }
    if rng.gen_bool(0.2) {
        parts.push(format!("https://t.co/x{i}"));
    }
    parts.join(" ")
}

/// Deterministic for a fixed config. Countries alternate UK, India.
pub fn generate_corpus(config: &SyntheticConfig) -> Result<Corpus> {
    config.validate()?;
    let mut rng = seed::rng(seed::derive_seed(config.seed, "synthetic"));
    let mut records = Vec::with_capacity(config.n_docs);
    for i in 0..config.n_docs {
        let len = rng.gen_range(config.min_words..=config.max_words);
        let u: f64 = rng.gen();
        let (pos, neg) = if u < config.neutral_share {
            (0, 0)
        } else if u < config.neutral_share + config.mixed_share {
            (rng.gen_range(1..=2), rng.gen_range(1..=2))
        } else if rng.gen_bool(0.5) {
            (rng.gen_range(1..=3), 0)
        } else {
            (0, rng.gen_range(1..=3))
        };
        let mut words: Vec<String> = Vec::with_capacity(len);
        words.extend((0..pos).map(|_| PLANTED_POSITIVE.choose(&mut rng).unwrap().to_string()));
        words.extend((0..neg).map(|_| PLANTED_NEGATIVE.choose(&mut rng).unwrap().to_string()));
        let green_leaning = match (pos, neg) {
            (_, 0) => true,
            (0, _) => false,
            _ => rng.gen_bool(0.5),
        };
        while words.len() < len {
            let theme = if rng.gen_bool(config.theme_bias) == green_leaning { GREEN } else { COST };
            words.push(theme.choose(&mut rng).unwrap().to_string());
        }
        words.shuffle(&mut rng);
        let text = decorate(&mut rng, words, i);
        let day = 1 + i % 28;
        let month = 1 + (i / 28) % 12;
        records.push(TweetRecord {
            id: format!("s{i:05}"),
            text,
            author: format!("user{}", i % 97),
            created_at: format!("2022-{month:02}-{day:02}T12:00:00Z"),
            country: if i % 2 == 0 { Country::Uk } else { Country::India },
        });
    }
    Corpus::new("synthetic", records)
}
