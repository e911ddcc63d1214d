use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use regex::Regex;

use crate::error::{Error, Result};

static URL: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"[A-Za-z][A-Za-z0-9+.\-]*://\S+").unwrap());
static MENTION: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"@\w+").unwrap());
static HASHTAG: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"#(\w)").unwrap());

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CleaningStep {
    Lowercase,
    StripUrls,
    StripMentions,
    StripHashtagMarks,
    StripDigits,
    StripSpecialChars,
    CollapseWhitespace,
}

impl CleaningStep {
    pub const ALL: [CleaningStep; 7] = [
        CleaningStep::Lowercase,
        CleaningStep::StripUrls,
        CleaningStep::StripMentions,
        CleaningStep::StripHashtagMarks,
        CleaningStep::StripDigits,
        CleaningStep::StripSpecialChars,
        CleaningStep::CollapseWhitespace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CleaningStep::Lowercase => "lowercase",
            CleaningStep::StripUrls => "strip_urls",
            CleaningStep::StripMentions => "strip_mentions",
            CleaningStep::StripHashtagMarks => "strip_hashtag_marks",
            CleaningStep::StripDigits => "strip_digits",
            CleaningStep::StripSpecialChars => "strip_special_chars",
            CleaningStep::CollapseWhitespace => "collapse_whitespace",
        }
    }

    pub fn apply(self, text: &str) -> String {
        match self {
            CleaningStep::Lowercase => text.to_lowercase(),
            CleaningStep::StripUrls => URL.replace_all(text, " ").into_owned(),
            CleaningStep::StripMentions => MENTION.replace_all(text, " ").into_owned(),
            CleaningStep::StripHashtagMarks => HASHTAG.replace_all(text, "$1").into_owned(),
            CleaningStep::StripDigits => text.chars().filter(|c| !c.is_ascii_digit()).collect(),
            CleaningStep::StripSpecialChars => text
                .chars()
                // apostrophes join contractions ("don't" -> "dont")
                .filter(|c| !matches!(c, '\'' | '\u{2019}'))
                .map(|c| if c.is_alphabetic() || c.is_whitespace() { c } else { ' ' })
                .collect(),
            CleaningStep::CollapseWhitespace => text.split_whitespace().collect::<Vec<_>>().join(" "),
        }
    }
}

impl fmt::Display for CleaningStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CleaningStep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CleaningStep::ALL
            .into_iter()
            .find(|step| step.name() == s.trim())
            .ok_or_else(|| Error::config(format!("unknown cleaning step `{s}`")))
    }
}

/// Ordered list of cleaning steps. Each step appears at most once and
/// whitespace collapsing, when present, runs last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CleaningConfig {
    steps: Vec<CleaningStep>,
}

impl CleaningConfig {
    pub fn new(steps: Vec<CleaningStep>) -> Result<Self> {
        for (i, step) in steps.iter().enumerate() {
            if steps[..i].contains(step) {
                return Err(Error::config(format!("cleaning step `{step}` listed twice")));
            }
        }
        if let Some(pos) = steps.iter().position(|s| *s == CleaningStep::CollapseWhitespace) {
            if pos + 1 != steps.len() {
                return Err(Error::config("collapse_whitespace must be the last cleaning step"));
            }
        }
        Ok(CleaningConfig { steps })
    }

    pub fn none() -> Self {
        CleaningConfig { steps: Vec::new() }
    }

    pub fn steps(&self) -> &[CleaningStep] {
        &self.steps
    }

    /// Parses a comma-separated step list such as `lowercase,strip_urls`.
    pub fn parse_list(list: &str) -> Result<Self> {
        let steps = list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>>>()?;
        CleaningConfig::new(steps)
    }

    pub fn to_list(&self) -> String {
        self.steps.iter().map(|s| s.name()).collect::<Vec<_>>().join(",")
    }
}

impl Default for CleaningConfig {
    fn default() -> Self {
        CleaningConfig { steps: CleaningStep::ALL.to_vec() }
    }
}

/// Applies every enabled step in configured order.
pub fn clean_text(raw: &str, config: &CleaningConfig) -> String {
    let mut text = raw.to_owned();
    for step in &config.steps {
        text = step.apply(&text);
    }
    text
}
