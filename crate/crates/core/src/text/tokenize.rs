use std::ops::Deref;

/// Ordered tokens; none is empty and none contains whitespace.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TokenSequence(Vec<String>);

impl TokenSequence {
    /// Builds a sequence from arbitrary strings by re-splitting each on
    /// whitespace, so the invariant holds for any input.
    pub fn from_strings<I, S>(items: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        TokenSequence(
            items
                .into_iter()
                .flat_map(|s| s.as_ref().split_whitespace().map(str::to_owned).collect::<Vec<_>>())
                .collect(),
        )
    }

    pub fn into_inner(self) -> Vec<String> {
        self.0
    }

    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    /// Space-joined form; lossless because tokens contain no whitespace.
    pub fn join(&self) -> String {
        self.0.join(" ")
    }

    pub(crate) fn from_vec_unchecked(tokens: Vec<String>) -> Self {
        debug_assert!(tokens.iter().all(|t| !t.is_empty() && !t.contains(char::is_whitespace)));
        TokenSequence(tokens)
    }
}

impl Deref for TokenSequence {
    type Target = [String];

    fn deref(&self) -> &[String] {
        &self.0
    }
}

impl<'a> IntoIterator for &'a TokenSequence {
    type Item = &'a String;
    type IntoIter = std::slice::Iter<'a, String>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Splits on runs of whitespace.
pub fn tokenize(cleaned: &str) -> TokenSequence {
    TokenSequence(cleaned.split_whitespace().map(str::to_owned).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_on_whitespace_runs() {
        assert_eq!(tokenize("check electricity bills").tokens(), ["check", "electricity", "bills"]);
        assert_eq!(tokenize("  a   b ").tokens(), ["a", "b"]);
        assert!(tokenize("").is_empty());
    }

    #[test]
    fn from_strings_resplits() {
        let t = TokenSequence::from_strings(["a b", "", " c"]);
        assert_eq!(t.tokens(), ["a", "b", "c"]);
        assert_eq!(t.join(), "a b c");
    }
}
