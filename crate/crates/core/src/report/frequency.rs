use std::collections::HashMap;
use std::io::Write;

use crate::corpus::LabeledDocument;
use crate::error::{Error, Result};
use crate::lexicon::SentimentLabel;

/// Most frequent processed tokens among documents of one label. Counts are
/// non-increasing; equal counts are ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyReport {
    pub label: SentimentLabel,
    pub top_k: usize,
    pub entries: Vec<(String, usize)>,
}

pub fn word_frequency_report(docs: &[LabeledDocument], label: SentimentLabel, top_k: usize) -> Result<FrequencyReport> {
    if top_k == 0 {
        return Err(Error::config("top_k must be at least 1"));
    }
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for doc in docs.iter().filter(|d| d.label == label) {
        for t in &doc.tokens {
            *counts.entry(t.as_str()).or_insert(0) += 1;
        }
    }
    let mut entries: Vec<(String, usize)> = counts.into_iter().map(|(t, c)| (t.to_owned(), c)).collect();
    entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    entries.truncate(top_k);
    Ok(FrequencyReport { label, top_k, entries })
}

impl FrequencyReport {
    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["token", "count"])?;
        for (t, c) in &self.entries {
            w.write_record([t.as_str(), &c.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}
