//! Tweet records, CSV ingestion, labelled-corpus persistence and
//! deterministic train/test splitting.

use std::collections::HashSet;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::{SentimentLabel, SentimentScore};
use crate::seed;
use crate::text::TokenSequence;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Country {
    Uk,
    India,
    Other(String),
}

impl FromStr for Country {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let t = s.trim();
        Ok(match t.to_ascii_lowercase().as_str() {
            "uk" | "gb" | "united kingdom" | "great britain" => Country::Uk,
            "india" | "in" => Country::India,
            _ => Country::Other(t.to_owned()),
        })
    }
}

impl fmt::Display for Country {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Country::Uk => f.write_str("UK"),
            Country::India => f.write_str("India"),
            Country::Other(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TweetRecord {
    pub id: String,
    pub text: String,
    pub author: String,
    /// ISO-8601 timestamp, kept verbatim.
    pub created_at: String,
    pub country: Country,
}

/// Records in ingestion order with unique ids and non-empty text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    records: Vec<TweetRecord>,
    source_name: String,
}

impl Corpus {
    pub fn new(source_name: impl Into<String>, records: Vec<TweetRecord>) -> Result<Self> {
        let mut seen = HashSet::new();
        for r in &records {
            if r.text.trim().is_empty() {
                return Err(Error::invalid(format!("record `{}` has empty text", r.id)));
            }
            if !seen.insert(r.id.as_str()) {
                return Err(Error::invalid(format!("duplicate record id `{}`", r.id)));
            }
        }
        Ok(Corpus { records, source_name: source_name.into() })
    }

    pub fn records(&self) -> &[TweetRecord] {
        &self.records
    }

    pub fn source_name(&self) -> &str {
        &self.source_name
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Maps logical record fields to CSV column names. Only `text` is
/// required to be present in the file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMap {
    pub text: String,
    pub id: String,
    pub author: String,
    pub created_at: String,
    pub country: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        ColumnMap {
            text: "text".into(),
            id: "id".into(),
            author: "author".into(),
            created_at: "created_at".into(),
            country: "country".into(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct IngestOptions {
    /// Malformed rows abort ingestion instead of being collected.
    pub strict: bool,
    /// Country for files without a country column (per-country exports).
    pub default_country: Option<Country>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestStats {
    pub accepted: usize,
    pub dropped_empty: usize,
    pub dropped_duplicate: usize,
    /// Invalid UTF-8 sequences replaced with U+FFFD.
    pub replaced_sequences: usize,
    pub row_errors: Vec<(u64, String)>,
}

impl IngestStats {
    pub fn dropped(&self) -> usize {
        self.dropped_empty + self.dropped_duplicate + self.row_errors.len()
    }
}

#[derive(Debug, Clone)]
pub struct Ingested {
    pub corpus: Corpus,
    pub stats: IngestStats,
}

fn decode_lossy(bytes: &[u8]) -> (String, usize) {
    let mut out = String::with_capacity(bytes.len());
    let mut replaced = 0;
    for chunk in bytes.utf8_chunks() {
        out.push_str(chunk.valid());
        if !chunk.invalid().is_empty() {
            out.push(char::REPLACEMENT_CHARACTER);
            replaced += 1;
        }
    }
    (out, replaced)
}

/// Reads an RFC-4180 CSV export with a header row.
pub fn ingest_csv<R: Read>(
    mut source: R,
    source_name: &str,
    schema: &ColumnMap,
    options: &IngestOptions,
) -> Result<Ingested> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    let (text, replaced) = decode_lossy(&bytes);

    let mut reader = csv::ReaderBuilder::new().has_headers(true).flexible(false).from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let column = |name: &str| headers.iter().position(|h| h.trim() == name);
    let text_col = column(&schema.text)
        .ok_or_else(|| Error::Schema(format!("missing text column `{}`", schema.text)))?;
    let id_col = column(&schema.id);
    let author_col = column(&schema.author);
    let created_col = column(&schema.created_at);
    let country_col = column(&schema.country);

    let mut stats = IngestStats { replaced_sequences: replaced, ..Default::default() };
    let mut seen = HashSet::new();
    let mut records = Vec::new();
    for (ordinal, row) in reader.records().enumerate() {
        let row = match row {
            Ok(row) => row,
            Err(e) => {
                let line = e.position().map(|p| p.line()).unwrap_or(0);
                if options.strict {
                    return Err(Error::Row { line, message: e.to_string() });
                }
                stats.row_errors.push((line, e.to_string()));
                continue;
            }
        };
        let field = |col: Option<usize>| col.and_then(|c| row.get(c)).unwrap_or("").to_owned();
        let body = field(Some(text_col));
        if body.trim().is_empty() {
            stats.dropped_empty += 1;
            continue;
        }
        let id = match id_col {
            Some(_) => field(id_col),
            None => (ordinal + 1).to_string(),
        };
        if !seen.insert(id.clone()) {
            stats.dropped_duplicate += 1;
            continue;
        }
        let country = match country_col {
            Some(_) => field(country_col).parse().unwrap(),
            None => options.default_country.clone().unwrap_or(Country::Other("unknown".into())),
        };
        records.push(TweetRecord {
            id,
            text: body,
            author: field(author_col),
            created_at: field(created_col),
            country,
        });
    }
    stats.accepted = records.len();
    Ok(Ingested { corpus: Corpus::new(source_name, records)?, stats })
}

/// Writes records with the default column names, so the output re-ingests
/// with [`ColumnMap::default`].
pub fn write_corpus<W: Write>(corpus: &Corpus, sink: W) -> Result<usize> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["id", "text", "author", "created_at", "country"])?;
    for r in corpus.records() {
        w.write_record([&r.id, &r.text, &r.author, &r.created_at, &r.country.to_string()])?;
    }
    w.flush()?;
    Ok(corpus.len())
}

/// Order-preserving subset of records tagged with `country`.
pub fn filter_by_country(corpus: &Corpus, country: &Country) -> Corpus {
    Corpus {
        records: corpus.records.iter().filter(|r| &r.country == country).cloned().collect(),
        source_name: corpus.source_name.clone(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDocument {
    pub id: String,
    pub tokens: TokenSequence,
    pub score: SentimentScore<f64>,
    pub label: SentimentLabel,
}

pub const LABELED_HEADER: [&str; 6] = ["id", "text", "pos_count", "neg_count", "score", "label"];

/// Writes `id,text,pos_count,neg_count,score,label`; `text` holds the
/// space-joined processed tokens. Returns the number of data rows.
pub fn persist_labeled<W: Write>(docs: &[LabeledDocument], sink: W) -> Result<usize> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(LABELED_HEADER)?;
    for d in docs {
        w.write_record([
            d.id.clone(),
            d.tokens.join(),
            d.score.pos_count.to_string(),
            d.score.neg_count.to_string(),
            d.score.score.to_string(),
            d.label.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(docs.len())
}

pub fn read_labeled<R: Read>(source: R) -> Result<Vec<LabeledDocument>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(source);
    let headers = reader.headers()?;
    if headers.iter().ne(LABELED_HEADER) {
        return Err(Error::Schema(format!(
            "labeled file header must be `{}`",
            LABELED_HEADER.join(",")
        )));
    }
    let mut docs = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let bad = |what: &str| Error::Row { line, message: format!("invalid {what}") };
        let tokens = TokenSequence::from_strings([&row[1]]);
        let pos_count = row[2].parse().map_err(|_| bad("pos_count"))?;
        let neg_count = row[3].parse().map_err(|_| bad("neg_count"))?;
        let score: f64 = row[4].parse().map_err(|_| bad("score"))?;
        let label = row[5].parse::<u8>().map_err(|_| bad("label")).and_then(SentimentLabel::from_value)?;
        docs.push(LabeledDocument {
            id: row[0].to_owned(),
            score: SentimentScore { pos_count, neg_count, token_count: tokens.len(), score },
            tokens,
            label,
        });
    }
    Ok(docs)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    test_fraction: f64,
    pub seed: u64,
    pub stratified: bool,
}

impl SplitSpec {
    pub fn new(test_fraction: f64, seed: u64, stratified: bool) -> Result<Self> {
        if !(test_fraction > 0.0 && test_fraction < 1.0) {
            return Err(Error::config(format!("test fraction must lie in (0, 1), got {test_fraction}")));
        }
        Ok(SplitSpec { test_fraction, seed, stratified })
    }

    pub fn test_fraction(&self) -> f64 {
        self.test_fraction
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    /// Ascending sample indices.
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// `round(n * fraction)` with halves rounded up; the nudge keeps products
/// like `0.35 * 10` from landing just below the half.
fn round_half_up_count(n: usize, fraction: f64) -> usize {
    ((n as f64) * fraction + 0.5 + 1e-9).floor() as usize
}

/// Seeded shuffle-and-cut. When stratified, the test size is rounded per
/// class (positive class first, then negative).
pub fn train_test_split(labels: &[SentimentLabel], spec: &SplitSpec) -> Result<Split> {
    let mut rng = seed::rng(spec.seed);
    let groups: Vec<Vec<usize>> = if spec.stratified {
        let groups: Vec<Vec<usize>> = [SentimentLabel::Positive, SentimentLabel::Negative]
            .iter()
            .map(|c| (0..labels.len()).filter(|&i| labels[i] == *c).collect())
            .collect();
        if let Some(empty) = groups.iter().position(Vec::is_empty) {
            let class = if empty == 0 { 1 } else { 0 };
            return Err(Error::invalid(format!("stratified split: class {class} has no samples")));
        }
        groups
    } else {
        vec![(0..labels.len()).collect()]
    };

    let mut train = Vec::new();
    let mut test = Vec::new();
    for mut group in groups {
        group.shuffle(&mut rng);
        let cut = round_half_up_count(group.len(), spec.test_fraction).min(group.len());
        test.extend_from_slice(&group[..cut]);
        train.extend_from_slice(&group[cut..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(Split { train, test })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIVE_ROWS: &str = "id,text,author,created_at,country\n\
        1,hello world,a,2022-01-01T00:00:00Z,UK\n\
        2,,b,2022-01-01T00:00:00Z,UK\n\
        3,\"quoted, text\",c,2022-01-02T00:00:00Z,India\n\
        4,   ,d,2022-01-02T00:00:00Z,India\n\
        5,last one,e,2022-01-03T00:00:00Z,UK\n";

    fn ingest(s: &str) -> Result<Ingested> {
        ingest_csv(s.as_bytes(), "test", &ColumnMap::default(), &IngestOptions::default())
    }

    #[test]
    fn drops_empty_text_rows() {
        let out = ingest(FIVE_ROWS).unwrap();
        assert_eq!(out.corpus.len(), 3);
        assert_eq!(out.stats.dropped_empty, 2);
        assert_eq!(out.stats.accepted, 3);
        assert_eq!(out.corpus.records()[1].text, "quoted, text");
        assert_eq!(out.corpus.records()[1].country, Country::India);
    }

    #[test]
    fn header_only_file() {
        let out = ingest("id,text\n").unwrap();
        assert!(out.corpus.is_empty());
        assert_eq!(out.stats.dropped(), 0);
    }

    #[test]
    fn missing_text_column_is_schema_error() {
        assert!(matches!(ingest("id,body\n1,x\n"), Err(Error::Schema(_))));
    }

    #[test]
    fn custom_schema_and_default_country() {
        let schema = ColumnMap { text: "tweet".into(), author: "user".into(), ..ColumnMap::default() };
        let opts = IngestOptions { default_country: Some(Country::India), ..Default::default() };
        let out = ingest_csv("tweet,user\nhi,@x\nyo,@y\n".as_bytes(), "in", &schema, &opts).unwrap();
        assert_eq!(out.corpus.len(), 2);
        let r = &out.corpus.records()[0];
        assert_eq!((r.id.as_str(), r.author.as_str(), &r.country), ("1", "@x", &Country::India));
    }

    #[test]
    fn duplicate_ids_keep_first() {
        let out = ingest("id,text\n7,first\n7,second\n8,third\n").unwrap();
        assert_eq!(out.corpus.len(), 2);
        assert_eq!(out.stats.dropped_duplicate, 1);
        assert_eq!(out.corpus.records()[0].text, "first");
    }

    #[test]
    fn malformed_rows_collected_or_fatal() {
        let src = "id,text\n1,ok\n2,too,many\n3,fine\n";
        let out = ingest(src).unwrap();
        assert_eq!(out.corpus.len(), 2);
        assert_eq!(out.stats.row_errors.len(), 1);
        let strict = IngestOptions { strict: true, ..Default::default() };
        let err = ingest_csv(src.as_bytes(), "t", &ColumnMap::default(), &strict).unwrap_err();
        assert!(matches!(err, Error::Row { .. }));
    }

    #[test]
    fn invalid_utf8_is_replaced_and_counted() {
        let mut bytes = b"id,text\n1,caf".to_vec();
        bytes.extend_from_slice(&[0xff, 0xfe]);
        bytes.extend_from_slice(b" bill\n");
        let out = ingest_csv(&bytes[..], "t", &ColumnMap::default(), &IngestOptions::default()).unwrap();
        assert_eq!(out.stats.replaced_sequences, 2);
        assert!(out.corpus.records()[0].text.contains('\u{FFFD}'));
    }

    #[test]
    fn country_filter_preserves_order() {
        let countries = ["UK", "India", "UK", "India", "UK", "UK", "India", "UK", "India", "UK"];
        let mut src = String::from("id,text,country\n");
        for (i, c) in countries.iter().enumerate() {
            src.push_str(&format!("r{i},text {i},{c}\n"));
        }
        let corpus = ingest(&src).unwrap().corpus;
        let india = filter_by_country(&corpus, &Country::India);
        let ids: Vec<&str> = india.records().iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["r1", "r3", "r6", "r8"]);
        assert!(filter_by_country(&corpus, &Country::Other("US".into())).is_empty());
    }

    #[test]
    fn corpus_write_reingests() {
        let corpus = ingest(FIVE_ROWS).unwrap().corpus;
        let mut buf = Vec::new();
        write_corpus(&corpus, &mut buf).unwrap();
        let again = ingest(std::str::from_utf8(&buf).unwrap()).unwrap().corpus;
        assert_eq!(again.records(), corpus.records());
    }

    fn doc(id: &str, text: &str, pos: usize, neg: usize, label: SentimentLabel) -> LabeledDocument {
        let tokens = TokenSequence::from_strings([text]);
        LabeledDocument { id: id.into(), score: SentimentScore::from_counts(pos, neg, tokens.len()), tokens, label }
    }

    #[test]
    fn labeled_round_trip() {
        use SentimentLabel::*;
        let docs = vec![
            doc("1", "good price", 1, 0, Positive),
            doc("2", "bad bill", 0, 1, Negative),
            doc("3", "", 0, 0, Negative),
            doc("4", "good good bad bill", 2, 1, Positive),
            doc("5,x", "a \"quot\" b", 0, 0, Negative),
            doc("6", "electr price rise", 0, 0, Negative),
            doc("7", "x y z w v u t", 1, 0, Positive),
        ];
        let mut buf = Vec::new();
        assert_eq!(persist_labeled(&docs, &mut buf).unwrap(), 7);
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().count(), 8);
        assert_eq!(read_labeled(&buf[..]).unwrap(), docs);
    }

    #[test]
    fn empty_labeled_file_is_header_only() {
        let mut buf = Vec::new();
        assert_eq!(persist_labeled(&[], &mut buf).unwrap(), 0);
        assert_eq!(String::from_utf8(buf).unwrap(), "id,text,pos_count,neg_count,score,label\n");
    }

    #[test]
    fn split_sizes() {
        let labels = vec![SentimentLabel::Positive; 10];
        let split = train_test_split(&labels, &SplitSpec::new(0.3, 1, false).unwrap()).unwrap();
        assert_eq!((split.test.len(), split.train.len()), (3, 7));
    }

    #[test]
    fn stratified_split_rounds_per_class() {
        let mut labels = vec![SentimentLabel::Positive; 8];
        labels.extend([SentimentLabel::Negative; 2]);
        let split = train_test_split(&labels, &SplitSpec::new(0.5, 3, true).unwrap()).unwrap();
        let pos = split.test.iter().filter(|&&i| labels[i].is_positive()).count();
        assert_eq!((pos, split.test.len() - pos), (4, 1));
    }

    #[test]
    fn split_is_seeded() {
        let labels: Vec<_> = (0..50).map(|i| SentimentLabel::from_value((i % 3 == 0) as u8).unwrap()).collect();
        let spec = SplitSpec::new(0.3, 42, true).unwrap();
        assert_eq!(train_test_split(&labels, &spec).unwrap(), train_test_split(&labels, &spec).unwrap());
        let other = SplitSpec::new(0.3, 43, true).unwrap();
        assert_ne!(train_test_split(&labels, &spec).unwrap(), train_test_split(&labels, &other).unwrap());
    }

    #[test]
    fn split_spec_validation() {
        assert!(SplitSpec::new(0.0, 0, false).is_err());
        assert!(SplitSpec::new(1.0, 0, false).is_err());
        let one_class = vec![SentimentLabel::Negative; 4];
        assert!(train_test_split(&one_class, &SplitSpec::new(0.5, 0, true).unwrap()).is_err());
    }
}
