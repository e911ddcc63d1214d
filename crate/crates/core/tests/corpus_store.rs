use std::fmt::Write as _;

use proptest::prelude::*;
use tweetsent_core::corpus::*;
use tweetsent_core::lexicon::SentimentScore;
use tweetsent_core::text::TokenSequence;
use tweetsent_core::SentimentLabel::{self, *};

fn ingest(csv: &str) -> Ingested {
    ingest_csv(csv.as_bytes(), "test", &ColumnMap::default(), &IngestOptions::default()).unwrap()
}

#[test]
fn ingests_a_large_export() {
    let mut csv = String::from("id,text,author,created_at,country\n");
    for i in 0..5297 {
        writeln!(csv, "{i},\"Electricity bill #{i}, again\",u{},2022-09-01T10:00:00Z,UK", i % 13).unwrap();
    }
    let out = ingest(&csv);
    assert_eq!(out.corpus.len(), 5297);
    assert_eq!(out.stats.dropped(), 0);
}

#[test]
fn header_only_and_empty_text() {
    let out = ingest("id,text\n");
    assert_eq!((out.corpus.len(), out.stats.dropped()), (0, 0));
    let out = ingest("id,text\n1,a\n2,\n3,b\n4,\"  \"\n5,c\n");
    assert_eq!(out.corpus.len(), 3);
    assert_eq!(out.stats.dropped_empty, 2);
}

#[test]
fn missing_text_column_is_a_schema_error() {
    let err = ingest_csv("id,body\n1,x\n".as_bytes(), "t", &ColumnMap::default(), &IngestOptions::default());
    assert!(matches!(err, Err(tweetsent_core::Error::Schema(_))));
}

#[test]
fn malformed_rows_collected_or_fatal() {
    let csv = "id,text\n1,ok\n2,too,many\n3,fine\n";
    let out = ingest(csv);
    assert_eq!(out.corpus.len(), 2);
    assert_eq!(out.stats.row_errors.len(), 1);
    let strict = IngestOptions { strict: true, ..Default::default() };
    assert!(ingest_csv(csv.as_bytes(), "t", &ColumnMap::default(), &strict).is_err());
}

#[test]
fn duplicates_and_invalid_utf8() {
    let out = ingest("id,text\n1,first\n1,second\n");
    assert_eq!(out.corpus.records()[0].text, "first");
    assert_eq!(out.stats.dropped_duplicate, 1);
    let mut bytes = b"id,text\n1,caf".to_vec();
    bytes.extend_from_slice(&[0xff, 0xfe]);
    bytes.extend_from_slice(b"\n");
    let out = ingest_csv(&bytes[..], "t", &ColumnMap::default(), &IngestOptions::default()).unwrap();
    assert_eq!(out.stats.replaced_sequences, 2);
    assert!(out.corpus.records()[0].text.contains('\u{fffd}'));
}

#[test]
fn country_filter() {
    let mut csv = String::from("id,text,country\n");
    for i in 0..10 {
        let c = if [1, 4, 5, 8].contains(&i) { "India" } else { "UK" };
        writeln!(csv, "r{i},text {i},{c}").unwrap();
    }
    let corpus = ingest(&csv).corpus;
    let india = filter_by_country(&corpus, &Country::India);
    let ids: Vec<&str> = india.records().iter().map(|r| r.id.as_str()).collect();
    assert_eq!(ids, ["r1", "r4", "r5", "r8"]);
    assert!(filter_by_country(&corpus, &"France".parse().unwrap()).is_empty());
}

#[test]
fn per_country_counts() {
    let mut csv = String::from("id,text,country\n");
    for i in 0..(5297 + 3434) {
        writeln!(csv, "{i},t,{}", if i < 5297 { "UK" } else { "India" }).unwrap();
    }
    let corpus = ingest(&csv).corpus;
    assert_eq!(filter_by_country(&corpus, &Country::Uk).len(), 5297);
    assert_eq!(filter_by_country(&corpus, &Country::India).len(), 3434);
}

fn doc(i: usize, text: &str, pos: usize, neg: usize) -> LabeledDocument {
    let tokens = TokenSequence::from_strings([text]);
    let score = SentimentScore::from_counts(pos, neg, tokens.len());
    let label = if score.score >= 0.1 { Positive } else { Negative };
    LabeledDocument { id: format!("d{i}"), tokens, score, label }
}

#[test]
fn persists_one_line_per_doc() {
    let docs: Vec<LabeledDocument> = (0..2620).map(|i| doc(i, "price rise", i % 2, 0)).collect();
    let mut buf = Vec::new();
    assert_eq!(persist_labeled(&docs, &mut buf).unwrap(), 2620);
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 2621);
    let mut buf = Vec::new();
    assert_eq!(persist_labeled(&[], &mut buf).unwrap(), 0);
    assert_eq!(String::from_utf8(buf).unwrap(), "id,text,pos_count,neg_count,score,label\n");
}

#[test]
fn labeled_round_trip() {
    let docs = vec![
        doc(0, "good price", 1, 0),
        doc(1, "bad bill high", 0, 2),
        doc(2, "meter", 0, 0),
        doc(3, "good good bad", 2, 1),
        doc(4, "rise", 0, 0),
        doc(5, "cheap unit good tariff", 2, 0),
        doc(6, "unfair \"quoted\" price", 0, 1),
    ];
    let mut buf = Vec::new();
    persist_labeled(&docs, &mut buf).unwrap();
    assert_eq!(read_labeled(&buf[..]).unwrap(), docs);
}

#[test]
fn raw_corpus_round_trip() {
    let csv = "id,text,author,created_at,country\n1,\"Bills, bills\",ann,2022-01-01T00:00:00Z,UK\n2,Power cut,raj,2022-01-02T00:00:00Z,India\n3,x,z,2022-01-03T00:00:00Z,Kenya\n";
    let first = ingest(csv).corpus;
    let mut buf = Vec::new();
    write_corpus(&first, &mut buf).unwrap();
    let second = ingest(std::str::from_utf8(&buf).unwrap()).corpus;
    assert_eq!(first.records(), second.records());
}

#[test]
fn split_examples() {
    let labels = vec![Positive; 10];
    let split = train_test_split(&labels, &SplitSpec::new(0.3, 1, false).unwrap()).unwrap();
    assert_eq!((split.test.len(), split.train.len()), (3, 7));

    let mut labels = vec![Positive; 8];
    labels.extend([Negative; 2]);
    let spec = SplitSpec::new(0.5, 9, true).unwrap();
    let split = train_test_split(&labels, &spec).unwrap();
    let pos = split.test.iter().filter(|&&i| labels[i] == Positive).count();
    assert_eq!((pos, split.test.len() - pos), (4, 1));
    assert_eq!(train_test_split(&labels, &spec).unwrap(), split);

    assert!(SplitSpec::new(0.0, 1, true).is_err());
    assert!(SplitSpec::new(1.0, 1, true).is_err());
}

#[test]
fn seeds_permute_membership() {
    let labels: Vec<SentimentLabel> = (0..100).map(|i| if i % 3 == 0 { Positive } else { Negative }).collect();
    let a = train_test_split(&labels, &SplitSpec::new(0.3, 1, true).unwrap()).unwrap();
    let b = train_test_split(&labels, &SplitSpec::new(0.3, 2, true).unwrap()).unwrap();
    assert_ne!(a.test, b.test);
    assert_eq!(a.test.len(), b.test.len());
}

proptest! {
    #[test]
    fn split_properties(
        bits in prop::collection::vec(any::<bool>(), 2..200),
        fraction in 0.01f64..0.99,
        seed in any::<u64>(),
        stratified in any::<bool>(),
    ) {
        let labels: Vec<SentimentLabel> = bits.iter().map(|&b| if b { Positive } else { Negative }).collect();
        let spec = SplitSpec::new(fraction, seed, stratified).unwrap();
        let single_class = bits.iter().all(|&b| b == bits[0]);
        if stratified && single_class {
            prop_assert!(train_test_split(&labels, &spec).is_err());
            return Ok(());
        }
        let split = train_test_split(&labels, &spec).unwrap();
        let mut all: Vec<usize> = split.train.iter().chain(&split.test).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..labels.len()).collect::<Vec<_>>());
        prop_assert!(split.train.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(split.test.windows(2).all(|w| w[0] < w[1]));
        if stratified {
            // proportion of each class in the test set is within one sample of its global share
            let n = labels.len() as f64;
            let t = split.test.len() as f64;
            for class in [Positive, Negative] {
                let global = labels.iter().filter(|&&l| l == class).count() as f64;
                let in_test = split.test.iter().filter(|&&i| labels[i] == class).count() as f64;
                prop_assert!((in_test - global * t / n).abs() <= 1.0 + 1e-9);
            }
        }
    }
}
