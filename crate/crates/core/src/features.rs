//! Vocabulary construction, n-gram terms, TF, IDF and TF-IDF as sparse
//! vectors.
//!
//! `tf(t, d) = count(t, d) / |d|` where `|d|` counts every term of the
//! document, including ones outside the vocabulary. `idf(t)` is
//! `f(N / df(t))` with `f` chosen by [`IdfMode`]: `ln`, `log10`, or the
//! identity (the raw ratio). No smoothing is applied; stored terms always
//! have `df >= 1` and unseen terms are dropped at transform time.

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};
use crate::text::TokenSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NgramConfig {
    n_min: usize,
    n_max: usize,
    min_df: usize,
}

impl NgramConfig {
    pub fn new(n_min: usize, n_max: usize, min_df: usize) -> Result<Self> {
        if !(1 <= n_min && n_min <= n_max && n_max <= 3) {
            return Err(Error::config(format!("n-gram range must satisfy 1 <= n_min <= n_max <= 3, got {n_min}..{n_max}")));
        }
        if min_df < 1 {
            return Err(Error::config("min_df must be at least 1"));
        }
        Ok(NgramConfig { n_min, n_max, min_df })
    }

    pub fn words(min_df: usize) -> Self {
        NgramConfig { n_min: 1, n_max: 1, min_df: min_df.max(1) }
    }

    pub fn n_min(&self) -> usize {
        self.n_min
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn min_df(&self) -> usize {
        self.min_df
    }
}

impl Default for NgramConfig {
    fn default() -> Self {
        NgramConfig::words(2)
    }
}

/// All contiguous windows of each length in `n_min..=n_max`, shorter
/// lengths first, joined with a single space.
pub fn extract_ngrams(tokens: &[String], config: &NgramConfig) -> Vec<String> {
    let mut terms = Vec::new();
    for n in config.n_min..=config.n_max {
        if tokens.len() < n {
            break;
        }
        terms.extend(tokens.windows(n).map(|w| w.join(" ")));
    }
    terms
}

/// Term index in first-occurrence order plus document frequencies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
    df: Vec<usize>,
    n_docs: usize,
    config: NgramConfig,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn df(&self, index: usize) -> usize {
        self.df[index]
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn config(&self) -> &NgramConfig {
        &self.config
    }

    /// Terms of `doc` under this vocabulary's n-gram configuration.
    pub fn doc_terms(&self, doc: &[String]) -> Vec<String> {
        extract_ngrams(doc, &self.config)
    }

    fn from_parts(terms: Vec<String>, df: Vec<usize>, n_docs: usize, config: NgramConfig) -> Self {
        let index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Vocabulary { terms, index, df, n_docs, config }
    }
}

pub fn build_vocabulary(docs: &[TokenSequence], config: &NgramConfig) -> Result<Vocabulary> {
    if docs.is_empty() {
        return Err(Error::invalid("cannot build a vocabulary from zero documents"));
    }
    let mut order: Vec<String> = Vec::new();
    let mut df: HashMap<String, usize> = HashMap::new();
    for doc in docs {
        let mut terms = extract_ngrams(doc, config);
        let mut seen_here = std::collections::HashSet::new();
        terms.retain(|t| seen_here.insert(t.clone()));
        for term in terms {
            let count = df.entry(term.clone()).or_insert_with(|| {
                order.push(term.clone());
                0
            });
            *count += 1;
        }
    }
    let (terms, dfs): (Vec<String>, Vec<usize>) = order
        .into_iter()
        .filter_map(|t| {
            let d = df[&t];
            (d >= config.min_df).then_some((t, d))
        })
        .unzip();
    if terms.is_empty() {
        return Err(Error::config(format!("vocabulary is empty after min_df = {} filtering", config.min_df)));
    }
    Ok(Vocabulary::from_parts(terms, dfs, docs.len(), *config))
}

/// `(index, value)` pairs with strictly increasing indices and no explicit
/// zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseVector<T> {
    entries: Vec<(usize, T)>,
}

impl<T> Default for SparseVector<T> {
    fn default() -> Self {
        SparseVector { entries: Vec::new() }
    }
}

impl<T: Scalar> SparseVector<T> {
    pub fn new(entries: Vec<(usize, T)>) -> Result<Self> {
        for w in entries.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::invalid("sparse indices must be strictly increasing"));
            }
        }
        if entries.iter().any(|(_, v)| v.is_zero()) {
            return Err(Error::invalid("sparse vector holds an explicit zero"));
        }
        Ok(SparseVector { entries })
    }

    /// Sorts by index, sums duplicates and drops zeros.
    pub fn from_unsorted(mut entries: Vec<(usize, T)>) -> Self {
        entries.sort_by_key(|e| e.0);
        let mut merged: Vec<(usize, T)> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == i => last.1 = last.1 + v,
                _ => merged.push((i, v)),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        SparseVector { entries: merged }
    }

    pub fn from_dense(values: &[T]) -> Self {
        SparseVector {
            entries: values.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, *v)).collect(),
        }
    }

    pub fn get(&self, index: usize) -> T {
        match self.entries.binary_search_by_key(&index, |e| e.0) {
            Ok(pos) => self.entries[pos].1,
            Err(_) => T::zero(),
        }
    }

    pub fn entries(&self) -> &[(usize, T)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|e| e.0)
    }

    pub fn dot(&self, dense: &[T]) -> T {
        self.entries.iter().fold(T::zero(), |acc, &(i, v)| acc + v * dense[i])
    }

    pub fn to_dense(&self, len: usize) -> Vec<T> {
        let mut out = vec![T::zero(); len];
        for &(i, v) in &self.entries {
            out[i] = v;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix<T> {
    rows: Vec<SparseVector<T>>,
    n_cols: usize,
}

impl<T: Scalar> FeatureMatrix<T> {
    pub fn new(rows: Vec<SparseVector<T>>, n_cols: usize) -> Result<Self> {
        if let Some(bad) = rows.iter().filter_map(SparseVector::max_index).find(|&i| i >= n_cols) {
            return Err(Error::invalid(format!("column index {bad} out of range for {n_cols} columns")));
        }
        Ok(FeatureMatrix { rows, n_cols })
    }

    pub fn from_dense(rows: &[Vec<T>]) -> Result<Self> {
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::invalid("ragged dense matrix"));
        }
        Ok(FeatureMatrix { rows: rows.iter().map(|r| SparseVector::from_dense(r)).collect(), n_cols })
    }

    pub fn rows(&self) -> &[SparseVector<T>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &SparseVector<T> {
        &self.rows[i]
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Rows at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Self {
        FeatureMatrix { rows: indices.iter().map(|&i| self.rows[i].clone()).collect(), n_cols: self.n_cols }
    }
}

fn count_map(terms: &[String], vocab: &Vocabulary) -> HashMap<usize, usize> {
    let mut counts = HashMap::new();
    for t in terms {
        if let Some(i) = vocab.index_of(t) {
            *counts.entry(i).or_insert(0) += 1;
        }
    }
    counts
}

/// Raw in-vocabulary term counts.
pub fn term_counts<T: Scalar>(doc: &[String], vocab: &Vocabulary) -> SparseVector<T> {
    let terms = vocab.doc_terms(doc);
    let entries = count_map(&terms, vocab).into_iter().map(|(i, c)| (i, T::of_usize(c))).collect();
    SparseVector::from_unsorted(entries)
}

/// `count / len(doc terms)` for in-vocabulary terms.
pub fn term_frequency<T: Real>(doc: &[String], vocab: &Vocabulary) -> SparseVector<T> {
    let terms = vocab.doc_terms(doc);
    if terms.is_empty() {
        return SparseVector::default();
    }
    let len = T::of_usize(terms.len());
    let entries = count_map(&terms, vocab).into_iter().map(|(i, c)| (i, T::of_usize(c) / len)).collect();
    SparseVector::from_unsorted(entries)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum IdfMode {
    #[default]
    NaturalLog,
    Log10,
    RawRatio,
}

impl IdfMode {
    pub fn name(self) -> &'static str {
        match self {
            IdfMode::NaturalLog => "natural_log",
            IdfMode::Log10 => "log10",
            IdfMode::RawRatio => "raw_ratio",
        }
    }
}

impl fmt::Display for IdfMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdfMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "natural_log" | "ln" => Ok(IdfMode::NaturalLog),
            "log10" => Ok(IdfMode::Log10),
            "raw_ratio" | "raw" => Ok(IdfMode::RawRatio),
            other => Err(Error::config(format!("unknown idf mode `{other}`"))),
        }
    }
}

pub fn idf_value<T: Real>(n_docs: usize, df: usize, mode: IdfMode) -> T {
    let ratio = T::of_usize(n_docs) / T::of_usize(df);
    match mode {
        IdfMode::NaturalLog => ratio.ln(),
        IdfMode::Log10 => ratio.log10(),
        IdfMode::RawRatio => ratio,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TfidfModel<T> {
    vocab: Vocabulary,
    idf: Vec<T>,
    mode: IdfMode,
}

pub fn fit_idf<T: Real>(vocab: Vocabulary, mode: IdfMode) -> TfidfModel<T> {
    let idf = (0..vocab.len()).map(|i| idf_value(vocab.n_docs(), vocab.df(i), mode)).collect();
    TfidfModel { vocab, idf, mode }
}

const MODEL_MAGIC: &str = "tweetsent-tfidf 1";

impl<T: Real> TfidfModel<T> {
    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn idf(&self) -> &[T] {
        &self.idf
    }

    pub fn mode(&self) -> IdfMode {
        self.mode
    }

    pub fn n_features(&self) -> usize {
        self.vocab.len()
    }

    pub fn transform_doc(&self, doc: &[String]) -> SparseVector<T> {
        let tf = term_frequency::<T>(doc, &self.vocab);
        SparseVector::from_unsorted(tf.entries().iter().map(|&(i, v)| (i, v * self.idf[i])).collect())
    }

    pub fn counts_doc(&self, doc: &[String]) -> SparseVector<T> {
        term_counts(doc, &self.vocab)
    }

    /// Versioned text form: a magic line, a `key=value` header line, then
    /// `term,index,df,idf` CSV rows.
    pub fn write_to<W: Write>(&self, mut sink: W) -> Result<()> {
        writeln!(sink, "{MODEL_MAGIC}")?;
        let c = self.vocab.config();
        writeln!(
            sink,
            "vocab_size={} n_docs={} idf_mode={} n_min={} n_max={} min_df={}",
            self.vocab.len(),
            self.vocab.n_docs(),
            self.mode,
            c.n_min,
            c.n_max,
            c.min_df
        )?;
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["term", "index", "df", "idf"])?;
        for (i, term) in self.vocab.terms().iter().enumerate() {
            w.write_record([term.clone(), i.to_string(), self.vocab.df(i).to_string(), self.idf[i].as_f64().to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(source: R) -> Result<Self> {
        let mut reader = BufReader::new(source);
        let mut line = String::new();
        reader.read_line(&mut line)?;
        if line.trim_end() != MODEL_MAGIC {
            return Err(Error::Format(format!("expected `{MODEL_MAGIC}` header")));
        }
        line.clear();
        reader.read_line(&mut line)?;
        let header: HashMap<&str, &str> = line.split_whitespace().filter_map(|kv| kv.split_once('=')).collect();
        let get = |k: &str| header.get(k).copied().ok_or_else(|| Error::Format(format!("header lacks `{k}`")));
        let num = |k: &str| -> Result<usize> { get(k)?.parse().map_err(|_| Error::Format(format!("bad `{k}`"))) };
        let mode: IdfMode = get("idf_mode")?.parse()?;
        let config = NgramConfig::new(num("n_min")?, num("n_max")?, num("min_df")?)?;
        let (size, n_docs) = (num("vocab_size")?, num("n_docs")?);

        let mut terms = Vec::with_capacity(size);
        let mut dfs = Vec::with_capacity(size);
        let mut idf = Vec::with_capacity(size);
        let mut rows = csv::Reader::from_reader(reader);
        for (expected, row) in rows.records().enumerate() {
            let row = row?;
            let bad = || Error::Format(format!("bad vocabulary row {expected}"));
            let index: usize = row[1].parse().map_err(|_| bad())?;
            let df: usize = row[2].parse().map_err(|_| bad())?;
            let weight: f64 = row[3].parse().map_err(|_| bad())?;
            if index != expected || df == 0 || df > n_docs {
                return Err(bad());
            }
            terms.push(row[0].to_owned());
            dfs.push(df);
            idf.push(T::of_f64(weight));
        }
        if terms.len() != size {
            return Err(Error::Format(format!("header says {size} terms, found {}", terms.len())));
        }
        Ok(TfidfModel { vocab: Vocabulary::from_parts(terms, dfs, n_docs, config), idf, mode })
    }
}

/// TF-IDF rows aligned with `docs`; documents are transformed in parallel.
pub fn tfidf_transform<T: Real>(docs: &[TokenSequence], model: &TfidfModel<T>) -> FeatureMatrix<T> {
    let rows = docs.par_iter().map(|d| model.transform_doc(d)).collect();
    FeatureMatrix { rows, n_cols: model.n_features() }
}

/// Raw-count rows aligned with `docs`.
pub fn count_transform<T: Real>(docs: &[TokenSequence], model: &TfidfModel<T>) -> FeatureMatrix<T> {
    let rows = docs.par_iter().map(|d| model.counts_doc(d)).collect();
    FeatureMatrix { rows, n_cols: model.n_features() }
}
