//! Flat `key = value` configuration. Keys carry section prefixes
//! (`model.kind`); a `[model]` header line prefixes the keys below it.
//! Every key can be overridden on the command line as `--model.kind rf`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use tweetsent_core::classifiers::{ForestConfig, LogisticConfig, ModelConfig, ModelKind, TreeConfig};
use tweetsent_core::corpus::{ColumnMap, Country, IngestOptions};
use tweetsent_core::evaluation::CvConfig;
use tweetsent_core::features::{IdfMode, NgramConfig};
use tweetsent_core::pipeline::FeatureConfig;
use tweetsent_core::seed::derive_seed;
use tweetsent_core::synthetic::SyntheticConfig;
use tweetsent_core::text::CleaningConfig;

use crate::failure::{Failure, Outcome};

/// Recognised keys with their defaults; an empty default means unset.
pub const KEYS: &[(&str, &str)] = &[
    ("seed", "42"),
    ("workers", ""),
    ("input.corpus", ""),
    ("input.text_column", "text"),
    ("input.id_column", "id"),
    ("input.author_column", "author"),
    ("input.created_at_column", "created_at"),
    ("input.country_column", "country"),
    ("input.default_country", ""),
    ("input.strict", "false"),
    ("input.positive", ""),
    ("input.negative", ""),
    ("input.stopwords", ""),
    ("synth.docs", "2000"),
    ("synth.seed", "2024"),
    ("filter.country", ""),
    ("text.clean", "lowercase,strip_urls,strip_mentions,strip_hashtag_marks,strip_digits,strip_special_chars,collapse_whitespace"),
    ("text.stemming", "true"),
    ("label.threshold", "0.1"),
    ("features.n_min", "1"),
    ("features.n_max", "1"),
    ("features.min_df", "2"),
    ("features.idf_mode", "natural_log"),
    ("model.kind", "rf"),
    ("model.alpha", "1.0"),
    ("model.max_depth", ""),
    ("model.min_samples_leaf", "1"),
    ("model.n_trees", "100"),
    ("model.features_per_split", ""),
    ("model.bootstrap", "true"),
    ("model.learning_rate", "0.1"),
    ("model.epochs", "500"),
    ("model.l2", "0.0001"),
    ("split.test_fraction", "0.3"),
    ("split.stratified", "true"),
    ("cv.enabled", "false"),
    ("cv.k", "5"),
    ("cv.stratified", "true"),
    ("compare.n_min", "1"),
    ("compare.n_max", "2"),
    ("report.top_k", "30"),
    ("output.dir", "out"),
];

const ALIASES: &[(&str, &str)] = &[("country", "filter.country"), ("out", "output.dir"), ("corpus", "input.corpus")];

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

fn canonical(key: &str) -> Outcome<String> {
    let key = key.trim();
    let key = ALIASES.iter().find(|(a, _)| *a == key).map_or(key, |(_, k)| k);
    if KEYS.iter().any(|(k, _)| *k == key) {
        Ok(key.to_string())
    } else {
        Err(Failure::usage(format!("unknown configuration key `{key}`")))
    }
}

fn unquote(v: &str) -> &str {
    let v = v.trim();
    v.strip_prefix('"').and_then(|s| s.strip_suffix('"')).unwrap_or(v)
}

impl Settings {
    pub fn parse(text: &str) -> Outcome<Self> {
        let mut settings = Settings::default();
        let mut section = String::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.trim().to_string();
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Failure::usage(format!("config line {}: expected `key = value`", no + 1)));
            };
            let value = value.split(" #").next().unwrap_or("");
            let key = if section.is_empty() { key.trim().to_string() } else { format!("{section}.{}", key.trim()) };
            settings.set(&key, unquote(value))?;
        }
        Ok(settings)
    }

    pub fn load(path: &Path) -> Outcome<Self> {
        let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
        Settings::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Outcome {
        self.values.insert(canonical(key)?, value.trim().to_string());
        Ok(())
    }

    /// Applies `--key value` and `--key=value` pairs.
    pub fn apply_overrides(&mut self, args: &[String]) -> Outcome {
        let mut it = args.iter();
        while let Some(arg) = it.next() {
            let Some(flag) = arg.strip_prefix("--") else {
                return Err(Failure::usage(format!("unexpected argument `{arg}`")));
            };
            match flag.split_once('=') {
                Some((k, v)) => self.set(k, v)?,
                None => {
                    let v = it.next().ok_or_else(|| Failure::usage(format!("`--{flag}` needs a value")))?;
                    self.set(flag, v)?
                }
            }
        }
        Ok(())
    }

    pub fn raw(&self, key: &str) -> &str {
        if let Some(v) = self.values.get(key) {
            return v;
        }
        KEYS.iter().find(|(k, _)| *k == key).map(|(_, d)| *d).expect("known key")
    }

    fn opt(&self, key: &str) -> Option<&str> {
        let v = self.raw(key);
        (!v.is_empty() && !v.eq_ignore_ascii_case("none") && !v.eq_ignore_ascii_case("auto")).then_some(v)
    }

    fn get<T: FromStr>(&self, key: &str) -> Outcome<T> {
        let v = self.raw(key);
        v.parse().map_err(|_| Failure::usage(format!("invalid value `{v}` for `{key}`")))
    }

    fn get_opt<T: FromStr>(&self, key: &str) -> Outcome<Option<T>> {
        match self.opt(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| Failure::usage(format!("invalid value `{v}` for `{key}`"))),
        }
    }

    fn flag(&self, key: &str) -> Outcome<bool> {
        match self.raw(key).to_ascii_lowercase().as_str() {
            "true" | "yes" | "1" | "on" => Ok(true),
            "false" | "no" | "0" | "off" => Ok(false),
            v => Err(Failure::usage(format!("invalid boolean `{v}` for `{key}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CorpusSource {
    File(PathBuf),
    /// The seeded synthetic corpus generated in process.
    Synthetic,
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub seed: u64,
    pub workers: Option<usize>,
    pub corpus: Option<CorpusSource>,
    pub columns: ColumnMap,
    pub ingest: IngestOptions,
    pub positive: Option<PathBuf>,
    pub negative: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub synth: SyntheticConfig,
    pub country: Option<Country>,
    pub cleaning: CleaningConfig,
    pub stemming: bool,
    pub label_threshold: f64,
    pub features: FeatureConfig,
    pub models: Vec<ModelKind>,
    pub alpha: f64,
    pub tree: TreeConfig,
    pub n_trees: usize,
    pub features_per_split: Option<usize>,
    pub bootstrap: bool,
    pub logistic: LogisticConfig,
    pub test_fraction: f64,
    pub stratified_split: bool,
    pub cv: Option<CvConfig>,
    pub compare: NgramConfig,
    pub top_k: usize,
    pub out_dir: PathBuf,
}

fn parse_models(list: &str) -> Outcome<Vec<ModelKind>> {
    if list.trim().eq_ignore_ascii_case("all") {
        return Ok(ModelKind::ALL.to_vec());
    }
    let mut kinds = Vec::new();
    for part in list.split(',').filter(|p| !p.trim().is_empty()) {
        let kind: ModelKind = part.parse()?;
        if !kinds.contains(&kind) {
            kinds.push(kind);
        }
    }
    if kinds.is_empty() {
        return Err(Failure::usage("`model.kind` names no model"));
    }
    Ok(kinds)
}

impl PipelineConfig {
    pub fn from_settings(s: &Settings) -> Outcome<Self> {
        let seed: u64 = s.get("seed")?;
        let corpus = s.opt("input.corpus").map(|v| {
            if v.eq_ignore_ascii_case("synthetic") {
                CorpusSource::Synthetic
            } else {
                CorpusSource::File(PathBuf::from(v))
            }
        });
        let columns = ColumnMap {
            text: s.raw("input.text_column").into(),
            id: s.raw("input.id_column").into(),
            author: s.raw("input.author_column").into(),
            created_at: s.raw("input.created_at_column").into(),
            country: s.raw("input.country_column").into(),
        };
        let ingest = IngestOptions {
            strict: s.flag("input.strict")?,
            default_country: s.opt("input.default_country").map(|c| c.parse().expect("infallible")),
        };
        let synth = SyntheticConfig { n_docs: s.get("synth.docs")?, seed: s.get("synth.seed")?, ..SyntheticConfig::default() };
        let country = s.opt("filter.country").filter(|c| !c.eq_ignore_ascii_case("all")).map(|c| c.parse().expect("infallible"));
        let ngram = NgramConfig::new(s.get("features.n_min")?, s.get("features.n_max")?, s.get("features.min_df")?)?;
        let idf_mode: IdfMode = s.raw("features.idf_mode").parse()?;
        let compare = NgramConfig::new(s.get("compare.n_min")?, s.get("compare.n_max")?, ngram.min_df())?;
        let tree = TreeConfig { max_depth: s.get_opt("model.max_depth")?, min_samples_leaf: s.get("model.min_samples_leaf")? };
        tree.validate()?;
        let logistic = LogisticConfig {
            learning_rate: s.get("model.learning_rate")?,
            epochs: s.get("model.epochs")?,
            l2: s.get("model.l2")?,
            seed: derive_seed(seed, "model.lr"),
        };
        let cv = if s.flag("cv.enabled")? {
            let k: usize = s.get("cv.k")?;
            if k < 2 {
                return Err(Failure::usage("`cv.k` must be at least 2"));
            }
            Some(CvConfig { k, seed: derive_seed(seed, "cv"), stratified: s.flag("cv.stratified")? })
        } else {
            None
        };
        let test_fraction: f64 = s.get("split.test_fraction")?;
        if !(test_fraction > 0.0 && test_fraction < 1.0) {
            return Err(Failure::usage("`split.test_fraction` must lie strictly between 0 and 1"));
        }
        let top_k: usize = s.get("report.top_k")?;
        if top_k == 0 {
            return Err(Failure::usage("`report.top_k` must be at least 1"));
        }
        let workers: Option<usize> = s.get_opt("workers")?;
        if workers == Some(0) {
            return Err(Failure::usage("`workers` must be at least 1"));
        }
        Ok(PipelineConfig {
            seed,
            workers,
            corpus,
            columns,
            ingest,
            positive: s.opt("input.positive").map(PathBuf::from),
            negative: s.opt("input.negative").map(PathBuf::from),
            stopwords: s.opt("input.stopwords").map(PathBuf::from),
            synth,
            country,
            cleaning: CleaningConfig::parse_list(s.raw("text.clean"))?,
            stemming: s.flag("text.stemming")?,
            label_threshold: s.get("label.threshold")?,
            features: FeatureConfig { ngram, idf_mode },
            models: parse_models(s.raw("model.kind"))?,
            alpha: s.get("model.alpha")?,
            tree,
            n_trees: s.get("model.n_trees")?,
            features_per_split: s.get_opt("model.features_per_split")?,
            bootstrap: s.flag("model.bootstrap")?,
            logistic,
            test_fraction,
            stratified_split: s.flag("split.stratified")?,
            cv,
            compare,
            top_k,
            out_dir: PathBuf::from(s.raw("output.dir")),
        })
    }

    /// Hyperparameters of `kind`, seeded from the master seed.
    pub fn model_config(&self, kind: ModelKind) -> ModelConfig {
        match kind {
            ModelKind::NaiveBayes => ModelConfig::NaiveBayes { alpha: self.alpha },
            ModelKind::DecisionTree => ModelConfig::DecisionTree(self.tree),
            ModelKind::RandomForest => ModelConfig::RandomForest(ForestConfig {
                n_trees: self.n_trees,
                features_per_split: self.features_per_split,
                bootstrap: self.bootstrap,
                seed: derive_seed(self.seed, "model.rf"),
                tree: self.tree,
            }),
            ModelKind::Logistic => ModelConfig::Logistic(self.logistic),
        }
    }

    pub fn split_seed(&self) -> u64 {
        derive_seed(self.seed, "split")
    }

    /// Input files named by the configuration that must exist.
    pub fn input_files(&self) -> Vec<&Path> {
        [&self.positive, &self.negative, &self.stopwords].into_iter().flatten().map(PathBuf::as_path).collect()
    }
}
