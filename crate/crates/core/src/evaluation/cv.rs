//! k-fold partitioning and cross-validation.
//!
//! Samples are shuffled with a seeded stream (per class when stratified,
//! positive class first) and dealt round-robin into folds, so fold sizes
//! differ by at most one and so do per-class counts. Cross-validation pools
//! the confusion matrices of all held-out folds.

use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::metrics::{ClassificationReport, ConfusionMatrix};
use super::roc::{roc_curve, RocCurve};
use crate::classifiers::ModelConfig;
use crate::corpus::LabeledDocument;
use crate::error::{Error, Result};
use crate::lexicon::{label_for_value, SentimentLabel};
use crate::pipeline::{FeatureConfig, FittedPipeline};
use crate::scalar::Real;
use crate::seed;
use crate::text::TokenSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CvConfig {
    pub k: usize,
    pub seed: u64,
    pub stratified: bool,
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig { k: 5, seed: 0, stratified: true }
    }
}

/// Index folds, each sorted ascending.
pub fn kfold_partition(labels: &[SentimentLabel], config: &CvConfig) -> Result<Vec<Vec<usize>>> {
    let n = labels.len();
    if config.k < 2 {
        return Err(Error::config(format!("k must be at least 2, got {}", config.k)));
    }
    if config.k > n {
        return Err(Error::invalid(format!("k = {} exceeds the {n} samples", config.k)));
    }
    let mut rng = seed::rng(config.seed);
    let mut order = Vec::with_capacity(n);
    if config.stratified {
        for class in [SentimentLabel::Positive, SentimentLabel::Negative] {
            let mut members: Vec<usize> = (0..n).filter(|&i| labels[i] == class).collect();
            members.shuffle(&mut rng);
            order.extend(members);
        }
    } else {
        order.extend(0..n);
        order.shuffle(&mut rng);
    }
    let mut folds = vec![Vec::with_capacity(n / config.k + 1); config.k];
    for (pos, idx) in order.into_iter().enumerate() {
        folds[pos % config.k].push(idx);
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(folds)
}

/// Held-out predictions of one fitted model.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation<T> {
    pub truth: Vec<SentimentLabel>,
    pub scores: Vec<T>,
    pub confusion: ConfusionMatrix,
    pub report: ClassificationReport<T>,
    /// Absent when the evaluated samples hold a single class.
    pub roc: Option<RocCurve<T>>,
}

impl<T: Real> Evaluation<T> {
    pub fn from_scores(truth: Vec<SentimentLabel>, scores: Vec<T>, threshold: T) -> Result<Self> {
        let mut confusion = ConfusionMatrix::default();
        for (t, &s) in truth.iter().zip(&scores) {
            confusion.record(*t, label_for_value(s, threshold));
        }
        let report = ClassificationReport::from_confusion(&confusion)?;
        let both = truth.iter().any(|l| l.is_positive()) && truth.iter().any(|l| !l.is_positive());
        let roc = if both { Some(roc_curve(&truth, &scores)?) } else { None };
        Ok(Evaluation { truth, scores, confusion, report, roc })
    }
}

/// Fits on `train`, scores `test`, thresholds at 0.5.
pub fn holdout_evaluate<T: Real>(
    train: &[LabeledDocument],
    test: &[LabeledDocument],
    features: &FeatureConfig,
    model: &ModelConfig,
) -> Result<(FittedPipeline<T>, Evaluation<T>)> {
    let tokens = |d: &[LabeledDocument]| d.iter().map(|d| d.tokens.clone()).collect::<Vec<TokenSequence>>();
    let labels = |d: &[LabeledDocument]| d.iter().map(|d| d.label).collect::<Vec<_>>();
    let fitted = FittedPipeline::fit(&tokens(train), &labels(train), features, model)?;
    let scores = fitted.scores(&tokens(test))?;
    let eval = Evaluation::from_scores(labels(test), scores, T::of_f64(0.5))?;
    Ok((fitted, eval))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldResult<T> {
    pub test_indices: Vec<usize>,
    pub evaluation: Evaluation<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvOutcome<T> {
    pub folds: Vec<FoldResult<T>>,
    pub pooled: ConfusionMatrix,
    pub report: ClassificationReport<T>,
    /// ROC over every out-of-fold score.
    pub roc: Option<RocCurve<T>>,
    pub warnings: Vec<String>,
}

/// Each fold fits its own vocabulary and model on the other folds. Folds
/// run in parallel; the forest seed of fold `i` is derived from the
/// configured seed and `i`.
pub fn cross_validate<T: Real>(
    docs: &[LabeledDocument],
    features: &FeatureConfig,
    model: &ModelConfig,
    cv: &CvConfig,
) -> Result<CvOutcome<T>> {
    let labels: Vec<SentimentLabel> = docs.iter().map(|d| d.label).collect();
    let pos = labels.iter().filter(|l| l.is_positive()).count();
    if pos == 0 || pos == labels.len() {
        return Err(Error::invalid("cross-validation needs both classes"));
    }
    let folds = kfold_partition(&labels, cv)?;
    let mut warnings = Vec::new();
    if cv.stratified && pos.min(labels.len() - pos) < cv.k {
        warnings.push(format!("a class has fewer members than k = {}; some folds lack it", cv.k));
    }
    let base_seed = match model {
        ModelConfig::RandomForest(c) => c.seed,
        _ => cv.seed,
    };

    let results: Vec<Result<FoldResult<T>>> = folds
        .par_iter()
        .enumerate()
        .map(|(i, test_idx)| {
            let mut in_test = vec![false; docs.len()];
            for &j in test_idx {
                in_test[j] = true;
            }
            let train: Vec<LabeledDocument> = (0..docs.len()).filter(|&j| !in_test[j]).map(|j| docs[j].clone()).collect();
            let test: Vec<LabeledDocument> = test_idx.iter().map(|&j| docs[j].clone()).collect();
            let fold_model = model.with_seed(seed::derive_indexed(base_seed, i as u64));
            let (_, evaluation) = holdout_evaluate(&train, &test, features, &fold_model)?;
            Ok(FoldResult { test_indices: test_idx.clone(), evaluation })
        })
        .collect();
    let folds = results.into_iter().collect::<Result<Vec<_>>>()?;

    let mut pooled = ConfusionMatrix::default();
    let mut truth = Vec::with_capacity(docs.len());
    let mut scores = Vec::with_capacity(docs.len());
    for (i, f) in folds.iter().enumerate() {
        pooled.add(&f.evaluation.confusion);
        truth.extend_from_slice(&f.evaluation.truth);
        scores.extend_from_slice(&f.evaluation.scores);
        if f.evaluation.roc.is_none() {
            warnings.push(format!("fold {i} holds a single class; its ROC is omitted"));
        }
    }
    let report = ClassificationReport::from_confusion(&pooled)?;
    let roc = Some(roc_curve(&truth, &scores)?);
    Ok(CvOutcome { folds, pooled, report, roc, warnings })
}
