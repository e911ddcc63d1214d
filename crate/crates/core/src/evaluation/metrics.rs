//! Confusion matrices, accuracy/precision/recall/F1 and binary
//! classification reports.
//!
//! Class 1 is the positive class. Precision is `TP / (TP + FP)` (share of
//! positive predictions that are right) and recall is `TP / (TP + FN)`
//! (share of actual positives found). A zero denominator yields 0 with the
//! matching `degenerate` flag set, never NaN.

use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::SentimentLabel;
use crate::scalar::{round_half_up, Scalar};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }

    /// The same outcomes seen with class 0 as the positive class.
    pub fn swapped(&self) -> Self {
        ConfusionMatrix { tp: self.tn, fp: self.fn_, fn_: self.fp, tn: self.tp }
    }

    pub fn add(&mut self, other: &ConfusionMatrix) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.fn_ += other.fn_;
        self.tn += other.tn;
    }

    pub fn record(&mut self, truth: SentimentLabel, predicted: SentimentLabel) {
        match (truth.is_positive(), predicted.is_positive()) {
            (true, true) => self.tp += 1,
            (false, true) => self.fp += 1,
            (true, false) => self.fn_ += 1,
            (false, false) => self.tn += 1,
        }
    }
}

pub fn confusion(y_true: &[SentimentLabel], y_pred: &[SentimentLabel]) -> Result<ConfusionMatrix> {
    if y_true.len() != y_pred.len() {
        return Err(Error::invalid(format!("{} true labels but {} predictions", y_true.len(), y_pred.len())));
    }
    if y_true.is_empty() {
        return Err(Error::invalid("confusion matrix of zero samples"));
    }
    let mut cm = ConfusionMatrix::default();
    for (&t, &p) in y_true.iter().zip(y_pred) {
        cm.record(t, p);
    }
    Ok(cm)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics<T> {
    pub accuracy: T,
    pub precision: T,
    pub recall: T,
    pub f1: T,
    pub precision_degenerate: bool,
    pub recall_degenerate: bool,
    pub f1_degenerate: bool,
}

fn ratio<T: Scalar>(num: usize, den: usize) -> (T, bool) {
    if den == 0 {
        (T::zero(), true)
    } else {
        (T::of_usize(num) / T::of_usize(den), false)
    }
}

/// Harmonic mean, 0 (flagged) when `p + r = 0`.
pub fn f1_score<T: Scalar>(precision: T, recall: T) -> (T, bool) {
    let sum = precision + recall;
    if sum.is_zero() {
        (T::zero(), true)
    } else {
        (T::two() * precision * recall / sum, false)
    }
}

pub fn metrics<T: Scalar>(cm: &ConfusionMatrix) -> Result<Metrics<T>> {
    if cm.total() == 0 {
        return Err(Error::invalid("metrics of an empty confusion matrix"));
    }
    let (accuracy, _) = ratio(cm.tp + cm.tn, cm.total());
    let (precision, precision_degenerate) = ratio(cm.tp, cm.tp + cm.fp);
    let (recall, recall_degenerate) = ratio(cm.tp, cm.tp + cm.fn_);
    let (f1, f1_degenerate) = f1_score(precision, recall);
    Ok(Metrics { accuracy, precision, recall, f1, precision_degenerate, recall_degenerate, f1_degenerate })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics<T> {
    pub precision: T,
    pub recall: T,
    pub f1: T,
    pub support: usize,
}

impl<T: Scalar> ClassMetrics<T> {
    /// F1 is derived from precision and recall.
    pub fn new(precision: T, recall: T, support: usize) -> Self {
        ClassMetrics { precision, recall, f1: f1_score(precision, recall).0, support }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Averages<T> {
    pub precision: T,
    pub recall: T,
    pub f1: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport<T> {
    pub positive: ClassMetrics<T>,
    pub negative: ClassMetrics<T>,
    pub macro_avg: Averages<T>,
    pub weighted_avg: Averages<T>,
    pub accuracy: T,
}

impl<T: Scalar> ClassificationReport<T> {
    /// Aggregates two per-class rows. Accuracy is taken as the weighted
    /// recall, which is exact for binary problems.
    pub fn from_class_metrics(positive: ClassMetrics<T>, negative: ClassMetrics<T>) -> Result<Self> {
        let total = positive.support + negative.support;
        if total == 0 {
            return Err(Error::invalid("classification report with zero total support"));
        }
        let two = T::two();
        let macro_avg = Averages {
            precision: (positive.precision + negative.precision) / two,
            recall: (positive.recall + negative.recall) / two,
            f1: (positive.f1 + negative.f1) / two,
        };
        let n = T::of_usize(total);
        let (wp, wn) = (T::of_usize(positive.support) / n, T::of_usize(negative.support) / n);
        let weigh = |a: T, b: T| a * wp + b * wn;
        let weighted_avg = Averages {
            precision: weigh(positive.precision, negative.precision),
            recall: weigh(positive.recall, negative.recall),
            f1: weigh(positive.f1, negative.f1),
        };
        Ok(ClassificationReport { positive, negative, macro_avg, weighted_avg, accuracy: weighted_avg.recall })
    }

    pub fn from_confusion(cm: &ConfusionMatrix) -> Result<Self> {
        let pos: Metrics<T> = metrics(cm)?;
        let neg: Metrics<T> = metrics(&cm.swapped())?;
        let mut report = Self::from_class_metrics(
            ClassMetrics { precision: pos.precision, recall: pos.recall, f1: pos.f1, support: cm.tp + cm.fn_ },
            ClassMetrics { precision: neg.precision, recall: neg.recall, f1: neg.f1, support: cm.tn + cm.fp },
        )?;
        // weighted recall is (tp + tn) / n for two classes; use the direct
        // quotient so the identity also holds bit for bit in floating point
        report.accuracy = pos.accuracy;
        report.weighted_avg.recall = pos.accuracy;
        Ok(report)
    }

    pub fn total_support(&self) -> usize {
        self.positive.support + self.negative.support
    }

    /// `class,precision,recall,f1,support` rows at 2 decimals, half up.
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let r = |x: T| format!("{:.2}", round_half_up(x.as_f64(), 2));
        let total = self.total_support().to_string();
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["class", "precision", "recall", "f1", "support"])?;
        for (name, m) in [("1", &self.positive), ("0", &self.negative)] {
            w.write_record([name.to_string(), r(m.precision), r(m.recall), r(m.f1), m.support.to_string()])?;
        }
        w.write_record(["accuracy".to_string(), String::new(), String::new(), r(self.accuracy), total.clone()])?;
        for (name, a) in [("macro avg", &self.macro_avg), ("weighted avg", &self.weighted_avg)] {
            w.write_record([name.to_string(), r(a.precision), r(a.recall), r(a.f1), total.clone()])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Plain-text table in the familiar classification-report layout.
    pub fn render_text(&self) -> String {
        let r = |x: T| format!("{:.2}", round_half_up(x.as_f64(), 2));
        let mut out = String::new();
        let _ = writeln!(out, "{:>14} {:>10} {:>10} {:>10} {:>10}", "", "precision", "recall", "f1-score", "support");
        let _ = writeln!(out);
        for (name, m) in [("1", &self.positive), ("0", &self.negative)] {
            let _ = writeln!(out, "{:>14} {:>10} {:>10} {:>10} {:>10}", name, r(m.precision), r(m.recall), r(m.f1), m.support);
        }
        let _ = writeln!(out);
        let total = self.total_support();
        let _ = writeln!(out, "{:>14} {:>10} {:>10} {:>10} {:>10}", "accuracy", "", "", r(self.accuracy), total);
        for (name, a) in [("macro avg", &self.macro_avg), ("weighted avg", &self.weighted_avg)] {
            let _ = writeln!(out, "{:>14} {:>10} {:>10} {:>10} {:>10}", name, r(a.precision), r(a.recall), r(a.f1), total);
        }
        out
    }
}
