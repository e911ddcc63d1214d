//! ROC curves and trapezoidal AUC.
//!
//! Thresholds sweep the distinct scores from high to low; all samples
//! sharing a score enter together, which draws a diagonal segment for ties.
//! The area is accumulated in integer units of `1 / (2 P N)`, so it equals
//! the pairwise statistic `P(s+ > s-) + P(s+ = s-) / 2` up to one final
//! division.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::SentimentLabel;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint<T> {
    /// Score at or above which samples are called positive; `None` for the
    /// origin, where nothing is.
    pub threshold: Option<T>,
    pub fpr: T,
    pub tpr: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve<T> {
    pub points: Vec<RocPoint<T>>,
    pub auc: T,
}

pub fn roc_curve<T: Scalar>(y_true: &[SentimentLabel], scores: &[T]) -> Result<RocCurve<T>> {
    if y_true.len() != scores.len() {
        return Err(Error::invalid(format!("{} labels but {} scores", y_true.len(), scores.len())));
    }
    if scores.iter().any(|s| !s.as_f64().is_finite()) {
        return Err(Error::invalid("ROC scores must be finite"));
    }
    let positives = y_true.iter().filter(|l| l.is_positive()).count();
    let negatives = y_true.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::invalid("ROC/AUC needs both classes"));
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).expect("finite scores"));

    let (p, n) = (T::of_usize(positives), T::of_usize(negatives));
    let mut points = vec![RocPoint { threshold: None, fpr: T::zero(), tpr: T::zero() }];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut area2: u128 = 0;
    let mut i = 0;
    while i < order.len() {
        let threshold = scores[order[i]];
        let (prev_tp, prev_fp) = (tp, fp);
        while i < order.len() && scores[order[i]] == threshold {
            if y_true[order[i]].is_positive() {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        area2 += ((fp - prev_fp) as u128) * ((tp + prev_tp) as u128);
        points.push(RocPoint { threshold: Some(threshold), fpr: T::of_usize(fp) / n, tpr: T::of_usize(tp) / p });
    }
    let denom = 2 * (positives as u128) * (negatives as u128);
    let auc = scalar_from_u128::<T>(area2) / scalar_from_u128::<T>(denom);
    Ok(RocCurve { points, auc })
}

fn scalar_from_u128<T: Scalar>(v: u128) -> T {
    T::from_u128(v).expect("value representable in scalar type")
}

impl<T: Scalar> RocCurve<T> {
    /// `threshold,fpr,tpr` rows; the origin's threshold is written `inf`.
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["threshold", "fpr", "tpr"])?;
        for pt in &self.points {
            let t = pt.threshold.map_or_else(|| "inf".to_string(), |t| t.as_f64().to_string());
            w.write_record([t, pt.fpr.as_f64().to_string(), pt.tpr.as_f64().to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}
