//! Metrics, classification reports, ROC/AUC and cross-validation.

mod cv;
mod metrics;
mod roc;

pub use cv::{cross_validate, holdout_evaluate, kfold_partition, CvConfig, CvOutcome, Evaluation, FoldResult};
pub use metrics::{
    confusion, f1_score, metrics, Averages, ClassMetrics, ClassificationReport, ConfusionMatrix, Metrics,
};
pub use roc::{roc_curve, RocCurve, RocPoint};
