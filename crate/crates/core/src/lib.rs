//! Lexicon-labelled tweet sentiment analysis.
//!
//! The crate covers the whole offline pipeline: CSV ingestion of tweet
//! exports, regex-style cleaning and Porter stemming, opinion-lexicon
//! polarity labelling, word and n-gram TF-IDF features, four classical
//! binary classifiers written from scratch, and k-fold evaluation with
//! classification reports and ROC/AUC.
//!
//! Numeric code is generic over the scalar type (see [`scalar`]). The
//! aliases at the crate root fix that parameter to `f64`, which is what the
//! CLI and the persisted artifacts use.

pub mod classifiers;
pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod features;
pub mod lexicon;
pub mod pipeline;
pub mod report;
pub mod scalar;
pub mod seed;
pub mod synthetic;
pub mod text;

pub use error::{Error, Result};
pub use lexicon::SentimentLabel;
pub use scalar::{Real, Scalar};

/// Sparse feature row over `f64`.
pub type SparseVector = features::SparseVector<f64>;
/// Row-major sparse feature matrix over `f64`.
pub type FeatureMatrix = features::FeatureMatrix<f64>;
/// Fitted TF-IDF weights over `f64`.
pub type TfidfModel = features::TfidfModel<f64>;
/// Per-document polarity counts and normalised score over `f64`.
pub type SentimentScore = lexicon::SentimentScore<f64>;
/// Any of the four fitted classifiers over `f64`.
pub type ClassifierModel = classifiers::ClassifierModel<f64>;
/// Multinomial naive Bayes over `f64`.
pub type NaiveBayesModel = classifiers::NaiveBayesModel<f64>;
/// CART decision tree over `f64`.
pub type DecisionTreeModel = classifiers::DecisionTreeModel<f64>;
/// Bagged random forest over `f64`.
pub type RandomForestModel = classifiers::RandomForestModel<f64>;
/// Logistic regression over `f64`.
pub type LogisticModel = classifiers::LogisticModel<f64>;
/// Binary classification report over `f64`.
pub type ClassificationReport = evaluation::ClassificationReport<f64>;
/// ROC curve over `f64`.
pub type RocCurve = evaluation::RocCurve<f64>;
