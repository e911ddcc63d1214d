//! Four binary classifiers behind one fit/score interface.
//!
//! Naive Bayes expects raw term counts; the tree, forest and logistic models
//! are meant for TF-IDF rows. Every model scores a sparse row with a
//! positive-class probability in `[0, 1]`, and [`predict_label`] thresholds
//! that score (`>=` is positive).

mod forest;
mod logistic;
mod naive_bayes;
mod tree;

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub use forest::{default_features_per_split, rf_fit, ForestConfig, RandomForestModel};
pub use logistic::{loss_and_gradient, lr_fit, sigmoid, LogisticConfig, LogisticModel};
pub use naive_bayes::{nb_fit, NaiveBayesModel};
pub use tree::{dt_fit, gini_impurity, DecisionTreeModel, TreeConfig, TreeNode};

use crate::error::{Error, Result};
use crate::features::{FeatureMatrix, SparseVector};
use crate::lexicon::{label_for_value, SentimentLabel};
use crate::scalar::Real;

pub(crate) fn check_training_data<T: Real>(x: &FeatureMatrix<T>, y: &[SentimentLabel]) -> Result<()> {
    if x.n_rows() != y.len() {
        return Err(Error::invalid(format!("{} feature rows but {} labels", x.n_rows(), y.len())));
    }
    if y.is_empty() {
        return Err(Error::invalid("no training samples"));
    }
    Ok(())
}

/// `[negatives, positives]`.
pub(crate) fn class_counts(y: &[SentimentLabel]) -> [usize; 2] {
    let pos = y.iter().filter(|l| l.is_positive()).count();
    [y.len() - pos, pos]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    NaiveBayes,
    DecisionTree,
    RandomForest,
    Logistic,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] =
        [ModelKind::NaiveBayes, ModelKind::DecisionTree, ModelKind::RandomForest, ModelKind::Logistic];

    pub fn short_name(self) -> &'static str {
        match self {
            ModelKind::NaiveBayes => "nb",
            ModelKind::DecisionTree => "dt",
            ModelKind::RandomForest => "rf",
            ModelKind::Logistic => "lr",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            ModelKind::NaiveBayes => "Naive Bayes",
            ModelKind::DecisionTree => "Decision Tree",
            ModelKind::RandomForest => "Random Forest",
            ModelKind::Logistic => "Logistic Regression",
        }
    }

    /// Whether the model consumes raw counts rather than TF-IDF.
    pub fn uses_counts(self) -> bool {
        self == ModelKind::NaiveBayes
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "nb" | "naive_bayes" => Ok(ModelKind::NaiveBayes),
            "dt" | "decision_tree" | "tree" => Ok(ModelKind::DecisionTree),
            "rf" | "random_forest" | "forest" => Ok(ModelKind::RandomForest),
            "lr" | "logistic" | "logistic_regression" => Ok(ModelKind::Logistic),
            other => Err(Error::config(format!("unknown model kind `{other}`"))),
        }
    }
}

/// Hyperparameters for one model kind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ModelConfig {
    NaiveBayes { alpha: f64 },
    DecisionTree(TreeConfig),
    RandomForest(ForestConfig),
    Logistic(LogisticConfig),
}

impl ModelConfig {
    pub fn default_for(kind: ModelKind) -> Self {
        match kind {
            ModelKind::NaiveBayes => ModelConfig::NaiveBayes { alpha: 1.0 },
            ModelKind::DecisionTree => ModelConfig::DecisionTree(TreeConfig::default()),
            ModelKind::RandomForest => ModelConfig::RandomForest(ForestConfig::default()),
            ModelKind::Logistic => ModelConfig::Logistic(LogisticConfig::default()),
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            ModelConfig::NaiveBayes { .. } => ModelKind::NaiveBayes,
            ModelConfig::DecisionTree(_) => ModelKind::DecisionTree,
            ModelConfig::RandomForest(_) => ModelKind::RandomForest,
            ModelConfig::Logistic(_) => ModelKind::Logistic,
        }
    }

    /// Same configuration with its random seed replaced (forest only).
    pub fn with_seed(mut self, seed: u64) -> Self {
        match &mut self {
            ModelConfig::RandomForest(c) => c.seed = seed,
            ModelConfig::Logistic(c) => c.seed = seed,
            _ => {}
        }
        self
    }

    pub fn fit<T: Real>(&self, x: &FeatureMatrix<T>, y: &[SentimentLabel]) -> Result<ClassifierModel<T>> {
        Ok(match *self {
            ModelConfig::NaiveBayes { alpha } => ClassifierModel::NaiveBayes(nb_fit(x, y, T::of_f64(alpha))?),
            ModelConfig::DecisionTree(c) => ClassifierModel::DecisionTree(dt_fit(x, y, c)?),
            ModelConfig::RandomForest(c) => ClassifierModel::RandomForest(rf_fit(x, y, c)?),
            ModelConfig::Logistic(c) => ClassifierModel::Logistic(lr_fit(x, y, c)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "model")]
pub enum ClassifierModel<T> {
    NaiveBayes(NaiveBayesModel<T>),
    DecisionTree(DecisionTreeModel<T>),
    RandomForest(RandomForestModel<T>),
    Logistic(LogisticModel<T>),
}

const FORMAT_NAME: &str = "tweetsent-model";
const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Envelope<M> {
    format: String,
    version: u32,
    #[serde(flatten)]
    model: M,
}

impl<T: Real> ClassifierModel<T> {
    pub fn kind(&self) -> ModelKind {
        match self {
            ClassifierModel::NaiveBayes(_) => ModelKind::NaiveBayes,
            ClassifierModel::DecisionTree(_) => ModelKind::DecisionTree,
            ClassifierModel::RandomForest(_) => ModelKind::RandomForest,
            ClassifierModel::Logistic(_) => ModelKind::Logistic,
        }
    }

    pub fn n_features(&self) -> usize {
        match self {
            ClassifierModel::NaiveBayes(m) => m.n_features(),
            ClassifierModel::DecisionTree(m) => m.n_features(),
            ClassifierModel::RandomForest(m) => m.n_features(),
            ClassifierModel::Logistic(m) => m.n_features(),
        }
    }

    /// Positive-class score in `[0, 1]`.
    pub fn predict_score(&self, x: &SparseVector<T>) -> Result<T> {
        if let Some(i) = x.max_index().filter(|&i| i >= self.n_features()) {
            return Err(Error::invalid(format!("feature index {i} out of range for {} features", self.n_features())));
        }
        let score = match self {
            ClassifierModel::NaiveBayes(m) => m.posterior(x),
            ClassifierModel::DecisionTree(m) => m.leaf_probability(x),
            ClassifierModel::RandomForest(m) => m.mean_probability(x),
            ClassifierModel::Logistic(m) => m.probability(x),
        };
        Ok(score.max(T::zero()).min(T::one()))
    }

    pub fn predict_label(&self, x: &SparseVector<T>, threshold: T) -> Result<SentimentLabel> {
        Ok(label_for_value(self.predict_score(x)?, threshold))
    }

    pub fn predict_scores(&self, x: &FeatureMatrix<T>) -> Result<Vec<T>> {
        x.rows().iter().map(|r| self.predict_score(r)).collect()
    }
}

impl<T: Real + Serialize + DeserializeOwned> ClassifierModel<T> {
    /// Versioned JSON. Floats are written in shortest round-trip form, so a
    /// reloaded model reproduces predictions bit for bit.
    pub fn write_json<W: Write>(&self, sink: W) -> Result<()> {
        let env = Envelope { format: FORMAT_NAME.into(), version: FORMAT_VERSION, model: self };
        serde_json::to_writer_pretty(sink, &env)?;
        Ok(())
    }

    pub fn read_json<R: Read>(source: R) -> Result<Self> {
        let env: Envelope<ClassifierModel<T>> = serde_json::from_reader(source)?;
        if env.format != FORMAT_NAME || env.version != FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported model format {} v{} (expected {FORMAT_NAME} v{FORMAT_VERSION})",
                env.format, env.version
            )));
        }
        Ok(env.model)
    }
}

/// Free-function forms.
pub fn predict_score<T: Real>(model: &ClassifierModel<T>, x: &SparseVector<T>) -> Result<T> {
    model.predict_score(x)
}

pub fn predict_label<T: Real>(model: &ClassifierModel<T>, x: &SparseVector<T>, threshold: T) -> Result<SentimentLabel> {
    model.predict_label(x, threshold)
}
