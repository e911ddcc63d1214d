//! Feature extraction plus classifier as one fitted unit. The vocabulary is
//! always fitted on the training documents only.

use crate::classifiers::{ClassifierModel, ModelConfig, ModelKind};
use crate::error::Result;
use crate::features::{build_vocabulary, count_transform, fit_idf, tfidf_transform, FeatureMatrix, IdfMode, NgramConfig, TfidfModel};
use crate::lexicon::SentimentLabel;
use crate::scalar::Real;
use crate::text::TokenSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FeatureConfig {
    pub ngram: NgramConfig,
    pub idf_mode: IdfMode,
}

/// Count rows for naive Bayes, TF-IDF rows for everything else.
pub fn featurize<T: Real>(kind: ModelKind, features: &TfidfModel<T>, docs: &[TokenSequence]) -> FeatureMatrix<T> {
    if kind.uses_counts() {
        count_transform(docs, features)
    } else {
        tfidf_transform(docs, features)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FittedPipeline<T> {
    pub features: TfidfModel<T>,
    pub model: ClassifierModel<T>,
}

impl<T: Real> FittedPipeline<T> {
    pub fn fit(
        docs: &[TokenSequence],
        labels: &[SentimentLabel],
        features: &FeatureConfig,
        model: &ModelConfig,
    ) -> Result<Self> {
        let vocab = build_vocabulary(docs, &features.ngram)?;
        let tfidf = fit_idf::<T>(vocab, features.idf_mode);
        let x = featurize(model.kind(), &tfidf, docs);
        let fitted = model.fit(&x, labels)?;
        Ok(FittedPipeline { features: tfidf, model: fitted })
    }

    pub fn scores(&self, docs: &[TokenSequence]) -> Result<Vec<T>> {
        let x = featurize(self.model.kind(), &self.features, docs);
        self.model.predict_scores(&x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::TreeConfig;

    #[test]
    fn fits_and_scores_unseen_docs() {
        let docs: Vec<TokenSequence> =
            ["good price", "good deal", "bad bill", "bad price"].iter().map(|s| TokenSequence::from_strings([s])).collect();
        let y = [SentimentLabel::Positive, SentimentLabel::Positive, SentimentLabel::Negative, SentimentLabel::Negative];
        let cfg = FeatureConfig { ngram: NgramConfig::words(1), idf_mode: IdfMode::NaturalLog };
        for model in [ModelConfig::NaiveBayes { alpha: 1.0 }, ModelConfig::DecisionTree(TreeConfig::default())] {
            let p = FittedPipeline::<f64>::fit(&docs, &y, &cfg, &model).unwrap();
            let s = p.scores(&[TokenSequence::from_strings(["good"]), TokenSequence::from_strings(["unknown words"])]).unwrap();
            assert!(s[0] > 0.5, "{model:?}");
            assert!((0.0..=1.0).contains(&s[1]));
        }
    }
}
