//! Multinomial naive Bayes over raw term counts.
//!
//! `P(t | c) = (count(t, c) + alpha) / (total(c) + alpha * V)` and priors
//! are class frequencies. With `alpha = 0` an unseen term gets likelihood
//! zero (log `-inf`), so any document containing it scores zero for that
//! class; if both classes are ruled out the score falls back to 0.5.

use serde::{Deserialize, Serialize};

use super::{check_training_data, class_counts};
use crate::error::{Error, Result};
use crate::features::{FeatureMatrix, SparseVector};
use crate::lexicon::SentimentLabel;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaiveBayesModel<T> {
    /// Indexed by class value (0 = negative, 1 = positive).
    log_prior: [T; 2],
    log_likelihood: [Vec<T>; 2],
    alpha: T,
    n_features: usize,
}

pub fn nb_fit<T: Real>(x: &FeatureMatrix<T>, y: &[SentimentLabel], alpha: T) -> Result<NaiveBayesModel<T>> {
    check_training_data(x, y)?;
    if !(alpha >= T::zero()) || !alpha.is_finite() {
        return Err(Error::config("smoothing alpha must be finite and non-negative"));
    }
    let [n0, n1] = class_counts(y);
    if n0 == 0 || n1 == 0 {
        return Err(Error::invalid("naive Bayes needs both classes in the training labels"));
    }
    let v = x.n_cols();
    let mut counts = [vec![T::zero(); v], vec![T::zero(); v]];
    for (row, label) in x.rows().iter().zip(y) {
        for &(j, value) in row.entries() {
            if value < T::zero() {
                return Err(Error::invalid("naive Bayes features must be non-negative counts"));
            }
            let c = &mut counts[label.value() as usize][j];
            *c = *c + value;
        }
    }
    let n = T::of_usize(y.len());
    let log_prior = [(T::of_usize(n0) / n).ln(), (T::of_usize(n1) / n).ln()];
    let log_likelihood = counts.map(|class_counts| {
        let total = class_counts.iter().fold(T::zero(), |a, &b| a + b);
        let denom = total + alpha * T::of_usize(v);
        class_counts
            .iter()
            .map(|&c| {
                let num = c + alpha;
                if num.is_zero() {
                    T::neg_infinity()
                } else {
                    (num / denom).ln()
                }
            })
            .collect()
    });
    Ok(NaiveBayesModel { log_prior, log_likelihood, alpha, n_features: v })
}

impl<T: Real> NaiveBayesModel<T> {
    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn prior(&self, class: SentimentLabel) -> T {
        self.log_prior[class.value() as usize].exp()
    }

    /// `P(t | class)` for every term.
    pub fn likelihoods(&self, class: SentimentLabel) -> Vec<T> {
        self.log_likelihood[class.value() as usize].iter().map(|l| l.exp()).collect()
    }

    /// Unnormalised log joint `log P(c) + sum_t x_t log P(t | c)`.
    pub fn log_joint(&self, x: &SparseVector<T>, class: SentimentLabel) -> T {
        let c = class.value() as usize;
        x.entries().iter().fold(self.log_prior[c], |acc, &(j, v)| acc + v * self.log_likelihood[c][j])
    }

    /// Normalised posterior of the positive class.
    pub fn posterior(&self, x: &SparseVector<T>) -> T {
        let lp1 = self.log_joint(x, SentimentLabel::Positive);
        let lp0 = self.log_joint(x, SentimentLabel::Negative);
        if lp1 == T::neg_infinity() && lp0 == T::neg_infinity() {
            return T::of_f64(0.5);
        }
        T::one() / (T::one() + (lp0 - lp1).exp())
    }
}
