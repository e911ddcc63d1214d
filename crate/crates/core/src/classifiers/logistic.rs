//! Logistic regression trained by full-batch gradient descent on
//! `mean cross-entropy + (l2 / 2) * ||w||^2` (the bias is not penalised),
//! starting from all-zero parameters.

use serde::{Deserialize, Serialize};

use super::check_training_data;
use crate::error::{Error, Result};
use crate::features::{FeatureMatrix, SparseVector};
use crate::lexicon::SentimentLabel;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
    /// Recorded for provenance. Descent from zero is deterministic and
    /// draws no random numbers.
    pub seed: u64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        LogisticConfig { learning_rate: 0.1, epochs: 500, l2: 1e-4, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel<T> {
    weights: Vec<T>,
    bias: T,
    config: LogisticConfig,
    /// Loss before each update, one entry per epoch.
    #[serde(skip, default = "Vec::new")]
    loss_history: Vec<T>,
}

pub fn sigmoid<T: Real>(z: T) -> T {
    if z >= T::zero() {
        T::one() / (T::one() + (-z).exp())
    } else {
        let e = z.exp();
        e / (T::one() + e)
    }
}

/// `log(1 + exp(z))` without overflow.
fn softplus<T: Real>(z: T) -> T {
    z.max(T::zero()) + (-z.abs()).exp().ln_1p()
}

/// Objective value and its gradient with respect to (weights, bias).
pub fn loss_and_gradient<T: Real>(
    weights: &[T],
    bias: T,
    x: &FeatureMatrix<T>,
    y: &[SentimentLabel],
    l2: T,
) -> (T, Vec<T>, T) {
    let n = T::of_usize(y.len());
    let mut loss = T::zero();
    let mut grad = vec![T::zero(); weights.len()];
    let mut grad_b = T::zero();
    for (row, label) in x.rows().iter().zip(y) {
        let z = row.dot(weights) + bias;
        let target = if label.is_positive() { T::one() } else { T::zero() };
        loss = loss + softplus(z) - target * z;
        let residual = sigmoid(z) - target;
        for &(j, v) in row.entries() {
            grad[j] = grad[j] + residual * v;
        }
        grad_b = grad_b + residual;
    }
    let half = T::of_f64(0.5);
    let norm_sq = weights.iter().fold(T::zero(), |a, &w| a + w * w);
    let loss = loss / n + half * l2 * norm_sq;
    for (g, &w) in grad.iter_mut().zip(weights) {
        *g = *g / n + l2 * w;
    }
    (loss, grad, grad_b / n)
}

pub fn lr_fit<T: Real>(x: &FeatureMatrix<T>, y: &[SentimentLabel], config: LogisticConfig) -> Result<LogisticModel<T>> {
    check_training_data(x, y)?;
    if !(config.learning_rate > 0.0 && config.learning_rate.is_finite()) || !(config.l2 >= 0.0) {
        return Err(Error::config("learning rate must be positive and l2 non-negative"));
    }
    for row in x.rows() {
        if row.entries().iter().any(|(_, v)| !v.is_finite()) {
            return Err(Error::invalid("non-finite feature value"));
        }
    }
    let lr = T::of_f64(config.learning_rate);
    let l2 = T::of_f64(config.l2);
    let mut weights = vec![T::zero(); x.n_cols()];
    let mut bias = T::zero();
    let mut history = Vec::with_capacity(config.epochs);
    let limit = T::of_f64(10.0);
    for epoch in 0..config.epochs {
        let (loss, grad, grad_b) = loss_and_gradient(&weights, bias, x, y, l2);
        if !loss.is_finite() {
            return Err(Error::Training { epoch, message: "loss is not finite".into() });
        }
        if let Some(&initial) = history.first() {
            if loss > initial * limit {
                return Err(Error::Training { epoch, message: "loss diverged past 10x its initial value".into() });
            }
        }
        history.push(loss);
        for (w, g) in weights.iter_mut().zip(&grad) {
            *w = *w - lr * *g;
        }
        bias = bias - lr * grad_b;
    }
    if weights.iter().any(|w| !w.is_finite()) || !bias.is_finite() {
        return Err(Error::Training { epoch: config.epochs, message: "parameters are not finite".into() });
    }
    Ok(LogisticModel { weights, bias, config, loss_history: history })
}

impl<T: Real> LogisticModel<T> {
    pub fn from_parameters(weights: Vec<T>, bias: T, config: LogisticConfig) -> Self {
        LogisticModel { weights, bias, config, loss_history: Vec::new() }
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn bias(&self) -> T {
        self.bias
    }

    pub fn config(&self) -> &LogisticConfig {
        &self.config
    }

    pub fn loss_history(&self) -> &[T] {
        &self.loss_history
    }

    pub fn n_features(&self) -> usize {
        self.weights.len()
    }

    pub fn probability(&self, x: &SparseVector<T>) -> T {
        sigmoid(x.dot(&self.weights) + self.bias)
    }
}
