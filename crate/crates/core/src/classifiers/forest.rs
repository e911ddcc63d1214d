//! Random forest: bagged CART trees with per-split feature subsampling.
//! Scores are the mean of the trees' leaf probabilities.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::check_training_data;
use super::tree::{Columns, DecisionTreeModel, Grower, TreeConfig};
use crate::error::{Error, Result};
use crate::features::{FeatureMatrix, SparseVector};
use crate::lexicon::SentimentLabel;
use crate::scalar::Real;
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub n_trees: usize,
    /// Candidate features per split; `None` means `ceil(sqrt(V))`.
    pub features_per_split: Option<usize>,
    pub bootstrap: bool,
    pub seed: u64,
    pub tree: TreeConfig,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig { n_trees: 100, features_per_split: None, bootstrap: true, seed: 0, tree: TreeConfig::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForestModel<T> {
    trees: Vec<DecisionTreeModel<T>>,
    tree_seeds: Vec<u64>,
    features_per_split: usize,
    config: ForestConfig,
}

impl<T: Real> RandomForestModel<T> {
    pub fn trees(&self) -> &[DecisionTreeModel<T>] {
        &self.trees
    }

    pub fn tree_seeds(&self) -> &[u64] {
        &self.tree_seeds
    }

    pub fn features_per_split(&self) -> usize {
        self.features_per_split
    }

    pub fn config(&self) -> &ForestConfig {
        &self.config
    }

    pub fn n_features(&self) -> usize {
        self.trees[0].n_features()
    }

    /// Builds a forest from already fitted trees.
    pub fn from_trees(trees: Vec<DecisionTreeModel<T>>, config: ForestConfig) -> Result<Self> {
        let Some(first) = trees.first() else {
            return Err(Error::invalid("a forest needs at least one tree"));
        };
        let n_features = first.n_features();
        if trees.iter().any(|t| t.n_features() != n_features) {
            return Err(Error::invalid("forest trees disagree on feature count"));
        }
        let fps = config.features_per_split.unwrap_or(n_features).clamp(1, n_features.max(1));
        Ok(RandomForestModel { tree_seeds: vec![0; trees.len()], trees, features_per_split: fps, config })
    }

    /// Mean of the per-tree leaf probabilities, summed in tree order.
    pub fn mean_probability(&self, x: &SparseVector<T>) -> T {
        let sum = self.trees.iter().fold(T::zero(), |acc, t| acc + t.leaf_probability(x));
        sum / T::of_usize(self.trees.len())
    }

    /// Fraction of trees voting positive at a 0.5 leaf threshold.
    pub fn vote_fraction(&self, x: &SparseVector<T>) -> T {
        let half = T::of_f64(0.5);
        let votes = self.trees.iter().filter(|t| t.leaf_probability(x) >= half).count();
        T::of_usize(votes) / T::of_usize(self.trees.len())
    }
}

pub fn default_features_per_split(n_features: usize) -> usize {
    ((n_features as f64).sqrt().ceil() as usize).max(1)
}

/// Trees are grown in parallel; each tree's random stream is derived from
/// `(seed, tree index)`, so the result does not depend on thread count.
pub fn rf_fit<T: Real>(x: &FeatureMatrix<T>, y: &[SentimentLabel], config: ForestConfig) -> Result<RandomForestModel<T>> {
    check_training_data(x, y)?;
    config.tree.validate()?;
    if config.n_trees == 0 {
        return Err(Error::config("a forest needs at least one tree"));
    }
    let v = x.n_cols();
    let fps = config.features_per_split.unwrap_or_else(|| default_features_per_split(v));
    if v > 0 && !(1..=v).contains(&fps) {
        return Err(Error::config(format!("features_per_split must lie in [1, {v}], got {fps}")));
    }
    let columns = Columns::new(x);
    let n = y.len();
    let tree_seeds: Vec<u64> = (0..config.n_trees).map(|t| seed::derive_indexed(config.seed, t as u64)).collect();
    let trees = tree_seeds
        .par_iter()
        .map(|&s| {
            let mut rng = seed::rng(s);
            let samples: Vec<(usize, usize)> = if config.bootstrap {
                let mut mult = vec![0usize; n];
                for _ in 0..n {
                    mult[rng.gen_range(0..n)] += 1;
                }
                mult.into_iter().enumerate().filter(|(_, m)| *m > 0).collect()
            } else {
                (0..n).map(|i| (i, 1)).collect()
            };
            Grower::new(&columns, y, config.tree, Some(fps), Some(rng)).grow(samples)
        })
        .collect();
    Ok(RandomForestModel { trees, tree_seeds, features_per_split: fps, config })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::tree::dt_fit;

    fn data() -> (FeatureMatrix<f64>, Vec<SentimentLabel>) {
        let mut rng = seed::rng(5);
        let mut rows = Vec::new();
        let mut y = Vec::new();
        for _ in 0..60 {
            let r: Vec<f64> = (0..6).map(|_| if rng.gen_bool(0.5) { rng.gen_range(0.0..1.0) } else { 0.0 }).collect();
            y.push(SentimentLabel::from_value((r[0] + r[3] > 0.6) as u8).unwrap());
            rows.push(r);
        }
        (FeatureMatrix::from_dense(&rows).unwrap(), y)
    }

    #[test]
    fn degenerate_forest_equals_tree() {
        let (x, y) = data();
        let cfg = ForestConfig { n_trees: 1, features_per_split: Some(6), bootstrap: false, seed: 9, tree: TreeConfig::default() };
        let forest = rf_fit(&x, &y, cfg).unwrap();
        let tree = dt_fit(&x, &y, TreeConfig::default()).unwrap();
        assert_eq!(forest.trees()[0].nodes(), tree.nodes());
    }

    #[test]
    fn seeded_fits_are_identical() {
        let (x, y) = data();
        let cfg = ForestConfig { n_trees: 7, seed: 3, ..Default::default() };
        let a = rf_fit(&x, &y, cfg).unwrap();
        let b = rf_fit(&x, &y, cfg).unwrap();
        assert_eq!(a, b);
        let c = rf_fit(&x, &y, ForestConfig { seed: 4, ..cfg }).unwrap();
        assert_ne!(a.trees(), c.trees());
        assert_eq!(a.features_per_split(), 3);
    }

    #[test]
    fn mean_of_tree_scores() {
        let x = FeatureMatrix::<f64>::from_dense(&[vec![0.0], vec![1.0]]).unwrap();
        let pos = dt_fit(&x, &[SentimentLabel::Positive; 2], TreeConfig::default()).unwrap();
        let neg = dt_fit(&x, &[SentimentLabel::Negative; 2], TreeConfig::default()).unwrap();
        let forest = RandomForestModel::from_trees(vec![pos.clone(), pos, neg], ForestConfig::default()).unwrap();
        let score = forest.mean_probability(&SparseVector::from_dense(&[1.0]));
        assert!((score - 2.0 / 3.0).abs() < 1e-15);
        assert!((forest.vote_fraction(&SparseVector::from_dense(&[1.0])) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn config_validation() {
        let (x, y) = data();
        assert!(rf_fit(&x, &y, ForestConfig { n_trees: 0, ..Default::default() }).is_err());
        assert!(rf_fit(&x, &y, ForestConfig { features_per_split: Some(7), ..Default::default() }).is_err());
        assert!(rf_fit(&x, &y, ForestConfig { features_per_split: Some(0), ..Default::default() }).is_err());
    }
}
