//! CART decision tree with Gini impurity.
//!
//! Split search is exhaustive over the candidate features: thresholds are
//! midpoints between consecutive distinct values in the node, and samples
//! with `x <= threshold` go left. The best split minimises the weighted
//! child Gini, compared exactly in integer arithmetic; ties go to the lowest
//! feature index, then the lowest threshold. Growth stops at a pure node, at
//! `max_depth`, when `min_samples_leaf` cannot be met on both sides, or when
//! no candidate feature varies inside the node.

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::check_training_data;
use crate::error::{Error, Result};
use crate::features::{FeatureMatrix, SparseVector};
use crate::lexicon::SentimentLabel;
use crate::scalar::{Real, Scalar};

/// `1 - p0^2 - p1^2` for a pair of class counts.
pub fn gini_impurity<T: Scalar>(counts: [usize; 2]) -> Result<T> {
    let total = counts[0] + counts[1];
    if total == 0 {
        return Err(Error::invalid("Gini impurity of an empty node"));
    }
    let n = T::of_usize(total);
    let p0 = T::of_usize(counts[0]) / n;
    let p1 = T::of_usize(counts[1]) / n;
    Ok(T::one() - p0 * p0 - p1 * p1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeConfig {
    /// Maximum number of edges from root to leaf; `None` is unbounded.
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig { max_depth: None, min_samples_leaf: 1 }
    }
}

impl TreeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_samples_leaf == 0 {
            return Err(Error::config("min_samples_leaf must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode<T> {
    Leaf {
        /// Class counts (negative, positive), with bootstrap multiplicity.
        counts: [usize; 2],
        /// Fraction of the leaf's samples in the positive class.
        probability: T,
    },
    Split {
        feature: usize,
        threshold: T,
        left: usize,
        right: usize,
    },
}

/// Nodes are stored in an arena; index 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTreeModel<T> {
    nodes: Vec<TreeNode<T>>,
    n_features: usize,
    config: TreeConfig,
}

impl<T: Real> DecisionTreeModel<T> {
    pub fn nodes(&self) -> &[TreeNode<T>] {
        &self.nodes
    }

    pub fn root(&self) -> &TreeNode<T> {
        &self.nodes[0]
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn config(&self) -> &TreeConfig {
        &self.config
    }

    pub fn depth(&self) -> usize {
        fn go<T>(nodes: &[TreeNode<T>], i: usize) -> usize {
            match &nodes[i] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + go(nodes, *left).max(go(nodes, *right)),
            }
        }
        go(&self.nodes, 0)
    }

    pub fn leaves(&self) -> impl Iterator<Item = ([usize; 2], T)> + '_ {
        self.nodes.iter().filter_map(|n| match n {
            TreeNode::Leaf { counts, probability } => Some((*counts, *probability)),
            TreeNode::Split { .. } => None,
        })
    }

    /// Positive-class fraction of the leaf `x` falls into.
    pub fn leaf_probability(&self, x: &SparseVector<T>) -> T {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                TreeNode::Leaf { probability, .. } => return *probability,
                TreeNode::Split { feature, threshold, left, right } => {
                    i = if x.get(*feature) <= *threshold { *left } else { *right };
                }
            }
        }
    }
}

/// Column-major copy of the nonzero entries, shared by every tree of a
/// forest.
pub(crate) struct Columns<T> {
    cols: Vec<Vec<(usize, T)>>,
}

impl<T: Real> Columns<T> {
    pub(crate) fn new(x: &FeatureMatrix<T>) -> Self {
        let mut cols = vec![Vec::new(); x.n_cols()];
        for (s, row) in x.rows().iter().enumerate() {
            for &(j, v) in row.entries() {
                cols[j].push((s, v));
            }
        }
        Columns { cols }
    }

    fn value(&self, feature: usize, sample: usize) -> T {
        let col = &self.cols[feature];
        match col.binary_search_by_key(&sample, |e| e.0) {
            Ok(p) => col[p].1,
            Err(_) => T::zero(),
        }
    }
}

/// Split quality as the exact fraction `num / den` of
/// `sum_children (c0^2 + c1^2) / n_child`; larger is purer.
#[derive(Clone, Copy)]
struct Candidate<T> {
    num: u128,
    den: u128,
    feature: usize,
    threshold: T,
}

impl<T: Real> Candidate<T> {
    fn new(left: [usize; 2], right: [usize; 2], feature: usize, threshold: T) -> Self {
        let sq = |c: [usize; 2]| (c[0] as u128).pow(2) + (c[1] as u128).pow(2);
        let nl = (left[0] + left[1]) as u128;
        let nr = (right[0] + right[1]) as u128;
        Candidate { num: sq(left) * nr + sq(right) * nl, den: nl * nr, feature, threshold }
    }

    fn beats(&self, other: &Candidate<T>) -> bool {
        let lhs = self.num * other.den;
        let rhs = other.num * self.den;
        if lhs != rhs {
            return lhs > rhs;
        }
        if self.feature != other.feature {
            return self.feature < other.feature;
        }
        self.threshold < other.threshold
    }
}

pub(crate) struct Grower<'a, T> {
    columns: &'a Columns<T>,
    labels: &'a [SentimentLabel],
    config: TreeConfig,
    /// Candidate features per split; `None` evaluates all of them.
    max_features: Option<usize>,
    rng: Option<ChaCha8Rng>,
    multiplicity: Vec<usize>,
    nodes: Vec<TreeNode<T>>,
}

impl<'a, T: Real> Grower<'a, T> {
    pub(crate) fn new(
        columns: &'a Columns<T>,
        labels: &'a [SentimentLabel],
        config: TreeConfig,
        max_features: Option<usize>,
        rng: Option<ChaCha8Rng>,
    ) -> Self {
        Grower { columns, labels, config, max_features, rng, multiplicity: vec![0; labels.len()], nodes: Vec::new() }
    }

    /// Grows a tree over `samples`, given as (index, multiplicity) pairs.
    pub(crate) fn grow(mut self, samples: Vec<(usize, usize)>) -> DecisionTreeModel<T> {
        self.build(samples, 0);
        DecisionTreeModel { nodes: self.nodes, n_features: self.columns.cols.len(), config: self.config }
    }

    fn counts(&self, samples: &[(usize, usize)]) -> [usize; 2] {
        let mut c = [0, 0];
        for &(s, m) in samples {
            c[self.labels[s].value() as usize] += m;
        }
        c
    }

    fn build(&mut self, samples: Vec<(usize, usize)>, depth: usize) -> usize {
        let counts = self.counts(&samples);
        let total = counts[0] + counts[1];
        let id = self.nodes.len();
        let leaf = TreeNode::Leaf {
            counts,
            probability: T::of_usize(counts[1]) / T::of_usize(total.max(1)),
        };
        self.nodes.push(leaf);

        let pure = counts[0] == 0 || counts[1] == 0;
        let depth_reached = self.config.max_depth.is_some_and(|d| depth >= d);
        if pure || depth_reached || total < 2 * self.config.min_samples_leaf {
            return id;
        }
        let Some(best) = self.best_split(&samples, counts) else {
            return id;
        };
        let (left, right): (Vec<_>, Vec<_>) = samples
            .into_iter()
            .partition(|&(s, _)| self.columns.value(best.feature, s) <= best.threshold);
        let l = self.build(left, depth + 1);
        let r = self.build(right, depth + 1);
        self.nodes[id] = TreeNode::Split { feature: best.feature, threshold: best.threshold, left: l, right: r };
        id
    }

    fn best_split(&mut self, samples: &[(usize, usize)], counts: [usize; 2]) -> Option<Candidate<T>> {
        for &(s, m) in samples {
            self.multiplicity[s] = m;
        }
        let n_features = self.columns.cols.len();
        let mut order: Vec<usize> = (0..n_features).collect();
        if let (Some(_), Some(rng)) = (self.max_features, self.rng.as_mut()) {
            order.shuffle(rng);
        }
        let budget = self.max_features.unwrap_or(n_features);

        let mut best: Option<Candidate<T>> = None;
        let mut evaluated = 0;
        for feature in order {
            if evaluated >= budget {
                break;
            }
            // constant features do not use up the budget
            if self.scan_feature(feature, counts, &mut best) {
                evaluated += 1;
            }
        }
        for &(s, _) in samples {
            self.multiplicity[s] = 0;
        }
        best
    }

    /// Sweeps the thresholds of one feature. Returns false when the feature
    /// is constant inside the node.
    fn scan_feature(&self, feature: usize, counts: [usize; 2], best: &mut Option<Candidate<T>>) -> bool {
        // (value, class counts) groups, zero handled as an implicit group
        let mut nonzero: Vec<(T, usize, usize)> = self.columns.cols[feature]
            .iter()
            .filter(|(s, _)| self.multiplicity[*s] > 0)
            .map(|&(s, v)| (v, self.labels[s].value() as usize, self.multiplicity[s]))
            .collect();
        let mut zero = counts;
        for &(_, c, m) in &nonzero {
            zero[c] -= m;
        }
        nonzero.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite feature values"));

        let mut groups: Vec<(T, [usize; 2])> = Vec::new();
        let push = |v: T, c: usize, m: usize, groups: &mut Vec<(T, [usize; 2])>| match groups.last_mut() {
            Some((last, g)) if *last == v => g[c] += m,
            _ => {
                let mut g = [0, 0];
                g[c] = m;
                groups.push((v, g));
            }
        };
        let mut zero_pending = zero[0] + zero[1] > 0;
        for &(v, c, m) in &nonzero {
            if zero_pending && v > T::zero() {
                groups.push((T::zero(), zero));
                zero_pending = false;
            }
            push(v, c, m, &mut groups);
        }
        if zero_pending {
            groups.push((T::zero(), zero));
        }
        if groups.len() < 2 {
            return false;
        }

        let min_leaf = self.config.min_samples_leaf;
        let mut left = [0usize, 0usize];
        for w in 0..groups.len() - 1 {
            left[0] += groups[w].1[0];
            left[1] += groups[w].1[1];
            let right = [counts[0] - left[0], counts[1] - left[1]];
            if left[0] + left[1] < min_leaf || right[0] + right[1] < min_leaf {
                continue;
            }
            let (a, b) = (groups[w].0, groups[w + 1].0);
            let mut threshold = (a + b) / T::two();
            if threshold >= b {
                threshold = a;
            }
            let cand = Candidate::new(left, right, feature, threshold);
            if best.as_ref().is_none_or(|cur| cand.beats(cur)) {
                *best = Some(cand);
            }
        }
        true
    }
}

pub fn dt_fit<T: Real>(x: &FeatureMatrix<T>, y: &[SentimentLabel], config: TreeConfig) -> Result<DecisionTreeModel<T>> {
    check_training_data(x, y)?;
    config.validate()?;
    let columns = Columns::new(x);
    let samples = (0..y.len()).map(|s| (s, 1)).collect();
    Ok(Grower::new(&columns, y, config, None, None).grow(samples))
}
