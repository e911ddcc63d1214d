use num_rational::Ratio;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tweetsent_core::classifiers::*;
use tweetsent_core::features::{FeatureMatrix, SparseVector};
use tweetsent_core::SentimentLabel::{self, *};

fn labels(bits: &[u8]) -> Vec<SentimentLabel> {
    bits.iter().map(|&b| SentimentLabel::from_value(b).unwrap()).collect()
}

fn dense(rows: &[Vec<f64>]) -> FeatureMatrix<f64> {
    FeatureMatrix::from_dense(rows).unwrap()
}

// ---- naive Bayes ----

struct NbOracle {
    prior: [f64; 2],
    likelihood: [Vec<f64>; 2],
}

fn nb_oracle(rows: &[Vec<f64>], y: &[SentimentLabel], alpha: f64) -> NbOracle {
    let v = rows[0].len();
    let mut counts = [vec![0.0; v], vec![0.0; v]];
    let mut docs = [0.0; 2];
    for (row, l) in rows.iter().zip(y) {
        let c = l.value() as usize;
        docs[c] += 1.0;
        for j in 0..v {
            counts[c][j] += row[j];
        }
    }
    let n = y.len() as f64;
    let like = |c: usize| {
        let total: f64 = counts[c].iter().sum();
        counts[c].iter().map(|k| (k + alpha) / (total + alpha * v as f64)).collect::<Vec<f64>>()
    };
    NbOracle { prior: [docs[0] / n, docs[1] / n], likelihood: [like(0), like(1)] }
}

impl NbOracle {
    fn posterior(&self, x: &[f64]) -> f64 {
        let joint = |c: usize| {
            let mut p = self.prior[c];
            for (j, &k) in x.iter().enumerate() {
                p *= self.likelihood[c][j].powf(k);
            }
            p
        };
        let (p0, p1) = (joint(0), joint(1));
        p1 / (p0 + p1)
    }
}

#[test]
fn nb_hand_example() {
    // vocab [good, bad]; class 1 = "good good", class 0 = "bad"
    let x = dense(&[vec![2.0, 0.0], vec![0.0, 1.0]]);
    let m = nb_fit(&x, &labels(&[1, 0]), 1.0).unwrap();
    let l1 = m.likelihoods(Positive);
    let l0 = m.likelihoods(Negative);
    assert!((l1[0] - 0.75).abs() < 1e-15 && (l1[1] - 0.25).abs() < 1e-15);
    assert!((l0[0] - 1.0 / 3.0).abs() < 1e-15);
    assert!((m.prior(Positive) - 0.5).abs() < 1e-15);
    let good = SparseVector::from_dense(&[1.0, 0.0]);
    let p = m.posterior(&good);
    assert!((p - 0.375 / (0.375 + 1.0 / 6.0)).abs() < 1e-12);
    let model = ClassifierModel::NaiveBayes(m);
    assert_eq!(model.predict_label(&good, 0.5).unwrap(), Positive);
}

#[test]
fn nb_rejects_single_class() {
    assert!(nb_fit(&dense(&[vec![1.0]]), &labels(&[1]), 1.0).is_err());
}

proptest! {
    #[test]
    fn nb_matches_counting_oracle(
        n_docs in 2usize..=6,
        v in 1usize..=5,
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<f64>> = (0..n_docs).map(|_| (0..v).map(|_| rng.gen_range(0..4) as f64).collect()).collect();
        let mut bits: Vec<u8> = (0..n_docs).map(|_| rng.gen_range(0..2)).collect();
        bits[0] = 0;
        bits[1] = 1;
        let y = labels(&bits);
        let m = nb_fit(&dense(&rows), &y, 1.0).unwrap();
        let o = nb_oracle(&rows, &y, 1.0);
        for c in [Negative, Positive] {
            let ci = c.value() as usize;
            prop_assert!((m.prior(c) - o.prior[ci]).abs() <= 1e-12);
            let l = m.likelihoods(c);
            let sum: f64 = l.iter().sum();
            prop_assert!((sum - 1.0).abs() <= 1e-9);
            for j in 0..v {
                prop_assert!((l[j] - o.likelihood[ci][j]).abs() <= 1e-12);
            }
        }
        for row in &rows {
            let p = m.posterior(&SparseVector::from_dense(row));
            prop_assert!((p - o.posterior(row)).abs() <= 1e-12);
        }
    }
}

// ---- trees ----

#[test]
fn gini_examples() {
    assert_eq!(gini_impurity::<f64>([4, 0]).unwrap(), 0.0);
    assert_eq!(gini_impurity::<f64>([2, 2]).unwrap(), 0.5);
    assert_eq!(gini_impurity::<f64>([3, 1]).unwrap(), 0.375);
    assert_eq!(gini_impurity::<Ratio<i64>>([1, 2]).unwrap(), Ratio::new(4, 9));
    assert!(gini_impurity::<f64>([0, 0]).is_err());
}

#[test]
fn tree_examples() {
    let x = dense(&[vec![0.0], vec![1.0], vec![2.0], vec![3.0]]);
    let t = dt_fit(&x, &labels(&[0, 0, 1, 1]), TreeConfig::default()).unwrap();
    match t.root() {
        TreeNode::Split { feature, threshold, .. } => assert_eq!((*feature, *threshold), (0, 1.5)),
        leaf => panic!("expected a split, got {leaf:?}"),
    }
    assert!(t.leaves().all(|(c, _)| c[0] == 0 || c[1] == 0));

    let t = dt_fit(&x, &labels(&[1, 1, 1, 1]), TreeConfig::default()).unwrap();
    assert_eq!(t.nodes().len(), 1);
    assert_eq!(t.leaf_probability(&SparseVector::from_dense(&[9.0])), 1.0);

    let xor = dense(&[vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]]);
    let y = labels(&[0, 1, 1, 0]);
    let t = dt_fit(&xor, &y, TreeConfig { max_depth: Some(2), min_samples_leaf: 1 }).unwrap();
    assert!(t.depth() <= 2);
    for (row, l) in xor.rows().iter().zip(&y) {
        assert_eq!(t.leaf_probability(row), l.value() as f64);
    }
}

/// Best root split by exhaustive search in exact rational arithmetic,
/// ties resolved by lowest feature, then lowest threshold.
fn exhaustive_root(rows: &[Vec<f64>], y: &[SentimentLabel], min_leaf: usize) -> Option<(usize, f64, Ratio<i64>)> {
    let n = rows.len() as i64;
    let child = |k: [i64; 2]| {
        let m = k[0] + k[1];
        Ratio::new(m * m - k[0] * k[0] - k[1] * k[1], m)
    };
    let mut best: Option<(usize, f64, Ratio<i64>)> = None;
    for f in 0..rows[0].len() {
        let mut vals: Vec<f64> = rows.iter().map(|r| r[f]).collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vals.dedup();
        for w in vals.windows(2) {
            let thr = (w[0] + w[1]) / 2.0;
            let mut l = [0i64; 2];
            let mut r = [0i64; 2];
            for (row, lab) in rows.iter().zip(y) {
                let side = if row[f] <= thr { &mut l } else { &mut r };
                side[lab.value() as usize] += 1;
            }
            if ((l[0] + l[1]) as usize) < min_leaf || ((r[0] + r[1]) as usize) < min_leaf {
                continue;
            }
            let score = (child(l) + child(r)) / n;
            if best.as_ref().is_none_or(|b| score < b.2) {
                best = Some((f, thr, score));
            }
        }
    }
    best
}

fn weighted_child_gini(t: &DecisionTreeModel<f64>) -> Option<f64> {
    let TreeNode::Split { left, right, .. } = *t.root() else { return None };
    let counts = |i: usize| -> [usize; 2] {
        // sum leaf counts below node i
        let mut stack = vec![i];
        let mut c = [0, 0];
        while let Some(k) = stack.pop() {
            match &t.nodes()[k] {
                TreeNode::Leaf { counts, .. } => {
                    c[0] += counts[0];
                    c[1] += counts[1];
                }
                TreeNode::Split { left, right, .. } => stack.extend([*left, *right]),
            }
        }
        c
    };
    let (l, r) = (counts(left), counts(right));
    let n = (l[0] + l[1] + r[0] + r[1]) as f64;
    let g = |c: [usize; 2]| {
        let m = (c[0] + c[1]) as f64;
        (m / n) * gini_impurity::<f64>(c).unwrap()
    };
    Some(g(l) + g(r))
}

proptest! {
    #[test]
    fn root_split_matches_exhaustive_search(
        n in 2usize..=8,
        v in 1usize..=3,
        seed in any::<u64>(),
        min_leaf in 1usize..=2,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let grid = [0.0, 0.25, 0.5, 1.0, 2.0];
        let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..v).map(|_| grid[rng.gen_range(0..grid.len())]).collect()).collect();
        let y: Vec<SentimentLabel> = (0..n).map(|_| SentimentLabel::from_value(rng.gen_range(0..2)).unwrap()).collect();
        let tree = dt_fit(&dense(&rows), &y, TreeConfig { max_depth: None, min_samples_leaf: min_leaf }).unwrap();
        let pure = y.iter().all(|&l| l == y[0]);
        match (exhaustive_root(&rows, &y, min_leaf), tree.root()) {
            (Some((f, thr, score)), TreeNode::Split { feature, threshold, .. }) => {
                prop_assert!(!pure);
                prop_assert_eq!((*feature, *threshold), (f, thr));
                let expected = *score.numer() as f64 / *score.denom() as f64;
                prop_assert!((weighted_child_gini(&tree).unwrap() - expected).abs() <= 1e-12);
            }
            (None, TreeNode::Leaf { .. }) => {}
            (_, TreeNode::Leaf { .. }) => prop_assert!(pure),
            (None, split) => prop_assert!(false, "split {:?} where none is admissible", split),
        }
    }

    #[test]
    fn unbounded_tree_fits_consistent_data(n in 1usize..40, v in 1usize..4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut y = Vec::new();
        for _ in 0..n {
            let row: Vec<f64> = (0..v).map(|_| rng.gen_range(0..4) as f64 * 0.5).collect();
            let label = SentimentLabel::from_value(rng.gen_range(0..2)).unwrap();
            if rows.contains(&row) {
                continue;
            }
            rows.push(row);
            y.push(label);
        }
        let tree = dt_fit(&dense(&rows), &y, TreeConfig::default()).unwrap();
        for (row, l) in rows.iter().zip(&y) {
            prop_assert_eq!(tree.leaf_probability(&SparseVector::from_dense(row)), l.value() as f64);
        }
        prop_assert!(tree.leaves().all(|(c, _)| c[0] + c[1] > 0));
    }

    #[test]
    fn depth_limit_respected(n in 2usize..40, depth in 0usize..4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..3).map(|_| rng.gen::<f64>()).collect()).collect();
        let y: Vec<SentimentLabel> = (0..n).map(|_| SentimentLabel::from_value(rng.gen_range(0..2)).unwrap()).collect();
        let tree = dt_fit(&dense(&rows), &y, TreeConfig { max_depth: Some(depth), min_samples_leaf: 1 }).unwrap();
        prop_assert!(tree.depth() <= depth);
    }
}

// ---- forests ----

fn separable(n: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<SentimentLabel>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut y = Vec::new();
    for _ in 0..n {
        let row: Vec<f64> = (0..4).map(|_| rng.gen::<f64>()).collect();
        y.push(if row[0] + row[1] > 1.0 { Positive } else { Negative });
        rows.push(row);
    }
    (rows, y)
}

#[test]
fn degenerate_forest_is_a_tree() {
    let (rows, y) = separable(30, 3);
    let x = dense(&rows);
    let tree = dt_fit(&x, &y, TreeConfig::default()).unwrap();
    let cfg = ForestConfig { n_trees: 1, features_per_split: Some(4), bootstrap: false, seed: 9, tree: TreeConfig::default() };
    let forest = rf_fit(&x, &y, cfg).unwrap();
    let (test, _) = separable(50, 4);
    for row in &test {
        let r = SparseVector::from_dense(row);
        assert_eq!(forest.mean_probability(&r), tree.leaf_probability(&r));
    }
}

#[test]
fn mean_of_tree_scores() {
    let x = dense(&[vec![1.0], vec![2.0]]);
    let one = dt_fit(&x, &labels(&[1, 1]), TreeConfig::default()).unwrap();
    let zero = dt_fit(&x, &labels(&[0, 0]), TreeConfig::default()).unwrap();
    let forest = RandomForestModel::from_trees(vec![one.clone(), one, zero], ForestConfig::default()).unwrap();
    let p = forest.mean_probability(&SparseVector::from_dense(&[1.0]));
    assert!((p - 2.0 / 3.0).abs() < 1e-15);
}

#[test]
fn forest_is_seed_deterministic_across_pools() {
    let (rows, y) = separable(80, 5);
    let x = dense(&rows);
    let cfg = ForestConfig { n_trees: 25, seed: 77, ..ForestConfig::default() };
    let fit_with = |threads: usize| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| rf_fit(&x, &y, cfg).unwrap())
    };
    let a = fit_with(1);
    let b = fit_with(4);
    assert_eq!(a, b);
    let (test, _) = separable(40, 6);
    for row in &test {
        let r = SparseVector::from_dense(row);
        assert_eq!(a.mean_probability(&r).to_bits(), b.mean_probability(&r).to_bits());
    }
    let other = rf_fit(&x, &y, ForestConfig { seed: 78, ..cfg }).unwrap();
    assert_ne!(a, other);
}

#[test]
fn forest_generalizes_at_least_as_well_as_a_tree() {
    let (train, y) = separable(40, 11);
    let (test, y_test) = separable(20, 12);
    let x = dense(&train);
    let tree = dt_fit(&x, &y, TreeConfig::default()).unwrap();
    let forest = rf_fit(&x, &y, ForestConfig { n_trees: 15, seed: 1, ..ForestConfig::default() }).unwrap();
    let acc = |f: &dyn Fn(&SparseVector<f64>) -> f64| {
        test.iter().zip(&y_test).filter(|(r, l)| (f(&SparseVector::from_dense(r)) >= 0.5) == l.is_positive()).count()
    };
    let tree_hits = acc(&|r| tree.leaf_probability(r));
    let forest_hits = acc(&|r| forest.mean_probability(r));
    // recorded regression values for these seeds
    assert_eq!((forest_hits, tree_hits), (17, 15));
}

#[test]
fn features_per_split_bounds() {
    assert_eq!(default_features_per_split(1), 1);
    assert_eq!(default_features_per_split(10), 4);
    assert_eq!(default_features_per_split(16), 4);
    let (rows, y) = separable(10, 1);
    let bad = ForestConfig { features_per_split: Some(0), ..ForestConfig::default() };
    assert!(rf_fit(&dense(&rows), &y, bad).is_err());
    let bad = ForestConfig { n_trees: 0, ..ForestConfig::default() };
    assert!(rf_fit(&dense(&rows), &y, bad).is_err());
}

// ---- logistic regression ----

#[test]
fn logistic_examples() {
    let x = dense(&[vec![1.0]]);
    let (loss, grad, _) = loss_and_gradient(&[0.0], 0.0, &x, &labels(&[1]), 0.0);
    assert!((loss - std::f64::consts::LN_2).abs() < 1e-15);
    assert_eq!(grad, [-0.5]);

    let zero = lr_fit(&dense(&[vec![1.0], vec![0.0]]), &labels(&[1, 0]), LogisticConfig { epochs: 0, ..LogisticConfig::default() })
        .unwrap();
    assert!(zero.weights().iter().all(|&w| w == 0.0));
    assert_eq!(zero.probability(&SparseVector::from_dense(&[3.0])), 0.5);
    let m = LogisticModel::from_parameters(vec![0.0, 0.0], 0.0, LogisticConfig::default());
    assert_eq!(m.probability(&SparseVector::from_dense(&[5.0, -2.0])), 0.5);
}

fn objective(w: &[f64], b: f64, x: &FeatureMatrix<f64>, y: &[SentimentLabel], l2: f64) -> f64 {
    let n = y.len() as f64;
    let mut loss = 0.0;
    for (row, l) in x.rows().iter().zip(y) {
        let p = 1.0 / (1.0 + (-(row.dot(w) + b)).exp());
        loss -= if l.is_positive() { p.ln() } else { (1.0 - p).ln() };
    }
    loss / n + 0.5 * l2 * w.iter().map(|v| v * v).sum::<f64>()
}

#[test]
fn gradient_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let h = 1e-5;
    for _ in 0..10 {
        let v = rng.gen_range(1..6);
        let n = rng.gen_range(2..12);
        let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..v).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let y: Vec<SentimentLabel> = (0..n).map(|_| SentimentLabel::from_value(rng.gen_range(0..2)).unwrap()).collect();
        let x = dense(&rows);
        let w: Vec<f64> = (0..v).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let b = rng.gen_range(-1.0..1.0);
        let l2 = rng.gen_range(0.0..0.1);
        let (_, grad, grad_b) = loss_and_gradient(&w, b, &x, &y, l2);
        let mut numeric = Vec::with_capacity(v + 1);
        for j in 0..v {
            let (mut up, mut down) = (w.clone(), w.clone());
            up[j] += h;
            down[j] -= h;
            numeric.push((objective(&up, b, &x, &y, l2) - objective(&down, b, &x, &y, l2)) / (2.0 * h));
        }
        numeric.push((objective(&w, b + h, &x, &y, l2) - objective(&w, b - h, &x, &y, l2)) / (2.0 * h));
        let analytic: Vec<f64> = grad.iter().copied().chain([grad_b]).collect();
        for (a, f) in analytic.iter().zip(&numeric) {
            let rel = (a - f).abs() / a.abs().max(f.abs()).max(1e-8);
            assert!(rel <= 1e-6, "analytic {a} vs numeric {f}");
        }
    }
}

#[test]
fn separable_training_reaches_full_accuracy() {
    let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![(i as f64) / 20.0, 1.0 - (i as f64) / 20.0]).collect();
    let y: Vec<SentimentLabel> = (0..20).map(|i| if i >= 10 { Positive } else { Negative }).collect();
    let m = lr_fit(&dense(&rows), &y, LogisticConfig { learning_rate: 5.0, epochs: 500, ..LogisticConfig::default() }).unwrap();
    for (row, l) in rows.iter().zip(&y) {
        assert_eq!(m.probability(&SparseVector::from_dense(row)) >= 0.5, l.is_positive());
    }
    assert!(m.loss_history().windows(2).all(|w| w[1] <= w[0] + 1e-15));
}

#[test]
fn divergence_is_a_training_error() {
    let x = dense(&[vec![10.0], vec![10.0], vec![10.0]]);
    let err = lr_fit(&x, &labels(&[1, 1, 0]), LogisticConfig { learning_rate: 50.0, epochs: 50, l2: 0.0, seed: 0 }).unwrap_err();
    assert!(matches!(err, tweetsent_core::Error::Training { .. }));
}

// ---- shared interface ----

fn all_models(x: &FeatureMatrix<f64>, y: &[SentimentLabel]) -> Vec<ClassifierModel<f64>> {
    ModelKind::ALL
        .iter()
        .map(|&k| {
            let cfg = match ModelConfig::default_for(k) {
                ModelConfig::RandomForest(c) => ModelConfig::RandomForest(ForestConfig { n_trees: 7, ..c }),
                other => other,
            };
            cfg.fit(x, y).unwrap()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn scores_are_probabilities(seed in any::<u64>(), n in 2usize..25, v in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..v).map(|_| rng.gen_range(0..5) as f64).collect()).collect();
        let mut y: Vec<SentimentLabel> = (0..n).map(|_| SentimentLabel::from_value(rng.gen_range(0..2)).unwrap()).collect();
        y[0] = Positive;
        y[1] = Negative;
        let x = dense(&rows);
        for model in all_models(&x, &y) {
            for _ in 0..10 {
                let probe: Vec<f64> = (0..v).map(|_| rng.gen_range(0..50) as f64).collect();
                let s = model.predict_score(&SparseVector::from_dense(&probe)).unwrap();
                prop_assert!((0.0..=1.0).contains(&s), "{:?} gave {}", model.kind(), s);
            }
        }
    }
}

#[test]
fn label_threshold_boundary() {
    let m = ClassifierModel::Logistic(LogisticModel::from_parameters(vec![0.0], 0.0, LogisticConfig::default()));
    let x = SparseVector::from_dense(&[1.0]);
    assert_eq!(m.predict_label(&x, 0.5).unwrap(), Positive);
    assert_eq!(m.predict_label(&x, 0.51).unwrap(), Negative);
    assert!(m.predict_score(&SparseVector::from_dense(&[0.0, 1.0])).is_err());
}

#[test]
fn models_reload_bit_for_bit() {
    let (rows, y) = separable(40, 21);
    let x = dense(&rows);
    let (probe, _) = separable(30, 22);
    for model in all_models(&x, &y) {
        let mut buf = Vec::new();
        model.write_json(&mut buf).unwrap();
        let back = ClassifierModel::<f64>::read_json(&buf[..]).unwrap();
        assert_eq!(back.kind(), model.kind());
        for row in &probe {
            let r = SparseVector::from_dense(row);
            assert_eq!(back.predict_score(&r).unwrap().to_bits(), model.predict_score(&r).unwrap().to_bits());
        }
    }
    assert!(ClassifierModel::<f64>::read_json(&br#"{"format":"other","version":1}"#[..]).is_err());
}
