//! Random forest classifier built from scratch.
//!
//! Bagged CART trees: each tree trains on a bootstrap resample, each split
//! considers a random feature subset and minimizes weighted Gini impurity,
//! prediction is the majority vote over trees. Everything is deterministic
//! given the seed; trees draw from per-tree counter-mode RNG streams so
//! parallel training cannot reorder randomness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::{FeatureTable, LabelScheme};

/// Bumped when the serialized model layout changes.
pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub n_trees: usize,
    /// Features sampled per split; None picks floor(sqrt(p)).
    pub n_features_per_split: Option<usize>,
    pub min_leaf: usize,
    pub seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig {
            n_trees: 100,
            n_features_per_split: None,
            min_leaf: 1,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        counts: Vec<u64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<Node>,
}

impl DecisionTree {
    /// Class this tree votes for: leaf majority, ties toward the earlier
    /// class. Rows with value <= threshold descend left.
    pub fn vote(&self, row: &[f64]) -> usize {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if row[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
                Node::Leaf { counts } => return argmax(counts),
            }
        }
    }
}

fn argmax(counts: &[u64]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub format_version: u32,
    /// Class names in label order; predictions index into this list.
    pub classes: Vec<String>,
    pub n_features: usize,
    pub n_features_per_split: usize,
    pub min_leaf: usize,
    pub seed: u64,
    pub trees: Vec<DecisionTree>,
    /// Mean Gini decrease per feature (averaged over trees).
    pub importance: Vec<f64>,
    /// Mean per-tree sum of split impurity decreases; equals the importance
    /// total up to rounding.
    pub total_impurity_decrease: f64,
}

/// One bootstrap resample: n draws with replacement from 0..n.
pub fn bootstrap_indices(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..n)).collect()
}

fn gini(counts: &[u64], n: usize) -> f64 {
    let nf = n as f64;
    let mut acc = 0.0;
    for &c in counts {
        let p = c as f64 / nf;
        acc += p * p;
    }
    1.0 - acc
}

fn sample_features(rng: &mut ChaCha8Rng, p: usize, mtry: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..p).collect();
    for i in 0..mtry {
        let j = rng.gen_range(i..p);
        idx.swap(i, j);
    }
    idx.truncate(mtry);
    // Candidates are scanned in index order so impurity ties break toward
    // the lower feature index.
    idx.sort_unstable();
    idx
}

struct TreeBuild {
    tree: DecisionTree,
    per_feature: Vec<f64>,
    total: f64,
}

fn build_tree(
    cols: &[Vec<f64>],
    labels: &[usize],
    n_classes: usize,
    boot_rows: Vec<usize>,
    mtry: usize,
    min_leaf: usize,
    rng: &mut ChaCha8Rng,
) -> TreeBuild {
    let n_train = boot_rows.len() as f64;
    let mut nodes: Vec<Node> = vec![Node::Leaf { counts: Vec::new() }];
    let mut per_feature = vec![0.0; cols.len()];
    let mut total = 0.0;
    let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, boot_rows)];

    while let Some((slot, rows)) = stack.pop() {
        let mut counts = vec![0u64; n_classes];
        for &r in &rows {
            counts[labels[r]] += 1;
        }
        let g_parent = gini(&counts, rows.len());
        let splittable = rows.len() >= 2 && rows.len() > min_leaf && g_parent > 0.0;

        // (weighted child gini, feature, threshold); strict < on the first
        // component while scanning features then thresholds in ascending
        // order implements the tie-break rules.
        let mut best: Option<(f64, usize, f64)> = None;
        if splittable {
            for f in sample_features(rng, cols.len(), mtry) {
                let col = &cols[f];
                let mut vals: Vec<(f64, usize)> =
                    rows.iter().map(|&r| (col[r], labels[r])).collect();
                vals.sort_by(|a, b| a.0.total_cmp(&b.0));
                let n = vals.len();
                let mut left = vec![0u64; n_classes];
                let mut right = counts.clone();
                for i in 1..n {
                    let (v_prev, y_prev) = vals[i - 1];
                    left[y_prev] += 1;
                    right[y_prev] -= 1;
                    if vals[i].0 == v_prev {
                        continue;
                    }
                    if i < min_leaf || n - i < min_leaf {
                        continue;
                    }
                    let wg = (i as f64 * gini(&left, i)
                        + (n - i) as f64 * gini(&right, n - i))
                        / n as f64;
                    if best.map_or(true, |(b, _, _)| wg < b) {
                        // Midpoint, nudged down if rounding collapses it
                        // onto the upper value, so `<=` reproduces exactly
                        // the counted partition.
                        let mut thr = (v_prev + vals[i].0) / 2.0;
                        if !(thr < vals[i].0) {
                            thr = v_prev;
                        }
                        best = Some((wg, f, thr));
                    }
                }
            }
        }

        match best {
            Some((wg, feature, threshold)) => {
                let (mut l_rows, mut r_rows) = (Vec::new(), Vec::new());
                for &r in &rows {
                    if cols[feature][r] <= threshold {
                        l_rows.push(r);
                    } else {
                        r_rows.push(r);
                    }
                }
                let decrease = rows.len() as f64 / n_train * (g_parent - wg);
                per_feature[feature] += decrease;
                total += decrease;

                let left = nodes.len();
                nodes.push(Node::Leaf { counts: Vec::new() });
                let right = nodes.len();
                nodes.push(Node::Leaf { counts: Vec::new() });
                nodes[slot] = Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                };
                stack.push((left, l_rows));
                stack.push((right, r_rows));
            }
            None => {
                nodes[slot] = Node::Leaf { counts };
            }
        }
    }

    TreeBuild {
        tree: DecisionTree { nodes },
        per_feature,
        total,
    }
}

/// Trains a forest. Deterministic: (data, config) fixes every tree.
pub fn train(table: &FeatureTable, cfg: &ForestConfig) -> Result<ForestModel> {
    if cfg.n_trees == 0 {
        return Err(Error::InvalidInput("forest needs at least 1 tree".into()));
    }
    let n = table.n_rows();
    let p = table.n_features();
    if n < 2 || p == 0 {
        return Err(Error::InsufficientData(format!(
            "training needs >= 2 rows and >= 1 feature, got {n} x {p}"
        )));
    }
    if table.labels.iter().all(|&l| l == table.labels[0]) {
        return Err(Error::DegenerateLabels);
    }
    let mtry = cfg
        .n_features_per_split
        .unwrap_or_else(|| (p as f64).sqrt().floor() as usize)
        .clamp(1, p);
    let n_classes = table.class_names.len();
    let cols: Vec<Vec<f64>> = (0..p).map(|j| table.column(j)).collect();

    let builds: Vec<TreeBuild> = (0..cfg.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(t as u64 + 1);
            let rows = bootstrap_indices(&mut rng, n);
            build_tree(&cols, &table.labels, n_classes, rows, mtry, cfg.min_leaf, &mut rng)
        })
        .collect();

    let mut importance = vec![0.0; p];
    let mut total = 0.0;
    for b in &builds {
        for (acc, v) in importance.iter_mut().zip(&b.per_feature) {
            *acc += v;
        }
        total += b.total;
    }
    for v in &mut importance {
        *v /= cfg.n_trees as f64;
    }
    total /= cfg.n_trees as f64;

    Ok(ForestModel {
        format_version: MODEL_FORMAT_VERSION,
        classes: table.class_names.clone(),
        n_features: p,
        n_features_per_split: mtry,
        min_leaf: cfg.min_leaf,
        seed: cfg.seed,
        trees: builds.into_iter().map(|b| b.tree).collect(),
        importance,
        total_impurity_decrease: total,
    })
}

/// Vote totals per class for one row; sums to the tree count.
pub fn predict_votes(model: &ForestModel, row: &[f64]) -> Result<Vec<u64>> {
    if row.len() != model.n_features {
        return Err(Error::WidthMismatch {
            expected: model.n_features,
            got: row.len(),
        });
    }
    let mut votes = vec![0u64; model.classes.len()];
    for tree in &model.trees {
        votes[tree.vote(row)] += 1;
    }
    Ok(votes)
}

/// Majority-vote class for one row; vote ties break toward the class
/// listed earlier in the scheme.
pub fn predict(model: &ForestModel, row: &[f64]) -> Result<usize> {
    Ok(argmax(&predict_votes(model, row)?))
}

/// Mean Gini decrease per feature.
pub fn feature_importance(model: &ForestModel) -> Vec<f64> {
    model.importance.clone()
}

pub fn to_json(model: &ForestModel) -> Result<String> {
    serde_json::to_string(model).map_err(|e| Error::ModelFormat(e.to_string()))
}

pub fn from_json(text: &str) -> Result<ForestModel> {
    let model: ForestModel =
        serde_json::from_str(text).map_err(|e| Error::ModelFormat(e.to_string()))?;
    if model.format_version != MODEL_FORMAT_VERSION {
        return Err(Error::ModelFormat(format!(
            "model format {} unsupported, expected {}",
            model.format_version, MODEL_FORMAT_VERSION
        )));
    }
    if model.importance.len() != model.n_features {
        return Err(Error::ModelFormat(
            "importance length disagrees with feature count".into(),
        ));
    }
    Ok(model)
}

/// Cross-validation summary. Confusion rows are true classes, columns are
/// predicted classes, aggregated over all folds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub mean_accuracy: f64,
    pub fold_accuracies: Vec<f64>,
    pub confusion: Vec<Vec<u64>>,
    pub class_names: Vec<String>,
}

/// Stratified k-fold cross-validation on the table's own labels.
///
/// Fold assignment shuffles each class separately and deals round-robin, so
/// every fold sees near-identical class proportions. Fold f trains with
/// seed cfg.seed + f + 1.
pub fn cross_validate(table: &FeatureTable, cfg: &ForestConfig, folds: usize) -> Result<CvResult> {
    if folds < 2 {
        return Err(Error::InvalidInput(format!(
            "cross-validation needs >= 2 folds, got {folds}"
        )));
    }
    let counts = table.class_counts();
    for (label, &count) in counts.iter().enumerate() {
        // Classes absent from the data are skipped; they cannot be dealt.
        if count > 0 && count < folds {
            return Err(Error::Stratification(format!(
                "class {} has {count} rows, fewer than {folds} folds",
                table.class_names[label]
            )));
        }
    }

    let mut assignment_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    assignment_rng.set_stream(0);
    let mut fold_of = vec![0usize; table.n_rows()];
    for label in 0..table.class_names.len() {
        let mut members: Vec<usize> = (0..table.n_rows())
            .filter(|&r| table.labels[r] == label)
            .collect();
        for i in (1..members.len()).rev() {
            let j = assignment_rng.gen_range(0..=i);
            members.swap(i, j);
        }
        for (k, &r) in members.iter().enumerate() {
            fold_of[r] = k % folds;
        }
    }

    let n_classes = table.class_names.len();
    let mut fold_accuracies = Vec::with_capacity(folds);
    let mut confusion = vec![vec![0u64; n_classes]; n_classes];
    for fold in 0..folds {
        let train_rows: Vec<usize> = (0..table.n_rows()).filter(|&r| fold_of[r] != fold).collect();
        let test_rows: Vec<usize> = (0..table.n_rows()).filter(|&r| fold_of[r] == fold).collect();
        if test_rows.is_empty() {
            return Err(Error::Stratification(format!("fold {fold} is empty")));
        }
        let sub = FeatureTable::new(
            table.feature_names.clone(),
            table.class_names.clone(),
            train_rows.iter().map(|&r| table.rows[r].clone()).collect(),
            train_rows.iter().map(|&r| table.labels[r]).collect(),
        )?;
        let fold_cfg = ForestConfig {
            seed: cfg.seed.wrapping_add(fold as u64 + 1),
            ..*cfg
        };
        let model = train(&sub, &fold_cfg)?;
        let mut correct = 0usize;
        for &r in &test_rows {
            let pred = predict(&model, &table.rows[r])?;
            confusion[table.labels[r]][pred] += 1;
            if pred == table.labels[r] {
                correct += 1;
            }
        }
        fold_accuracies.push(correct as f64 / test_rows.len() as f64);
    }
    let mean_accuracy = fold_accuracies.iter().sum::<f64>() / folds as f64;
    Ok(CvResult {
        mean_accuracy,
        fold_accuracies,
        confusion,
        class_names: table.class_names.clone(),
    })
}

/// Cross-validation after relabeling the table under a scheme.
pub fn cross_validate_scheme(
    table: &FeatureTable,
    scheme: LabelScheme,
    cfg: &ForestConfig,
    folds: usize,
) -> Result<CvResult> {
    if table.class_names == scheme.class_names() {
        cross_validate(table, cfg, folds)
    } else {
        cross_validate(&table.relabel(scheme)?, cfg, folds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand_distr::{Distribution, Normal};

    fn names(p: usize) -> Vec<String> {
        (0..p).map(|j| format!("f{j}")).collect()
    }

    fn blob_table(per_class: usize, seed: u64) -> FeatureTable {
        // Two 2-D Gaussian blobs, sigma 0.1, centers 30 sigma apart.
        let normal = Normal::new(0.0, 0.1).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for class in 0..2usize {
            let cx = class as f64 * 3.0;
            for _ in 0..per_class {
                rows.push(vec![cx + normal.sample(&mut rng), normal.sample(&mut rng)]);
                labels.push(class);
            }
        }
        FeatureTable::new(names(2), vec!["a".into(), "b".into()], rows, labels).unwrap()
    }

    fn small_cfg(seed: u64) -> ForestConfig {
        ForestConfig {
            n_trees: 50,
            seed,
            ..ForestConfig::default()
        }
    }

    #[test]
    fn single_class_table_is_rejected() {
        let t = FeatureTable::new(
            names(1),
            vec!["a".into(), "b".into()],
            vec![vec![1.0], vec![2.0]],
            vec![1, 1],
        )
        .unwrap();
        assert!(matches!(train(&t, &small_cfg(1)), Err(Error::DegenerateLabels)));
    }

    #[test]
    fn separable_blobs_classify_held_out_points() {
        let train_set = blob_table(100, 10);
        let test_set = blob_table(100, 11);
        let model = train(&train_set, &small_cfg(42)).unwrap();
        let mut correct = 0;
        for (row, &label) in test_set.rows.iter().zip(&test_set.labels) {
            if predict(&model, row).unwrap() == label {
                correct += 1;
            }
        }
        let acc = correct as f64 / test_set.n_rows() as f64;
        assert!(acc >= 0.99, "held-out accuracy {acc}");
    }

    #[test]
    fn identical_seed_gives_identical_models_and_predictions() {
        let data = blob_table(40, 3);
        let m1 = train(&data, &small_cfg(7)).unwrap();
        let m2 = train(&data, &small_cfg(7)).unwrap();
        assert_eq!(to_json(&m1).unwrap(), to_json(&m2).unwrap());
        let probe = blob_table(20, 4);
        for row in &probe.rows {
            assert_eq!(predict_votes(&m1, row).unwrap(), predict_votes(&m2, row).unwrap());
        }
    }

    #[test]
    fn one_tree_forest_votes_like_its_tree() {
        let data = blob_table(30, 5);
        let cfg = ForestConfig {
            n_trees: 1,
            ..small_cfg(9)
        };
        let model = train(&data, &cfg).unwrap();
        for row in &data.rows {
            assert_eq!(predict(&model, row).unwrap(), model.trees[0].vote(row));
        }
    }

    #[test]
    fn unanimous_votes_ignore_the_tie_rule() {
        let data = blob_table(50, 6);
        let model = train(&data, &small_cfg(2)).unwrap();
        let far = vec![3.0, 0.0];
        let votes = predict_votes(&model, &far).unwrap();
        assert_eq!(votes[1], model.trees.len() as u64);
        assert_eq!(predict(&model, &far).unwrap(), 1);
    }

    #[test]
    fn vote_ties_break_toward_the_earlier_class() {
        let leaf_tree = |class: usize| DecisionTree {
            nodes: vec![Node::Leaf {
                counts: (0..3).map(|c| if c == class { 5 } else { 0 }).collect(),
            }],
        };
        let model = ForestModel {
            format_version: MODEL_FORMAT_VERSION,
            classes: vec!["x".into(), "y".into(), "z".into()],
            n_features: 1,
            n_features_per_split: 1,
            min_leaf: 1,
            seed: 0,
            trees: vec![leaf_tree(2), leaf_tree(1)],
            importance: vec![0.0],
            total_impurity_decrease: 0.0,
        };
        assert_eq!(predict(&model, &[0.0]).unwrap(), 1);
    }

    #[test]
    fn leaf_majority_ties_break_toward_the_earlier_class() {
        let tree = DecisionTree {
            nodes: vec![Node::Leaf {
                counts: vec![2, 3, 3],
            }],
        };
        assert_eq!(tree.vote(&[0.0]), 1);
    }

    #[test]
    fn predict_rejects_width_mismatch() {
        let data = blob_table(20, 8);
        let model = train(&data, &small_cfg(3)).unwrap();
        assert!(matches!(
            predict(&model, &[1.0]),
            Err(Error::WidthMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn votes_always_sum_to_the_tree_count() {
        let data = blob_table(30, 12);
        let model = train(&data, &small_cfg(4)).unwrap();
        for row in data.rows.iter().take(20) {
            let votes = predict_votes(&model, row).unwrap();
            assert_eq!(votes.iter().sum::<u64>(), 50);
        }
    }

    #[test]
    fn cross_validation_on_separable_data_is_perfect() {
        let data = blob_table(50, 14);
        let cv = cross_validate(&data, &small_cfg(5), 5).unwrap();
        assert!(cv.mean_accuracy >= 0.99, "cv accuracy {}", cv.mean_accuracy);
        assert_eq!(cv.fold_accuracies.len(), 5);
        let total: u64 = cv.confusion.iter().flatten().sum();
        assert_eq!(total, 100);
    }

    #[test]
    fn shuffled_labels_score_at_chance() {
        let mut data = blob_table(100, 15);
        // Deterministic derangement of labels: rotate by one within a fixed
        // shuffle of row order.
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for i in (1..data.labels.len()).rev() {
            let j = rng.gen_range(0..=i);
            data.labels.swap(i, j);
        }
        let cv = cross_validate(&data, &small_cfg(6), 5).unwrap();
        // Chance is 0.5; 3 sigma of a 200-draw binomial is ~0.106.
        assert!(
            (cv.mean_accuracy - 0.5).abs() <= 0.106,
            "null accuracy {}",
            cv.mean_accuracy
        );
    }

    #[test]
    fn folds_may_equal_the_smallest_class_count() {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..6 {
            rows.push(vec![i as f64, 1.0]);
            labels.push(0);
        }
        for i in 0..9 {
            rows.push(vec![i as f64 + 10.0, -1.0]);
            labels.push(1);
        }
        let t = FeatureTable::new(names(2), vec!["a".into(), "b".into()], rows, labels).unwrap();
        assert!(cross_validate(&t, &small_cfg(7), 6).is_ok());
        assert!(matches!(
            cross_validate(&t, &small_cfg(7), 7),
            Err(Error::Stratification(_))
        ));
    }

    #[test]
    fn planted_feature_dominates_importance() {
        let mut rng = StdRng::seed_from_u64(16);
        let normal = Normal::new(0.0, 1.0).unwrap();
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..120 {
            let y = i % 2;
            rows.push(vec![
                y as f64,
                normal.sample(&mut rng),
                normal.sample(&mut rng),
                normal.sample(&mut rng),
                7.5,
            ]);
            labels.push(y);
        }
        let t = FeatureTable::new(names(5), vec!["a".into(), "b".into()], rows, labels).unwrap();
        let model = train(&t, &small_cfg(8)).unwrap();
        let imp = feature_importance(&model);
        for f in 1..5 {
            assert!(imp[0] > imp[f], "importance {imp:?}");
        }
        // A constant column is never split on.
        assert_eq!(imp[4], 0.0);
        let sum: f64 = imp.iter().sum();
        assert!(
            (sum - model.total_impurity_decrease).abs() < 1e-9,
            "importance sum {sum} vs total {}",
            model.total_impurity_decrease
        );
    }

    #[test]
    fn bootstrap_unique_fraction_matches_expectation() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let n = 100;
        let draws = 10_000;
        let mut acc = 0.0;
        let mut seen = vec![false; n];
        for _ in 0..draws {
            seen.iter_mut().for_each(|s| *s = false);
            for idx in bootstrap_indices(&mut rng, n) {
                seen[idx] = true;
            }
            acc += seen.iter().filter(|&&s| s).count() as f64 / n as f64;
        }
        let mean = acc / draws as f64;
        let expected = 1.0 - (-1.0f64).exp();
        assert!(
            (mean - expected).abs() < 0.01,
            "unique fraction {mean} vs {expected}"
        );
    }

    #[test]
    fn serialized_models_reload_bit_identically() {
        let data = blob_table(40, 20);
        let model = train(&data, &small_cfg(21)).unwrap();
        let text = to_json(&model).unwrap();
        let reloaded = from_json(&text).unwrap();
        assert_eq!(model, reloaded);
        for row in data.rows.iter().take(10) {
            assert_eq!(
                predict_votes(&model, row).unwrap(),
                predict_votes(&reloaded, row).unwrap()
            );
        }
    }

    #[test]
    fn unknown_format_version_is_rejected() {
        let data = blob_table(10, 22);
        let model = train(&data, &small_cfg(23)).unwrap();
        let text = to_json(&model).unwrap();
        let tampered = text.replacen("\"format_version\":1", "\"format_version\":2", 1);
        assert!(matches!(from_json(&tampered), Err(Error::ModelFormat(_))));
        assert!(matches!(from_json("not a model"), Err(Error::ModelFormat(_))));
    }

    #[test]
    fn scheme_wrapper_relabels_mode_tables() {
        let mut rng = StdRng::seed_from_u64(24);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for label in 0..5usize {
            for _ in 0..10 {
                rows.push(vec![
                    label as f64 + rng.gen_range(-0.2..0.2),
                    rng.gen_range(-1.0..1.0),
                ]);
                labels.push(label);
            }
        }
        let t = FeatureTable::new(
            names(2),
            LabelScheme::FiveClass.class_names(),
            rows,
            labels,
        )
        .unwrap();
        let cv = cross_validate_scheme(&t, LabelScheme::Binary, &small_cfg(25), 5).unwrap();
        assert_eq!(cv.class_names, ["vru", "non_vru"]);
        assert_eq!(cv.confusion.len(), 2);
        let total: u64 = cv.confusion.iter().flatten().sum();
        assert_eq!(total, 50);
    }
}
