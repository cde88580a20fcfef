//! Stratified k-fold cross-validation, the `c` grid search and the
//! point-count baseline.
//!
//! Within a fold, training and test rows are both featurized against the
//! training diagrams only. By default a training row leaves itself out of its
//! own reference class, so training features are distributed like test
//! features; [`SelfPair::Include`] keeps the zero self-distance instead.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classifier::features::{features_from_distances, DiagramRecord};
use crate::classifier::logistic::{logistic_predict, train_logistic};
use crate::classifier::tree::{predict, train_tree, TreeParams};
use crate::error::{invalid_input, invalid_param, Error, Result};
use crate::metrics::{pairwise_distances, Metric, SquareMatrix};
use crate::pointcloud::Structure;

/// Classifier head trained on the feature matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    #[default]
    Tree,
    Logistic,
}

/// Whether a training diagram counts its zero distance to itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SelfPair {
    /// Leave-one-out: the row is dropped from its own reference class.
    #[default]
    Exclude,
    /// The zero self-distance enters the class mean and variance.
    ///
    /// Test rows never have this term, so at small `c`, where every other
    /// distance saturates, the tree learns a signal that is absent at test
    /// time.
    Include,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CvConfig {
    pub folds: usize,
    pub seed: u64,
    pub tree: TreeParams,
    pub model: ModelKind,
    pub self_pair: SelfPair,
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig {
            folds: 10,
            seed: 0,
            tree: TreeParams::default(),
            model: ModelKind::Tree,
            self_pair: SelfPair::Exclude,
        }
    }
}

impl CvConfig {
    pub fn with_seed(seed: u64) -> Self {
        CvConfig { seed, ..Default::default() }
    }
}

/// What the classifier sees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "features", rename_all = "lowercase")]
pub enum FeatureSet {
    /// The eight distance statistics under a diagram metric.
    Distance { metric: Metric },
    /// Point count only.
    Counting,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub feature_set: FeatureSet,
    pub model: ModelKind,
    pub folds: usize,
    pub seed: u64,
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
    /// `confusion[true][predicted]`, BCC = 0, FCC = 1.
    pub confusion: [[usize; 2]; 2],
    pub n_samples: usize,
}

fn idx(s: Structure) -> usize {
    match s {
        Structure::Bcc => 0,
        Structure::Fcc => 1,
    }
}

fn labels_of(corpus: &[DiagramRecord]) -> Result<Vec<Structure>> {
    corpus
        .iter()
        .map(|r| r.label.ok_or_else(|| invalid_input(format!("corpus entry `{}` is unlabeled", r.id))))
        .collect()
}

/// Stratified fold assignment: each class is shuffled and dealt round-robin,
/// continuing where the previous class stopped so fold sizes stay balanced.
pub fn stratified_folds(labels: &[Structure], k: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fold_of = vec![0usize; labels.len()];
    let mut next = 0usize;
    for class in Structure::ALL {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        members.shuffle(&mut rng);
        for i in members {
            fold_of[i] = next % k;
            next += 1;
        }
    }
    fold_of
}

fn folds_usable(labels: &[Structure], fold_of: &[usize], k: usize, min_per_class: usize) -> bool {
    (0..k).all(|f| {
        Structure::ALL.iter().all(|&class| {
            labels.iter().zip(fold_of).filter(|(&l, &g)| g != f && l == class).count() >= min_per_class
        })
    })
}

fn make_folds(labels: &[Structure], k: usize, seed: u64, min_per_class: usize) -> Result<Vec<usize>> {
    if k < 2 {
        return Err(invalid_param("at least 2 folds are required"));
    }
    if labels.len() < k {
        return Err(Error::InsufficientData(format!("{} samples for {k} folds", labels.len())));
    }
    let first = stratified_folds(labels, k, seed);
    if folds_usable(labels, &first, k, min_per_class) {
        return Ok(first);
    }
    let second = stratified_folds(labels, k, seed ^ 0x9e37_79b9_7f4a_7c15);
    if folds_usable(labels, &second, k, min_per_class) {
        return Ok(second);
    }
    Err(Error::InsufficientData(format!(
        "some training split has fewer than {min_per_class} diagrams of a class"
    )))
}

enum Fitted {
    Tree(crate::classifier::tree::TreeModel),
    Logistic(crate::classifier::logistic::LogisticModel),
}

impl Fitted {
    fn train(kind: ModelKind, x: &[Vec<f64>], y: &[Structure], tree: &TreeParams) -> Result<Self> {
        Ok(match kind {
            ModelKind::Tree => Fitted::Tree(train_tree(x, y, tree)?),
            ModelKind::Logistic => Fitted::Logistic(train_logistic(x, y)?),
        })
    }

    fn predict(&self, row: &[f64]) -> Structure {
        match self {
            Fitted::Tree(m) => predict(m, row),
            Fitted::Logistic(m) => logistic_predict(m, row),
        }
    }
}

/// Runs the fold loop given a featurizer `(rows, reference rows, training)
/// -> matrix`; `training` is set when `rows` are the references themselves.
fn run_cv<F>(labels: &[Structure], cfg: &CvConfig, feature_set: FeatureSet, min_per_class: usize, featurize: F) -> Result<CvReport>
where
    F: Fn(&[usize], &[usize], bool) -> Vec<Vec<f64>>,
{
    let k = cfg.folds;
    let fold_of = make_folds(labels, k, cfg.seed, min_per_class)?;
    let mut fold_accuracies = Vec::with_capacity(k);
    let mut confusion = [[0usize; 2]; 2];
    for f in 0..k {
        let train: Vec<usize> = (0..labels.len()).filter(|&i| fold_of[i] != f).collect();
        let test: Vec<usize> = (0..labels.len()).filter(|&i| fold_of[i] == f).collect();
        let x_train = featurize(&train, &train, true);
        let y_train: Vec<Structure> = train.iter().map(|&i| labels[i]).collect();
        let model = Fitted::train(cfg.model, &x_train, &y_train, &cfg.tree)?;
        let x_test = featurize(&test, &train, false);
        let mut correct = 0usize;
        for (row, &i) in x_test.iter().zip(&test) {
            let pred = model.predict(row);
            confusion[idx(labels[i])][idx(pred)] += 1;
            if pred == labels[i] {
                correct += 1;
            }
        }
        fold_accuracies.push(correct as f64 / test.len() as f64);
    }
    let total_correct = confusion[0][0] + confusion[1][1];
    Ok(CvReport {
        feature_set,
        model: cfg.model,
        folds: k,
        seed: cfg.seed,
        fold_accuracies,
        mean_accuracy: total_correct as f64 / labels.len() as f64,
        confusion,
        n_samples: labels.len(),
    })
}

/// Pairwise distance matrices of a corpus in dimensions 0 and 1.
pub fn corpus_distances(corpus: &[DiagramRecord], metric: &Metric) -> Result<[SquareMatrix; 2]> {
    let d0: Vec<_> = corpus.iter().map(|r| r.dim0.clone()).collect();
    let d1: Vec<_> = corpus.iter().map(|r| r.dim1.clone()).collect();
    Ok([pairwise_distances(&d0, metric)?, pairwise_distances(&d1, metric)?])
}

/// Cross-validates the distance-feature classifier using precomputed
/// corpus distance matrices.
pub fn cross_validate_with_distances(
    corpus: &[DiagramRecord],
    distances: &[SquareMatrix; 2],
    metric: &Metric,
    cfg: &CvConfig,
) -> Result<CvReport> {
    let labels = labels_of(corpus)?;
    if distances.iter().any(|d| d.len() != corpus.len()) {
        return Err(invalid_input("distance matrices do not match the corpus size"));
    }
    let exclude = cfg.self_pair == SelfPair::Exclude;
    // leaving a row out must still leave two references of its class
    let min_per_class = if exclude { 3 } else { 2 };
    run_cv(&labels, cfg, FeatureSet::Distance { metric: *metric }, min_per_class, |rows, refs, training| {
        rows.iter()
            .map(|&i| {
                let kept: Vec<usize> = refs.iter().copied().filter(|&r| !(training && exclude && r == i)).collect();
                let ref_labels: Vec<Structure> = kept.iter().map(|&r| labels[r]).collect();
                let d0: Vec<f64> = kept.iter().map(|&r| distances[0].get(i, r)).collect();
                let d1: Vec<f64> = kept.iter().map(|&r| distances[1].get(i, r)).collect();
                features_from_distances(&d0, &d1, &ref_labels).to_array().to_vec()
            })
            .collect()
    })
}

/// k-fold cross-validation of the distance-feature classifier.
pub fn cross_validate(corpus: &[DiagramRecord], metric: &Metric, cfg: &CvConfig) -> Result<CvReport> {
    labels_of(corpus)?;
    let distances = corpus_distances(corpus, metric)?;
    cross_validate_with_distances(corpus, &distances, metric, cfg)
}

/// Baseline: the same protocol with the point count as the only feature.
pub fn counting_classifier(corpus: &[DiagramRecord], cfg: &CvConfig) -> Result<CvReport> {
    let labels = labels_of(corpus)?;
    run_cv(&labels, cfg, FeatureSet::Counting, 2, |rows, _, _| {
        rows.iter().map(|&i| vec![corpus[i].b0 as f64]).collect()
    })
}

/// `n` values spaced geometrically from `lo` to `hi` inclusive.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo) || n == 0 {
        return Err(invalid_param("geometric grid needs 0 < lo <= hi and n >= 1"));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let ratio = (hi / lo).ln() / (n - 1) as f64;
    let mut g: Vec<f64> = (0..n).map(|i| lo * (ratio * i as f64).exp()).collect();
    g[n - 1] = hi;
    Ok(g)
}

/// The default grid: ten values from 0.01 to 1.
pub fn default_c_grid() -> Vec<f64> {
    geometric_grid(0.01, 1.0, 10).expect("valid grid")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub c: f64,
    pub mean_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearchResult {
    pub p: f64,
    /// One `c` shared by the dimension-0 and dimension-1 distances.
    pub best_c: f64,
    pub best_accuracy: f64,
    pub scores: Vec<GridPoint>,
}

/// Cross-validates `d_p^c` at every `c` of the grid; the best mean
/// accuracy wins, ties going to the smaller `c`.
pub fn grid_search_c(tuning: &[DiagramRecord], c_grid: &[f64], p: f64, cfg: &CvConfig) -> Result<GridSearchResult> {
    if c_grid.is_empty() {
        return Err(invalid_param("empty c grid"));
    }
    let mut scores = Vec::with_capacity(c_grid.len());
    for &c in c_grid {
        let report = cross_validate(tuning, &Metric::Dpc { p, c }, cfg)?;
        scores.push(GridPoint {
            c,
            mean_accuracy: report.mean_accuracy,
        });
    }
    let best = scores
        .iter()
        .fold(None::<&GridPoint>, |best, g| match best {
            Some(b) if g.mean_accuracy < b.mean_accuracy => Some(b),
            Some(b) if g.mean_accuracy == b.mean_accuracy && g.c >= b.c => Some(b),
            _ => Some(g),
        })
        .expect("nonempty grid");
    Ok(GridSearchResult {
        p,
        best_c: best.c,
        best_accuracy: best.mean_accuracy,
        scores,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rips::PersistenceDiagram;

    fn rec(i: usize, label: Structure, n0: usize, scale: f64) -> DiagramRecord {
        let d0: Vec<(f64, f64)> = (0..n0).map(|k| (0.0, scale * (1.0 + 0.01 * (k + i % 3) as f64))).collect();
        DiagramRecord {
            id: format!("r{i}"),
            label: Some(label),
            b0: n0 + 1,
            dim0: PersistenceDiagram::from_pairs(0, &d0).unwrap(),
            dim1: PersistenceDiagram::empty(1),
        }
    }

    #[test]
    fn default_grid_is_geometric() {
        let g = default_c_grid();
        assert_eq!(g.len(), 10);
        assert_eq!(g[0], 0.01);
        assert_eq!(g[9], 1.0);
        assert!((g[1] - 0.016_681).abs() < 1e-6);
        for w in g.windows(2) {
            assert!((w[1] / w[0] - 100f64.powf(1.0 / 9.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn folds_are_stratified_partitions() {
        let labels: Vec<Structure> = (0..53).map(|i| if i % 3 == 0 { Structure::Fcc } else { Structure::Bcc }).collect();
        let f = stratified_folds(&labels, 10, 4);
        for fold in 0..10 {
            let size = f.iter().filter(|&&g| g == fold).count();
            assert!((5..=6).contains(&size));
            let fcc = f.iter().zip(&labels).filter(|(&g, &l)| g == fold && l == Structure::Fcc).count();
            assert!((1..=2).contains(&fcc));
        }
        assert_eq!(f, stratified_folds(&labels, 10, 4));
    }

    #[test]
    fn separated_corpus_is_perfect() {
        let corpus: Vec<DiagramRecord> = (0..40)
            .map(|i| {
                if i % 2 == 0 {
                    rec(i, Structure::Bcc, 4, 1.0)
                } else {
                    rec(i, Structure::Fcc, 12, 0.7)
                }
            })
            .collect();
        let r = cross_validate(&corpus, &Metric::Dpc { p: 2.0, c: 1.0 }, &CvConfig::with_seed(1)).unwrap();
        assert_eq!(r.mean_accuracy, 1.0);
        let r = counting_classifier(&corpus, &CvConfig::with_seed(1)).unwrap();
        assert_eq!(r.mean_accuracy, 1.0);
        assert_eq!(r.confusion, [[20, 0], [0, 20]]);
    }

    #[test]
    fn rejects_tiny_corpora() {
        let corpus: Vec<DiagramRecord> = (0..6).map(|i| rec(i, Structure::Bcc, 2, 1.0)).collect();
        assert!(counting_classifier(&corpus, &CvConfig::default()).is_err());
        let mut corpus: Vec<DiagramRecord> = (0..12).map(|i| rec(i, Structure::Bcc, 2, 1.0)).collect();
        corpus[0].label = Some(Structure::Fcc);
        corpus[1].label = Some(Structure::Fcc);
        // with 10 folds the two FCC entries land in different folds, leaving
        // a single FCC reference in those training splits
        assert!(matches!(
            counting_classifier(&corpus, &CvConfig::default()),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn single_grid_value_is_returned() {
        let corpus: Vec<DiagramRecord> = (0..20)
            .map(|i| rec(i, if i % 2 == 0 { Structure::Bcc } else { Structure::Fcc }, 3 + i % 2, 1.0))
            .collect();
        let g = grid_search_c(&corpus, &[0.3], 2.0, &CvConfig { folds: 4, ..Default::default() }).unwrap();
        assert_eq!(g.best_c, 0.3);
        assert!(grid_search_c(&corpus, &[], 2.0, &CvConfig::default()).is_err());
    }
}
