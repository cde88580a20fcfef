//! BCC/FCC classification from persistence diagrams.

pub mod cv;
pub mod features;
pub mod logistic;
pub mod tree;

pub use cv::{
    corpus_distances, counting_classifier, cross_validate, cross_validate_with_distances, default_c_grid, geometric_grid,
    grid_search_c, stratified_folds, CvConfig, CvReport, FeatureSet, GridPoint, GridSearchResult, ModelKind,
    SelfPair,
};
pub use features::{build_feature_matrix, build_features, features_from_distances, DiagramRecord, FeatureVector};
pub use logistic::{logistic_predict, train_logistic, LogisticModel};
pub use tree::{predict, train_tree, Node, TreeModel, TreeParams};
