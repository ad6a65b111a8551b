//! Shadow-model membership inference: query features, meta-classifier,
//! game orchestration, and ROC metrics.

mod classifier;
mod features;
mod game;
mod roc;

pub use classifier::{
    train_meta_classifier, ClassifierConfig, LogisticModel, LogisticProblem, Standardizer,
};
pub use features::{build_query_features, QueryEncoder, QueryFeatureSpec};
pub use game::{
    eval_synthetic_datasets, make_eval_worlds, make_shadow_worlds, run_game, run_game_with,
    AttackOutcome, GameConfig, GameSetup, ScoredWorld, World,
};
pub use roc::{roc_auc, tpr_at_fpr_zero};
