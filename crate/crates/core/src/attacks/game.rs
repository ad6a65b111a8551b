//! The per-record shadow-model membership game.
//!
//! Shadow phase: training sets are drawn from auxiliary data and the target
//! record is planted in exactly half of them; a generator is trained on each
//! and the meta-classifier learns to tell the halves apart from query
//! answers on the synthetic output. Evaluation phase: half of the models are
//! trained on the real target dataset, the other half on the target dataset
//! with the target record swapped for a random holdout record.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{self, GeneratorSpec};
use crate::rng::{self, derive_seed};
use crate::tabular::{replace_record, Dataset, Record, Role};

use super::classifier::{train_meta_classifier, ClassifierConfig, LogisticModel};
use super::features::{build_query_features, QueryEncoder, QueryFeatureSpec};
use super::roc::{roc_auc, tpr_at_fpr_zero};

fn desk_worlds() -> usize {
    200
}

fn default_queries() -> usize {
    100
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GameConfig {
    pub n_shadow: usize,
    pub n_eval: usize,
    /// Shadow training-set size; defaults to the target dataset size.
    pub shadow_size: Option<usize>,
    pub n_queries: usize,
    /// Largest query subset; defaults to `min(k, 4)`.
    pub query_subset_max: Option<usize>,
    pub classifier: ClassifierConfig,
    pub seed: u64,
}

impl Default for GameConfig {
    fn default() -> Self {
        GameConfig {
            n_shadow: desk_worlds(),
            n_eval: desk_worlds(),
            shadow_size: None,
            n_queries: default_queries(),
            query_subset_max: None,
            classifier: ClassifierConfig::default(),
            seed: 0,
        }
    }
}

impl GameConfig {
    /// 1000 shadow and 1000 evaluation models per record.
    pub fn full_scale() -> Self {
        GameConfig {
            n_shadow: 1000,
            n_eval: 1000,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, n) in [("n_shadow", self.n_shadow), ("n_eval", self.n_eval)] {
            if n < 2 || n % 2 != 0 {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be even and at least 2, got {n}"
                )));
            }
        }
        if self.n_shadow < 4 {
            return Err(Error::InvalidConfig(
                "n_shadow must be at least 4 to train the classifier".into(),
            ));
        }
        if self.n_queries == 0 {
            return Err(Error::InvalidConfig("n_queries must be at least 1".into()));
        }
        if self.shadow_size == Some(0) || self.query_subset_max == Some(0) {
            return Err(Error::InvalidConfig(
                "shadow_size and query_subset_max must be positive".into(),
            ));
        }
        self.classifier.validate()
    }

    fn shadow_size_for(&self, target_ds: &Dataset) -> usize {
        self.shadow_size.unwrap_or(target_ds.len())
    }
}

/// Exactly `n / 2` members in a seeded random order.
fn balanced_labels(n: usize, seed: u64, tag: &str) -> Vec<bool> {
    let mut labels: Vec<bool> = (0..n).map(|i| i < n / 2).collect();
    rng::shuffle(&mut labels, &mut rng::derived(seed, tag, 0));
    labels
}

/// One training set of the game with its membership label.
#[derive(Clone, Debug, PartialEq)]
pub struct World {
    pub train: Dataset,
    pub member: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    Shadow,
    Eval,
}

impl Phase {
    fn tag(self) -> &'static str {
        match self {
            Phase::Shadow => "shadow",
            Phase::Eval => "eval",
        }
    }
}

struct ShadowPlan<'a> {
    aux: &'a Dataset,
    target: &'a Record,
    size: usize,
    labels: Vec<bool>,
    seed: u64,
}

impl ShadowPlan<'_> {
    fn world(&self, i: usize) -> World {
        let mut r = rng::derived(self.seed, "shadow-world", i as u64);
        let idx = rng::sample_without_replacement(self.aux.len(), self.size, &mut r);
        let mut train = self.aux.select(&idx, Role::Shadow);
        let member = self.labels[i];
        if member {
            let pos = rng::uniform_index(&mut r, self.size);
            train =
                replace_record(&train, pos, self.target.clone()).expect("position within world");
        }
        World { train, member }
    }
}

fn shadow_plan<'a>(
    aux: &'a Dataset,
    target: &'a Record,
    size: usize,
    cfg: &GameConfig,
) -> Result<ShadowPlan<'a>> {
    aux.schema().validate(target)?;
    if size > aux.len() {
        return Err(Error::InsufficientRows {
            needed: size,
            available: aux.len(),
        });
    }
    Ok(ShadowPlan {
        aux,
        target,
        size,
        labels: balanced_labels(cfg.n_shadow, cfg.seed, "shadow-labels"),
        seed: cfg.seed,
    })
}

struct EvalPlan<'a> {
    target_ds: &'a Dataset,
    target_index: usize,
    holdout: &'a Dataset,
    labels: Vec<bool>,
    seed: u64,
}

impl EvalPlan<'_> {
    fn world(&self, i: usize) -> World {
        let member = self.labels[i];
        let train = if member {
            self.target_ds.clone()
        } else {
            let mut r = rng::derived(self.seed, "eval-world", i as u64);
            let h = rng::uniform_index(&mut r, self.holdout.len());
            replace_record(
                self.target_ds,
                self.target_index,
                self.holdout.row(h).clone(),
            )
            .expect("index checked")
        };
        World { train, member }
    }
}

fn eval_plan<'a>(
    target_ds: &'a Dataset,
    target_index: usize,
    holdout: &'a Dataset,
    cfg: &GameConfig,
) -> Result<EvalPlan<'a>> {
    if target_index >= target_ds.len() {
        return Err(Error::IndexOutOfRange {
            index: target_index,
            len: target_ds.len(),
        });
    }
    if holdout.is_empty() {
        return Err(Error::InsufficientRows {
            needed: 1,
            available: 0,
        });
    }
    target_ds.ensure_same_schema(holdout)?;
    Ok(EvalPlan {
        target_ds,
        target_index,
        holdout,
        labels: balanced_labels(cfg.n_eval, cfg.seed, "eval-labels"),
        seed: cfg.seed,
    })
}

/// Shadow training sets drawn from `aux`, the target planted in half.
pub fn make_shadow_worlds(aux: &Dataset, target: &Record, cfg: &GameConfig) -> Result<Vec<World>> {
    let size = cfg
        .shadow_size
        .ok_or_else(|| Error::InvalidConfig("shadow_size is required".into()))?;
    let plan = shadow_plan(aux, target, size, cfg)?;
    Ok((0..cfg.n_shadow).map(|i| plan.world(i)).collect())
}

/// Model-seeded evaluation training sets for `target_ds[target_index]`.
pub fn make_eval_worlds(
    target_ds: &Dataset,
    target_index: usize,
    holdout: &Dataset,
    cfg: &GameConfig,
) -> Result<Vec<World>> {
    let plan = eval_plan(target_ds, target_index, holdout, cfg)?;
    Ok((0..cfg.n_eval).map(|i| plan.world(i)).collect())
}

/// Train the generator for world `index` of a phase and sample one synthetic
/// dataset of the training-set size.
fn synthesize(
    gen_spec: &GeneratorSpec,
    cfg: &GameConfig,
    phase: Phase,
    index: usize,
    train: &Dataset,
) -> Result<Dataset> {
    let model_seed = derive_seed(
        derive_seed(cfg.seed, "generator", gen_spec.seed),
        phase.tag(),
        index as u64,
    );
    let spec = GeneratorSpec {
        kind: gen_spec.kind.clone(),
        seed: model_seed,
    };
    let fitted = generators::fit(&spec, train)?;
    Ok(fitted.sample(
        train.len(),
        derive_seed(cfg.seed, phase.tag(), index as u64),
    ))
}

/// Membership score and label of one evaluation world.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoredWorld {
    pub score: f64,
    pub member: bool,
}

/// Result of one record's membership game.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttackOutcome {
    pub target_index: usize,
    /// In evaluation-world order.
    pub scores: Vec<ScoredWorld>,
    pub auc: f64,
    pub tpr_at_fpr0: f64,
}

impl AttackOutcome {
    pub fn pairs(&self) -> Vec<(f64, bool)> {
        self.scores.iter().map(|s| (s.score, s.member)).collect()
    }

    /// `world_index,label,score` rows.
    pub fn write_scores_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["world_index", "label", "score"])?;
        for (i, s) in self.scores.iter().enumerate() {
            w.write_record([
                i.to_string(),
                u8::from(s.member).to_string(),
                s.score.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<scores csv>", e))?;
        Ok(())
    }

    pub fn save_scores_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_scores_csv(std::io::BufWriter::new(f))
    }
}

/// Everything fixed once per game and shared by both phases.
pub struct GameSetup {
    pub queries: QueryFeatureSpec,
    pub encoder: QueryEncoder,
}

impl GameSetup {
    pub fn new(target_ds: &Dataset, cfg: &GameConfig) -> Self {
        let k = target_ds.schema().len();
        let max = cfg.query_subset_max.unwrap_or(k.min(4));
        let queries = QueryFeatureSpec::random(
            k,
            cfg.n_queries,
            max,
            &mut rng::derived(cfg.seed, "queries", 0),
        );
        GameSetup {
            queries,
            encoder: QueryEncoder::fit(target_ds),
        }
    }
}

/// Run the game, calling `inspect(world_index, member, synthetic)` on every
/// evaluation synthetic dataset. Inspection results come back in world order.
#[allow(clippy::too_many_arguments)]
pub fn run_game_with<R, F>(
    target_ds: &Dataset,
    target_index: usize,
    holdout: &Dataset,
    aux: &Dataset,
    gen_spec: &GeneratorSpec,
    cfg: &GameConfig,
    inspect: F,
) -> Result<(AttackOutcome, Vec<R>)>
where
    R: Send,
    F: Fn(usize, bool, &Dataset) -> Result<R> + Sync,
{
    cfg.validate()?;
    gen_spec.validate()?;
    target_ds.ensure_same_schema(aux)?;
    let evals = eval_plan(target_ds, target_index, holdout, cfg)?;
    let target = target_ds.row(target_index);
    let shadows = shadow_plan(aux, target, cfg.shadow_size_for(target_ds), cfg)?;
    let setup = GameSetup::new(target_ds, cfg);
    let features =
        |syn: &Dataset| build_query_features(&setup.queries, &setup.encoder, target, syn);

    let shadow_rows: Vec<(Vec<f64>, bool)> = (0..cfg.n_shadow)
        .into_par_iter()
        .map(|i| {
            let w = shadows.world(i);
            let syn = synthesize(gen_spec, cfg, Phase::Shadow, i, &w.train)?;
            Ok((features(&syn), w.member))
        })
        .collect::<Result<_>>()?;
    let (xs, ys): (Vec<Vec<f64>>, Vec<bool>) = shadow_rows.into_iter().unzip();
    let model: LogisticModel<f64> = train_meta_classifier(&xs, &ys, &cfg.classifier)?;

    let evaluated: Vec<(ScoredWorld, R)> = (0..cfg.n_eval)
        .into_par_iter()
        .map(|i| {
            let w = evals.world(i);
            let syn = synthesize(gen_spec, cfg, Phase::Eval, i, &w.train)?;
            let score = model.decision(&features(&syn));
            let extra = inspect(i, w.member, &syn)?;
            Ok((
                ScoredWorld {
                    score,
                    member: w.member,
                },
                extra,
            ))
        })
        .collect::<Result<_>>()?;
    let (scores, extras): (Vec<ScoredWorld>, Vec<R>) = evaluated.into_iter().unzip();
    let pairs: Vec<(f64, bool)> = scores.iter().map(|s| (s.score, s.member)).collect();
    Ok((
        AttackOutcome {
            target_index,
            auc: roc_auc(&pairs)?,
            tpr_at_fpr0: tpr_at_fpr_zero(&pairs)?,
            scores,
        },
        extras,
    ))
}

/// Membership game for `target_ds[target_index]`.
pub fn run_game(
    target_ds: &Dataset,
    target_index: usize,
    holdout: &Dataset,
    aux: &Dataset,
    gen_spec: &GeneratorSpec,
    cfg: &GameConfig,
) -> Result<AttackOutcome> {
    run_game_with(
        target_ds,
        target_index,
        holdout,
        aux,
        gen_spec,
        cfg,
        |_, _, _| Ok(()),
    )
    .map(|(o, _)| o)
}

/// The evaluation-phase synthetic datasets of a game, without running the
/// shadow phase. Identical to the datasets `run_game` evaluates.
pub fn eval_synthetic_datasets(
    target_ds: &Dataset,
    target_index: usize,
    holdout: &Dataset,
    gen_spec: &GeneratorSpec,
    cfg: &GameConfig,
) -> Result<Vec<(bool, Dataset)>> {
    cfg.validate()?;
    let evals = eval_plan(target_ds, target_index, holdout, cfg)?;
    (0..cfg.n_eval)
        .into_par_iter()
        .map(|i| {
            let w = evals.world(i);
            Ok((
                w.member,
                synthesize(gen_spec, cfg, Phase::Eval, i, &w.train)?,
            ))
        })
        .collect()
}
