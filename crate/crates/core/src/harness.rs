//! Experiment pipeline: split real data, pick vulnerable records, run one
//! membership game per record, audit every evaluation synthetic dataset with
//! the proxy tests, and compare the two views.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attacks::{self, roc_auc, GameConfig};
use crate::error::{Error, Result};
use crate::generators::GeneratorSpec;
use crate::metrics::{default_p_grid, DistanceConfig, PrivacyAuditor};
use crate::rng::derive_seed;
use crate::scalar::Scalar;
use crate::tabular::{self, Dataset, SplitIndices, SplitSpec};
use crate::vulnerability::{achilles_scores, select_targets, VulnerabilityScore};

pub const REPORT_FILE: &str = "report.json";
pub const PER_TARGET_FILE: &str = "per_target.csv";
pub const SCATTER_FILE: &str = "mu_dcr_vs_auc.csv";
pub const SWEEP_FILE: &str = "margin_sweep.csv";

/// Sample Pearson correlation; `None` when either input has zero variance.
pub fn pearson<T: Scalar>(xs: &[T], ys: &[T]) -> Result<Option<T>> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::InsufficientData(format!("{} points", xs.len())));
    }
    let n = T::from_count(xs.len());
    let mx = xs.iter().copied().sum::<T>() / n;
    let my = ys.iter().copied().sum::<T>() / n;
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy = sxy + dx * dy;
        sxx = sxx + dx * dx;
        syy = syy + dy * dy;
    }
    if sxx == T::zero() || syy == T::zero() {
        return Ok(None);
    }
    Ok(Some(
        (sxy / (sxx.sqrt() * syy.sqrt()))
            .max(-T::one())
            .min(T::one()),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrivateComparison {
    pub auc_all: f64,
    pub auc_private_only: f64,
}

/// AUC over all evaluation datasets and over those judged private only.
pub fn compare_private_vs_all(
    private: &[bool],
    scores: &[(f64, bool)],
) -> Result<PrivateComparison> {
    if private.len() != scores.len() {
        return Err(Error::LengthMismatch {
            left: private.len(),
            right: scores.len(),
        });
    }
    let kept: Vec<(f64, bool)> = scores
        .iter()
        .zip(private)
        .filter(|(_, &p)| p)
        .map(|(s, _)| *s)
        .collect();
    Ok(PrivateComparison {
        auc_all: roc_auc(scores)?,
        auc_private_only: roc_auc(&kept)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSource {
    pub csv: PathBuf,
    pub schema: PathBuf,
}

fn default_targets() -> usize {
    20
}

fn default_threshold() -> f64 {
    0.6
}

fn default_achilles_k() -> usize {
    5
}

/// Experiment definition; the JSON config file mirrors these field names.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub data: DataSource,
    pub split: SplitSpec,
    pub generator: GeneratorSpec,
    #[serde(default)]
    pub distance: DistanceConfig,
    #[serde(default)]
    pub game: GameConfig,
    #[serde(default = "default_targets")]
    pub n_targets: usize,
    /// Must equal `game.n_eval` when given: one synthetic dataset per
    /// evaluation model.
    #[serde(default)]
    pub n_synthetic_per_target: Option<usize>,
    #[serde(default = "default_threshold")]
    pub auc_leak_threshold: f64,
    #[serde(default = "default_achilles_k")]
    pub achilles_k: usize,
    #[serde(default = "default_p_grid")]
    pub sweep_grid: Vec<f64>,
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    /// Parse a config file. Relative paths inside it are resolved against
    /// the file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg: ExperimentConfig = serde_json::from_str(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.data.csv, &mut cfg.data.schema, &mut cfg.output_dir] {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_targets == 0 {
            return Err(Error::InvalidConfig("n_targets must be at least 1".into()));
        }
        if !(0.5..=1.0).contains(&self.auc_leak_threshold) {
            return Err(Error::InvalidConfig(format!(
                "auc_leak_threshold {} outside [0.5, 1]",
                self.auc_leak_threshold
            )));
        }
        if let Some(n) = self.n_synthetic_per_target {
            if n != self.game.n_eval {
                return Err(Error::InvalidConfig(format!(
                    "n_synthetic_per_target ({n}) must equal game.n_eval ({})",
                    self.game.n_eval
                )));
            }
        }
        if self.sweep_grid.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::InvalidConfig(
                "sweep_grid values must lie in [0, 1]".into(),
            ));
        }
        self.distance.validate()?;
        self.generator.validate()?;
        self.game.validate()
    }

    /// Game configuration for one target record.
    pub fn game_for(&self, record_index: usize) -> GameConfig {
        GameConfig {
            seed: derive_seed(self.game.seed, "target", record_index as u64),
            ..self.game.clone()
        }
    }
}

/// Loaded and partitioned data.
#[derive(Clone, Debug)]
pub struct PreparedData {
    pub target: Dataset,
    pub holdout: Dataset,
    pub aux: Dataset,
    pub indices: SplitIndices,
}

pub fn prepare(cfg: &ExperimentConfig) -> Result<PreparedData> {
    let source = tabular::load_csv(&cfg.data.csv, &cfg.data.schema)?;
    let indices = cfg.split.indices(source.len())?;
    let (target, holdout, aux) = tabular::split(&source, &cfg.split)?;
    Ok(PreparedData {
        target,
        holdout,
        aux,
        indices,
    })
}

/// Achilles scores and the selected targets in record-index order.
fn choose_targets(
    cfg: &ExperimentConfig,
    data: &PreparedData,
) -> Result<(Vec<VulnerabilityScore>, Vec<usize>)> {
    let scores = achilles_scores(&data.target, cfg.achilles_k, &cfg.distance)?;
    let mut chosen = select_targets(&scores, cfg.n_targets)?;
    chosen.sort_unstable();
    Ok((scores, chosen))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetRow {
    /// Position in the target split.
    pub record_index: usize,
    /// Row of the source CSV (0-based, header excluded).
    pub source_row: usize,
    pub achilles_score: f64,
    pub mia_auc: f64,
    pub tpr_at_fpr0: f64,
    pub mean_mu_dcr: f64,
    pub pct_fail_tau_dcr: f64,
    pub pct_fail_tau_combined: f64,
    /// AUC restricted to evaluation datasets passing the combined test;
    /// `None` when that subset lacks one of the classes.
    pub mia_auc_private_only: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub frac_private_tau_dcr: f64,
    pub frac_private_tau_combined: f64,
    pub frac_targets_auc_ge_threshold: f64,
    pub pearson_mu_dcr_vs_auc: Option<f64>,
    pub pearson_mu_dcr_vs_tpr: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Complete,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub status: RunStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub generator: String,
    pub n_eval: usize,
    pub auc_leak_threshold: f64,
    pub per_target: Vec<TargetRow>,
    pub aggregate: Aggregate,
}

impl ExperimentReport {
    /// Recompute the aggregate block from per-target rows.
    pub fn aggregate_from(rows: &[TargetRow], threshold: f64) -> Result<Aggregate> {
        let n = rows.len() as f64;
        if rows.is_empty() {
            return Ok(Aggregate {
                frac_private_tau_dcr: 0.0,
                frac_private_tau_combined: 0.0,
                frac_targets_auc_ge_threshold: 0.0,
                pearson_mu_dcr_vs_auc: None,
                pearson_mu_dcr_vs_tpr: None,
            });
        }
        let mean_pass =
            |pct: fn(&TargetRow) -> f64| 1.0 - rows.iter().map(pct).sum::<f64>() / (100.0 * n);
        let mu: Vec<f64> = rows.iter().map(|r| r.mean_mu_dcr).collect();
        let auc: Vec<f64> = rows.iter().map(|r| r.mia_auc).collect();
        let tpr: Vec<f64> = rows.iter().map(|r| r.tpr_at_fpr0).collect();
        let corr = |ys: &[f64]| {
            if rows.len() < 2 {
                Ok(None)
            } else {
                pearson(&mu, ys)
            }
        };
        Ok(Aggregate {
            frac_private_tau_dcr: mean_pass(|r| r.pct_fail_tau_dcr).clamp(0.0, 1.0),
            frac_private_tau_combined: mean_pass(|r| r.pct_fail_tau_combined).clamp(0.0, 1.0),
            frac_targets_auc_ge_threshold: frac_at_least(&auc, threshold),
            pearson_mu_dcr_vs_auc: corr(&auc)?,
            pearson_mu_dcr_vs_tpr: corr(&tpr)?,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Fraction of values at or above `threshold`.
pub fn frac_at_least(values: &[f64], threshold: f64) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.iter().filter(|&&v| v >= threshold).count() as f64 / values.len() as f64
    }
}

/// Proxy-test outcome of one evaluation synthetic dataset.
#[derive(Clone, Debug, PartialEq)]
pub struct DatasetAudit {
    pub world_index: usize,
    pub member: bool,
    pub tau_dcr: bool,
    pub tau_combined: bool,
    pub mu_dcr: f64,
    /// `(p, margin)` over the sweep grid.
    pub margins: Vec<(f64, f64)>,
}

/// One record's game plus the audits of its evaluation datasets.
#[derive(Clone, Debug)]
pub struct TargetResult {
    pub row: TargetRow,
    pub outcome: attacks::AttackOutcome,
    pub audits: Vec<DatasetAudit>,
}

/// Everything computed by an experiment.
#[derive(Clone, Debug)]
pub struct ExperimentRun {
    pub report: ExperimentReport,
    pub targets: Vec<TargetResult>,
    pub achilles: Vec<VulnerabilityScore>,
}

/// Progress notifications; the CLI prints them to stderr.
#[derive(Clone, Debug)]
pub enum Progress {
    Prepared {
        target: usize,
        holdout: usize,
        aux: usize,
    },
    TargetsSelected(Vec<usize>),
    TargetDone {
        record_index: usize,
        auc: f64,
    },
}

fn run_target(
    cfg: &ExperimentConfig,
    data: &PreparedData,
    auditor: &PrivacyAuditor<f64>,
    achilles: &[VulnerabilityScore],
    record_index: usize,
) -> Result<TargetResult> {
    let game = cfg.game_for(record_index);
    let (outcome, audits) = attacks::run_game_with(
        &data.target,
        record_index,
        &data.holdout,
        &data.aux,
        &cfg.generator,
        &game,
        |world_index, member, syn| {
            let audit = auditor.audit(syn)?;
            Ok(DatasetAudit {
                world_index,
                member,
                tau_dcr: audit.report.tau_dcr,
                tau_combined: audit.report.tau_combined,
                mu_dcr: audit.report.mu_dcr,
                margins: auditor.margins(&audit.dcr_synthetic, &cfg.sweep_grid)?,
            })
        },
    )?;
    let n = audits.len() as f64;
    let pct_fail =
        |f: fn(&DatasetAudit) -> bool| 100.0 * audits.iter().filter(|a| !f(a)).count() as f64 / n;
    let private: Vec<bool> = audits.iter().map(|a| a.tau_combined).collect();
    let row = TargetRow {
        record_index,
        source_row: data.indices.target[record_index],
        achilles_score: achilles[record_index].score,
        mia_auc: outcome.auc,
        tpr_at_fpr0: outcome.tpr_at_fpr0,
        mean_mu_dcr: audits.iter().map(|a| a.mu_dcr).sum::<f64>() / n,
        pct_fail_tau_dcr: pct_fail(|a| a.tau_dcr),
        pct_fail_tau_combined: pct_fail(|a| a.tau_combined),
        mia_auc_private_only: compare_private_vs_all(&private, &outcome.pairs())
            .ok()
            .map(|c| c.auc_private_only),
    };
    Ok(TargetResult {
        row,
        outcome,
        audits,
    })
}

/// Run the experiment in memory without writing artifacts.
pub fn execute(
    cfg: &ExperimentConfig,
    progress: &(dyn Fn(Progress) + Sync),
) -> Result<ExperimentRun> {
    cfg.validate()?;
    let data = prepare(cfg)?;
    progress(Progress::Prepared {
        target: data.target.len(),
        holdout: data.holdout.len(),
        aux: data.aux.len(),
    });
    let (achilles, chosen) = choose_targets(cfg, &data)?;
    progress(Progress::TargetsSelected(chosen.clone()));
    let auditor = PrivacyAuditor::<f64>::new(&data.target, &data.holdout, &cfg.distance)?;

    let results: Vec<Result<TargetResult>> = chosen
        .par_iter()
        .map(|&i| {
            let r = run_target(cfg, &data, &auditor, &achilles, i);
            if let Ok(t) = &r {
                progress(Progress::TargetDone {
                    record_index: i,
                    auc: t.outcome.auc,
                });
            }
            r
        })
        .collect();

    let mut targets = Vec::with_capacity(results.len());
    let mut failure = None;
    for (r, &i) in results.into_iter().zip(&chosen) {
        match r {
            Ok(t) => targets.push(t),
            Err(e) if failure.is_none() => failure = Some(format!("target {i}: {e}")),
            Err(_) => {}
        }
    }
    let rows: Vec<TargetRow> = targets.iter().map(|t| t.row.clone()).collect();
    let report = ExperimentReport {
        status: if failure.is_some() {
            RunStatus::Failed
        } else {
            RunStatus::Complete
        },
        error: failure,
        generator: cfg.generator.kind.name().to_owned(),
        n_eval: cfg.game.n_eval,
        auc_leak_threshold: cfg.auc_leak_threshold,
        aggregate: ExperimentReport::aggregate_from(&rows, cfg.auc_leak_threshold)?,
        per_target: rows,
    };
    Ok(ExperimentRun {
        report,
        targets,
        achilles,
    })
}

fn create_output_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    fs::File::create(path)
        .and_then(|mut f| f.write_all(contents))
        .map_err(|e| Error::io(path, e))
}

fn csv_bytes(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.into_inner()
        .map_err(|e| Error::io("<csv buffer>", e.into_error()))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Write `margin_sweep.csv` rows `(dataset_id, p, margin)`.
fn sweep_csv<'a>(curves: impl Iterator<Item = &'a MarginCurve>) -> Result<Vec<u8>> {
    csv_bytes(
        &["dataset_id", "p", "margin"],
        curves.flat_map(|c| {
            c.margins
                .iter()
                .map(move |(p, m)| vec![c.dataset_id.clone(), p.to_string(), m.to_string()])
        }),
    )
}

/// Run the experiment and write `report.json`, `per_target.csv`,
/// `mu_dcr_vs_auc.csv`, and `margin_sweep.csv` to the output directory.
///
/// When a target's game fails, the artifacts for completed targets are still
/// written, the report is marked failed, and [`Error::RunFailed`] is
/// returned.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    run_experiment_with_progress(cfg, &|_| {})
}

pub fn run_experiment_with_progress(
    cfg: &ExperimentConfig,
    progress: &(dyn Fn(Progress) + Sync),
) -> Result<ExperimentReport> {
    let run = execute(cfg, progress)?;
    let dir = &cfg.output_dir;
    create_output_dir(dir)?;
    let report = &run.report;
    write_file(&dir.join(REPORT_FILE), report.to_json().as_bytes())?;
    write_file(
        &dir.join(PER_TARGET_FILE),
        &csv_bytes(
            &[
                "record_index",
                "source_row",
                "achilles_score",
                "mia_auc",
                "tpr_at_fpr0",
                "mean_mu_dcr",
                "pct_fail_tau_dcr",
                "pct_fail_tau_combined",
                "mia_auc_private_only",
            ],
            report.per_target.iter().map(|r| {
                vec![
                    r.record_index.to_string(),
                    r.source_row.to_string(),
                    r.achilles_score.to_string(),
                    r.mia_auc.to_string(),
                    r.tpr_at_fpr0.to_string(),
                    r.mean_mu_dcr.to_string(),
                    r.pct_fail_tau_dcr.to_string(),
                    r.pct_fail_tau_combined.to_string(),
                    opt(r.mia_auc_private_only),
                ]
            }),
        )?,
    )?;
    write_file(
        &dir.join(SCATTER_FILE),
        &csv_bytes(
            &["record_index", "mean_mu_dcr", "mia_auc", "tpr_at_fpr0"],
            report.per_target.iter().map(|r| {
                vec![
                    r.record_index.to_string(),
                    r.mean_mu_dcr.to_string(),
                    r.mia_auc.to_string(),
                    r.tpr_at_fpr0.to_string(),
                ]
            }),
        )?,
    )?;
    let curves: Vec<MarginCurve> = run
        .targets
        .iter()
        .flat_map(MarginCurve::from_target)
        .collect();
    write_file(&dir.join(SWEEP_FILE), &sweep_csv(curves.iter())?)?;
    match &report.error {
        None => Ok(run.report),
        Some(message) => Err(Error::RunFailed {
            completed: report.per_target.len(),
            message: message.clone(),
        }),
    }
}

/// DCR-test margins of one synthetic dataset across percentile thresholds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginCurve {
    pub dataset_id: String,
    pub record_index: usize,
    pub world_index: usize,
    pub member: bool,
    pub margins: Vec<(f64, f64)>,
}

impl MarginCurve {
    fn id(record_index: usize, world_index: usize) -> String {
        format!("r{record_index}-w{world_index}")
    }

    fn from_target(t: &TargetResult) -> impl Iterator<Item = MarginCurve> + '_ {
        t.audits.iter().map(move |a| MarginCurve {
            dataset_id: Self::id(t.row.record_index, a.world_index),
            record_index: t.row.record_index,
            world_index: a.world_index,
            member: a.member,
            margins: a.margins.clone(),
        })
    }
}

/// Margin curves for every evaluation synthetic dataset of the selected
/// targets (the same datasets `run_experiment` generates), written to
/// `margin_sweep.csv`. Skips the shadow phase.
pub fn sweep_report(cfg: &ExperimentConfig, p_grid: &[f64]) -> Result<Vec<MarginCurve>> {
    cfg.validate()?;
    if p_grid.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::InvalidConfig(
            "grid values must lie in [0, 1]".into(),
        ));
    }
    let data = prepare(cfg)?;
    let (_, chosen) = choose_targets(cfg, &data)?;
    let auditor = PrivacyAuditor::<f64>::new(&data.target, &data.holdout, &cfg.distance)?;
    let mut curves = Vec::new();
    for &record_index in &chosen {
        let datasets = attacks::eval_synthetic_datasets(
            &data.target,
            record_index,
            &data.holdout,
            &cfg.generator,
            &cfg.game_for(record_index),
        )?;
        let batch: Vec<MarginCurve> = datasets
            .par_iter()
            .enumerate()
            .map(|(world_index, (member, syn))| {
                let dcr = auditor.audit(syn)?.dcr_synthetic;
                Ok(MarginCurve {
                    dataset_id: MarginCurve::id(record_index, world_index),
                    record_index,
                    world_index,
                    member: *member,
                    margins: auditor.margins(&dcr, p_grid)?,
                })
            })
            .collect::<Result<_>>()?;
        curves.extend(batch);
    }
    create_output_dir(&cfg.output_dir)?;
    write_file(&cfg.output_dir.join(SWEEP_FILE), &sweep_csv(curves.iter())?)?;
    Ok(curves)
}

/// Generator spec used for display.
pub fn describe(spec: &GeneratorSpec) -> String {
    serde_json::to_string(spec).expect("spec serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pearson_examples() {
        let xs = [1.0, 2.0, 3.0, 5.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        assert!((pearson(&xs, &ys).unwrap().unwrap() - 1.0).abs() < 1e-15);
        let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
        assert!((pearson(&xs, &neg).unwrap().unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(pearson(&xs, &[4.0; 4]).unwrap(), None);
        assert!(matches!(
            pearson(&xs, &[1.0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(pearson::<f32>(&[1.0, 2.0], &[2.0, 1.0]).unwrap().unwrap() < 0.0);
    }

    #[test]
    fn private_comparison() {
        let scores = [(0.9, true), (0.2, false), (0.7, true), (0.4, false)];
        let all = compare_private_vs_all(&[true; 4], &scores).unwrap();
        assert_eq!(all.auc_all, all.auc_private_only);
        assert!(matches!(
            compare_private_vs_all(&[false; 4], &scores),
            Err(Error::DegenerateLabels { .. })
        ));
    }

    #[test]
    fn threshold_fraction_is_monotone() {
        let aucs = [0.5, 0.61, 0.7, 0.95];
        assert_eq!(frac_at_least(&aucs, 0.6), 0.75);
        let mut last = 1.0;
        for t in [0.5, 0.6, 0.65, 0.8, 0.99, 1.0] {
            let f = frac_at_least(&aucs, t);
            assert!(f <= last);
            last = f;
        }
    }

    #[test]
    fn config_defaults_and_validation() {
        let json = r#"{
            "data": {"csv": "d.csv", "schema": "s.json"},
            "split": {"target_size": 10, "holdout_size": 5, "aux_size": 10, "seed": 1},
            "generator": {"kind": "indhist"},
            "output_dir": "out"
        }"#;
        let cfg: ExperimentConfig = serde_json::from_str(json).unwrap();
        assert_eq!(cfg.n_targets, 20);
        assert_eq!(cfg.auc_leak_threshold, 0.6);
        assert_eq!(cfg.game.n_eval, 200);
        assert_eq!(cfg.sweep_grid.len(), 11);
        assert!(cfg.validate().is_ok());
        let bad = ExperimentConfig {
            auc_leak_threshold: 0.4,
            ..cfg.clone()
        };
        assert!(bad.validate().is_err());
        let bad = ExperimentConfig {
            n_synthetic_per_target: Some(10),
            ..cfg
        };
        assert!(bad.validate().is_err());
        assert!(serde_json::from_str::<ExperimentConfig>(
            &json.replace("\"n_targets\"", "\"x\"").replace(
                "\"output_dir\": \"out\"",
                "\"output_dir\": \"out\", \"typo\": 1"
            )
        )
        .is_err());
    }
}
