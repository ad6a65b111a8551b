//! Distance-based outlier scores for choosing attack targets.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{DistanceConfig, NeighborIndex};
use crate::tabular::Dataset;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VulnerabilityScore {
    pub record_index: usize,
    /// Mean distance to the `k` nearest other records.
    pub score: f64,
    pub k: usize,
}

/// Produces one score per record; higher means more exposed.
pub trait VulnerabilityScorer {
    fn score(&self, d: &Dataset, cfg: &DistanceConfig) -> Result<Vec<VulnerabilityScore>>;
}

/// Mean distance to the `k` nearest neighbors within the dataset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KnnDistanceScorer {
    pub k: usize,
}

impl Default for KnnDistanceScorer {
    fn default() -> Self {
        KnnDistanceScorer { k: 5 }
    }
}

impl VulnerabilityScorer for KnnDistanceScorer {
    fn score(&self, d: &Dataset, cfg: &DistanceConfig) -> Result<Vec<VulnerabilityScore>> {
        achilles_scores(d, self.k, cfg)
    }
}

/// Mean of the `k` smallest distances from each record to the other records
/// of `d` (the record itself excluded by position).
pub fn achilles_scores(
    d: &Dataset,
    k: usize,
    cfg: &DistanceConfig,
) -> Result<Vec<VulnerabilityScore>> {
    if k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    if d.len() <= k {
        return Err(Error::InsufficientRows {
            needed: k + 1,
            available: d.len(),
        });
    }
    let knn = NeighborIndex::<f64>::new(d, cfg).self_knn(k);
    Ok(knn
        .into_iter()
        .enumerate()
        .map(|(record_index, nearest)| VulnerabilityScore {
            record_index,
            score: nearest.iter().sum::<f64>() / k as f64,
            k,
        })
        .collect())
}

/// Record indices of the `n` highest scores, descending; ties go to the
/// lower record index.
pub fn select_targets(scores: &[VulnerabilityScore], n: usize) -> Result<Vec<usize>> {
    if n > scores.len() {
        return Err(Error::CountExceedsDataset {
            requested: n,
            available: scores.len(),
        });
    }
    let mut ranked = scores.to_vec();
    ranked.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then(a.record_index.cmp(&b.record_index))
    });
    Ok(ranked.iter().take(n).map(|s| s.record_index).collect())
}

/// `record_index,score` rows.
pub fn write_scores_csv<W: Write>(scores: &[VulnerabilityScore], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["record_index", "score"])?;
    for s in scores {
        w.write_record([s.record_index.to_string(), s.score.to_string()])?;
    }
    w.flush().map_err(|e| Error::io("<scores csv>", e))?;
    Ok(())
}
