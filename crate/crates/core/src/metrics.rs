//! Distance-based proxy privacy metrics.
//!
//! The record distance is the Euclidean norm over numeric attributes plus the
//! Hamming count over categorical attributes. Nearest-neighbor searches are
//! exact; the scan over query records runs in parallel and each query's
//! result is computed independently, so outputs do not depend on the number
//! of worker threads.

use std::collections::HashSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tabular::{Dataset, FeatureKind, Record, Schema, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NumericScaling {
    None,
    /// Divide numeric deltas by the schema range `max - min`.
    #[default]
    #[serde(alias = "minmax")]
    MinMaxOnTarget,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    #[default]
    LowestIndex,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DistanceConfig {
    pub numeric_scaling: NumericScaling,
    pub nn_tie_break: TieBreak,
    pub percentile_p: f64,
}

impl Default for DistanceConfig {
    fn default() -> Self {
        DistanceConfig {
            numeric_scaling: NumericScaling::MinMaxOnTarget,
            nn_tie_break: TieBreak::LowestIndex,
            percentile_p: 0.05,
        }
    }
}

impl DistanceConfig {
    pub fn unscaled() -> Self {
        DistanceConfig {
            numeric_scaling: NumericScaling::None,
            ..Self::default()
        }
    }

    pub fn with_p(self, percentile_p: f64) -> Self {
        DistanceConfig {
            percentile_p,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_fraction(self.percentile_p)
    }
}

fn check_fraction(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "percentile {p} outside [0, 1]"
        )))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceMetric {
    Dcr,
    Nndr,
}

/// Per-record nearest-neighbor statistic of a query dataset against a
/// reference dataset.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceVector<T> {
    pub values: Vec<T>,
    pub metric: DistanceMetric,
}

impl<T: Scalar> DistanceVector<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> Result<T> {
        if self.values.is_empty() {
            return Err(Error::EmptyVector);
        }
        Ok(self.values.iter().copied().sum::<T>() / T::from_count(self.values.len()))
    }

    pub fn percentile(&self, p: f64) -> Result<T> {
        percentile(&self.values, p)
    }
}

/// Row-major flat encoding of a dataset for the distance kernel.
#[derive(Clone, Debug)]
struct Encoded<T> {
    rows: usize,
    num_width: usize,
    cat_width: usize,
    num: Vec<T>,
    cat: Vec<u32>,
}

impl<T: Scalar> Encoded<T> {
    fn new(d: &Dataset) -> Self {
        let schema = d.schema();
        let num_width = schema.numeric_features().len();
        let cat_width = schema.len() - num_width;
        let mut num = Vec::with_capacity(num_width * d.len());
        let mut cat = Vec::with_capacity(cat_width * d.len());
        for r in d.rows() {
            encode_into(r, &mut num, &mut cat);
        }
        Encoded {
            rows: d.len(),
            num_width,
            cat_width,
            num,
            cat,
        }
    }

    fn num_row(&self, i: usize) -> &[T] {
        &self.num[i * self.num_width..(i + 1) * self.num_width]
    }

    fn cat_row(&self, i: usize) -> &[u32] {
        &self.cat[i * self.cat_width..(i + 1) * self.cat_width]
    }
}

fn encode_into<T: Scalar>(r: &Record, num: &mut Vec<T>, cat: &mut Vec<u32>) {
    for v in r.iter() {
        match *v {
            Value::Num(x) => num.push(T::from_f64_lossy(x)),
            Value::Cat(c) => cat.push(c),
        }
    }
}

/// Mixed Euclidean + Hamming distance with optional min–max scaling.
#[derive(Clone, Debug)]
pub struct DistanceKernel<T> {
    /// Per numeric feature: `Some(range)` to divide by, `None` to use the raw
    /// delta. A zero range maps every delta to zero.
    ranges: Option<Vec<T>>,
}

impl<T: Scalar> DistanceKernel<T> {
    pub fn new(schema: &Schema, cfg: &DistanceConfig) -> Self {
        let ranges = match cfg.numeric_scaling {
            NumericScaling::None => None,
            NumericScaling::MinMaxOnTarget => Some(
                schema
                    .features()
                    .iter()
                    .filter_map(|f| match f.kind {
                        FeatureKind::Numeric { min, max } => Some(T::from_f64_lossy(max - min)),
                        FeatureKind::Categorical { .. } => None,
                    })
                    .collect(),
            ),
        };
        DistanceKernel { ranges }
    }

    /// Distance between two encoded rows, or `None` once it provably exceeds
    /// `bound`. Whenever a value is returned it is the exact distance, so the
    /// pruning never alters results.
    #[inline]
    fn bounded(&self, an: &[T], ac: &[u32], bn: &[T], bc: &[u32], bound: T) -> Option<T> {
        let hamming = T::from_count(ac.iter().zip(bc).filter(|(x, y)| x != y).count());
        if hamming > bound {
            return None;
        }
        let slack = bound - hamming;
        // Squared-radius cut with a relative margin well above rounding error.
        let cut = if slack.is_finite() {
            slack * slack * T::from_f64_lossy(1.0 + 1e-6)
        } else {
            T::infinity()
        };
        let mut sq = T::zero();
        match &self.ranges {
            None => {
                for (x, y) in an.iter().zip(bn) {
                    let d = *x - *y;
                    sq = sq + d * d;
                    if sq > cut {
                        return None;
                    }
                }
            }
            Some(ranges) => {
                for ((x, y), r) in an.iter().zip(bn).zip(ranges) {
                    let d = if *r > T::zero() {
                        (*x - *y) / *r
                    } else {
                        T::zero()
                    };
                    sq = sq + d * d;
                    if sq > cut {
                        return None;
                    }
                }
            }
        }
        Some(sq.sqrt() + hamming)
    }

    fn full(&self, an: &[T], ac: &[u32], bn: &[T], bc: &[u32]) -> T {
        self.bounded(an, ac, bn, bc, T::infinity())
            .expect("unbounded distance")
    }
}

/// Mixed-type distance between two records of `schema`.
pub fn record_distance<T: Scalar>(
    a: &Record,
    b: &Record,
    schema: &Schema,
    cfg: &DistanceConfig,
) -> Result<T> {
    schema.validate(a)?;
    schema.validate(b)?;
    let kernel = DistanceKernel::<T>::new(schema, cfg);
    let (mut an, mut ac, mut bn, mut bc) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    encode_into(a, &mut an, &mut ac);
    encode_into(b, &mut bn, &mut bc);
    Ok(kernel.full(&an, &ac, &bn, &bc))
}

/// The two smallest distances from a query record into a reference dataset,
/// with the index of the nearest (lowest index on ties).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NearestPair<T> {
    pub nearest: T,
    pub nearest_index: usize,
    /// Infinite when the reference holds a single record.
    pub second: T,
}

impl<T: Scalar> NearestPair<T> {
    /// `nearest / second`, defined as 1 when `second` is zero.
    pub fn ratio(&self) -> T {
        if self.second == T::zero() {
            T::one()
        } else {
            self.nearest / self.second
        }
    }
}

/// Reference dataset prepared for repeated exact nearest-neighbor queries.
#[derive(Clone, Debug)]
pub struct NeighborIndex<T> {
    kernel: DistanceKernel<T>,
    reference: Encoded<T>,
    schema: Arc<Schema>,
}

impl<T: Scalar> NeighborIndex<T> {
    pub fn new(reference: &Dataset, cfg: &DistanceConfig) -> Self {
        NeighborIndex {
            kernel: DistanceKernel::new(reference.schema(), cfg),
            reference: Encoded::new(reference),
            schema: Arc::clone(reference.schema_arc()),
        }
    }

    pub fn len(&self) -> usize {
        self.reference.rows
    }

    pub fn is_empty(&self) -> bool {
        self.reference.rows == 0
    }

    fn scan(&self, qn: &[T], qc: &[u32], skip: Option<usize>) -> NearestPair<T> {
        let r = &self.reference;
        let (mut best, mut best_index, mut second) = (T::infinity(), usize::MAX, T::infinity());
        for j in 0..r.rows {
            if Some(j) == skip {
                continue;
            }
            if let Some(d) = self
                .kernel
                .bounded(qn, qc, r.num_row(j), r.cat_row(j), second)
            {
                if d < best {
                    second = best;
                    best = d;
                    best_index = j;
                } else if d < second {
                    second = d;
                }
            }
        }
        NearestPair {
            nearest: best,
            nearest_index: best_index,
            second,
        }
    }

    /// Nearest and second-nearest distances for every record of `query`.
    pub fn nearest_two(&self, query: &Dataset) -> Result<Vec<NearestPair<T>>> {
        query.ensure_schema(&self.schema)?;
        if self.is_empty() {
            return Err(Error::EmptyReference {
                needed: 1,
                available: 0,
            });
        }
        let q = Encoded::<T>::new(query);
        Ok((0..q.rows)
            .into_par_iter()
            .map(|i| self.scan(q.num_row(i), q.cat_row(i), None))
            .collect())
    }

    /// The `k` smallest distances from each reference record to the other
    /// reference records (self excluded by index), ascending.
    pub fn self_knn(&self, k: usize) -> Vec<Vec<T>> {
        let r = &self.reference;
        (0..r.rows)
            .into_par_iter()
            .map(|i| {
                let mut best: Vec<T> = Vec::with_capacity(k + 1);
                for j in 0..r.rows {
                    if i == j {
                        continue;
                    }
                    let bound = if best.len() < k {
                        T::infinity()
                    } else {
                        best[k - 1]
                    };
                    if let Some(d) = self.kernel.bounded(
                        r.num_row(i),
                        r.cat_row(i),
                        r.num_row(j),
                        r.cat_row(j),
                        bound,
                    ) {
                        if best.len() < k || d < best[k - 1] {
                            let pos = best.partition_point(|&b| b <= d);
                            best.insert(pos, d);
                            best.truncate(k);
                        }
                    }
                }
                best
            })
            .collect()
    }

    pub fn dcr(&self, query: &Dataset) -> Result<DistanceVector<T>> {
        Ok(DistanceVector {
            values: self.nearest_two(query)?.iter().map(|p| p.nearest).collect(),
            metric: DistanceMetric::Dcr,
        })
    }

    pub fn nndr(&self, query: &Dataset) -> Result<DistanceVector<T>> {
        if self.len() < 2 {
            return Err(Error::EmptyReference {
                needed: 2,
                available: self.len(),
            });
        }
        Ok(DistanceVector {
            values: self
                .nearest_two(query)?
                .iter()
                .map(NearestPair::ratio)
                .collect(),
            metric: DistanceMetric::Nndr,
        })
    }
}

/// `d_DCR(d1, d2)`: distance from each record of `d1` to its nearest
/// neighbor in `d2`.
pub fn dcr_vector<T: Scalar>(
    d1: &Dataset,
    d2: &Dataset,
    cfg: &DistanceConfig,
) -> Result<DistanceVector<T>> {
    d1.ensure_same_schema(d2)?;
    NeighborIndex::new(d2, cfg).dcr(d1)
}

/// `d_NNDR(d1, d2)`: nearest over second-nearest distance ratio.
pub fn nndr_vector<T: Scalar>(
    d1: &Dataset,
    d2: &Dataset,
    cfg: &DistanceConfig,
) -> Result<DistanceVector<T>> {
    d1.ensure_same_schema(d2)?;
    NeighborIndex::new(d2, cfg).nndr(d1)
}

/// Exact-match lookup over a reference dataset.
#[derive(Clone, Debug)]
pub struct MatchSet {
    keys: HashSet<Vec<u64>>,
}

impl MatchSet {
    pub fn new(reference: &Dataset) -> Self {
        MatchSet {
            keys: reference.rows().iter().map(Record::key).collect(),
        }
    }

    pub fn contains(&self, r: &Record) -> bool {
        self.keys.contains(&r.key())
    }

    /// Records of `query` (counted per record) with an identical match.
    pub fn count(&self, query: &Dataset) -> usize {
        query.rows().iter().filter(|r| self.contains(r)).count()
    }
}

/// `d_IMS(d1, d2)`: number of records of `d1` identical to some record of
/// `d2`. Duplicates in `d1` are counted individually.
pub fn ims_count(d1: &Dataset, d2: &Dataset) -> Result<usize> {
    d1.ensure_same_schema(d2)?;
    Ok(MatchSet::new(d2).count(d1))
}

/// Inclusive linear-interpolation percentile (`p` in `[0, 1]`).
pub fn percentile<T: Scalar>(v: &[T], p: f64) -> Result<T> {
    if v.is_empty() {
        return Err(Error::EmptyVector);
    }
    check_fraction(p)?;
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
    Ok(percentile_sorted(&sorted, p))
}

/// Percentile of an already ascending slice.
pub(crate) fn percentile_sorted<T: Scalar>(sorted: &[T], p: f64) -> T {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = T::from_f64_lossy(pos - lo as f64);
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

mod bit {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &bool, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(u8::from(*v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<bool, D::Error> {
        match u8::deserialize(d)? {
            0 => Ok(false),
            1 => Ok(true),
            other => Err(serde::de::Error::custom(format!(
                "expected 0 or 1, got {other}"
            ))),
        }
    }
}

/// Verdicts of the proxy privacy tests for one synthetic dataset. Test bits
/// serialize as `0`/`1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrivacyReport {
    #[serde(with = "bit")]
    pub tau_dcr: bool,
    #[serde(with = "bit")]
    pub tau_nndr: bool,
    #[serde(with = "bit")]
    pub tau_ims: bool,
    #[serde(with = "bit")]
    pub tau_combined: bool,
    pub mu_dcr: f64,
    pub ims_synthetic: usize,
    pub ims_holdout: usize,
    pub p_used: f64,
    pub dcr_percentile_synthetic: f64,
    pub dcr_percentile_holdout: f64,
    pub nndr_percentile_synthetic: f64,
    pub nndr_percentile_holdout: f64,
}

/// A report together with the synthetic DCR vector it was derived from.
#[derive(Clone, Debug)]
pub struct PrivacyAudit<T> {
    pub report: PrivacyReport,
    pub dcr_synthetic: DistanceVector<T>,
    pub nndr_synthetic: DistanceVector<T>,
}

/// Target/holdout baseline reused across many synthetic datasets.
#[derive(Clone, Debug)]
pub struct PrivacyAuditor<T> {
    cfg: DistanceConfig,
    target_index: NeighborIndex<T>,
    target_matches: MatchSet,
    dcr_holdout_sorted: Vec<T>,
    nndr_holdout_sorted: Vec<T>,
    ims_holdout: usize,
}

fn sorted<T: Scalar>(mut v: Vec<T>) -> Vec<T> {
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
    v
}

impl<T: Scalar> PrivacyAuditor<T> {
    pub fn new(target: &Dataset, holdout: &Dataset, cfg: &DistanceConfig) -> Result<Self> {
        cfg.validate()?;
        target.ensure_same_schema(holdout)?;
        if target.len() < 2 {
            return Err(Error::EmptyReference {
                needed: 2,
                available: target.len(),
            });
        }
        if holdout.is_empty() {
            return Err(Error::EmptyVector);
        }
        let target_index = NeighborIndex::new(target, cfg);
        let pairs = target_index.nearest_two(holdout)?;
        let target_matches = MatchSet::new(target);
        Ok(PrivacyAuditor {
            cfg: *cfg,
            dcr_holdout_sorted: sorted(pairs.iter().map(|p| p.nearest).collect()),
            nndr_holdout_sorted: sorted(pairs.iter().map(NearestPair::ratio).collect()),
            ims_holdout: target_matches.count(holdout),
            target_index,
            target_matches,
        })
    }

    pub fn config(&self) -> &DistanceConfig {
        &self.cfg
    }

    pub fn holdout_dcr_percentile(&self, p: f64) -> Result<T> {
        check_fraction(p)?;
        Ok(percentile_sorted(&self.dcr_holdout_sorted, p))
    }

    pub fn audit(&self, synthetic: &Dataset) -> Result<PrivacyAudit<T>> {
        if synthetic.is_empty() {
            return Err(Error::EmptyVector);
        }
        let p = self.cfg.percentile_p;
        let pairs = self.target_index.nearest_two(synthetic)?;
        let dcr = DistanceVector {
            values: pairs.iter().map(|q| q.nearest).collect(),
            metric: DistanceMetric::Dcr,
        };
        let nndr = DistanceVector {
            values: pairs.iter().map(NearestPair::ratio).collect(),
            metric: DistanceMetric::Nndr,
        };
        let dcr_syn = dcr.percentile(p)?;
        let dcr_hold = percentile_sorted(&self.dcr_holdout_sorted, p);
        let nndr_syn = nndr.percentile(p)?;
        let nndr_hold = percentile_sorted(&self.nndr_holdout_sorted, p);
        let ims_synthetic = self.target_matches.count(synthetic);
        let tau_dcr = dcr_syn >= dcr_hold;
        let tau_nndr = nndr_syn >= nndr_hold;
        let tau_ims = ims_synthetic <= self.ims_holdout;
        let report = PrivacyReport {
            tau_dcr,
            tau_nndr,
            tau_ims,
            tau_combined: tau_dcr && tau_nndr && tau_ims,
            mu_dcr: dcr.mean()?.as_f64(),
            ims_synthetic,
            ims_holdout: self.ims_holdout,
            p_used: p,
            dcr_percentile_synthetic: dcr_syn.as_f64(),
            dcr_percentile_holdout: dcr_hold.as_f64(),
            nndr_percentile_synthetic: nndr_syn.as_f64(),
            nndr_percentile_holdout: nndr_hold.as_f64(),
        };
        Ok(PrivacyAudit {
            report,
            dcr_synthetic: dcr,
            nndr_synthetic: nndr,
        })
    }

    /// `percentile(d_DCR(synthetic)) - percentile(d_DCR(holdout))` at every
    /// `p` of the grid, given the synthetic DCR vector.
    pub fn margins(
        &self,
        dcr_synthetic: &DistanceVector<T>,
        p_grid: &[f64],
    ) -> Result<Vec<(f64, T)>> {
        if dcr_synthetic.is_empty() {
            return Err(Error::EmptyVector);
        }
        let syn = sorted(dcr_synthetic.values.clone());
        p_grid
            .iter()
            .map(|&p| {
                check_fraction(p)?;
                Ok((
                    p,
                    percentile_sorted(&syn, p) - percentile_sorted(&self.dcr_holdout_sorted, p),
                ))
            })
            .collect()
    }
}

/// Apply the DCR, NNDR and IMS tests and compute `mu_DCR`.
pub fn privacy_tests<T: Scalar>(
    synthetic: &Dataset,
    target: &Dataset,
    holdout: &Dataset,
    cfg: &DistanceConfig,
) -> Result<PrivacyReport> {
    synthetic.ensure_same_schema(target)?;
    Ok(PrivacyAuditor::<T>::new(target, holdout, cfg)?
        .audit(synthetic)?
        .report)
}

/// The DCR test margin across percentile thresholds; the dataset passes the
/// DCR test at `p` iff the margin is non-negative.
pub fn dcr_margin_sweep<T: Scalar>(
    synthetic: &Dataset,
    target: &Dataset,
    holdout: &Dataset,
    cfg: &DistanceConfig,
    p_grid: &[f64],
) -> Result<Vec<(f64, T)>> {
    synthetic.ensure_same_schema(target)?;
    let auditor = PrivacyAuditor::<T>::new(target, holdout, cfg)?;
    let dcr = auditor.target_index.dcr(synthetic)?;
    auditor.margins(&dcr, p_grid)
}

/// `{0.00, 0.01, ..., 0.10}`.
pub fn default_p_grid() -> Vec<f64> {
    (0..=10).map(|i| f64::from(i) / 100.0).collect()
}
