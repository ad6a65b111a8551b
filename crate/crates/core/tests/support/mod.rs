//! Brute-force oracles and random fixtures shared by the integration and
//! acceptance tests. Everything here recomputes results from the definitions
//! with plain loops, without touching the crate's kernels.

#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use synaudit::metrics::{DistanceConfig, NumericScaling};
use synaudit::tabular::{Dataset, FeatureKind, FeatureSpec, Record, Role, Schema, Value};

pub fn random_schema<R: Rng>(rng: &mut R) -> Arc<Schema> {
    let n_num = rng.gen_range(0..=3);
    let n_cat = rng.gen_range(if n_num == 0 { 1 } else { 0 }..=3);
    let mut features = Vec::new();
    for i in 0..n_num {
        let lo = rng.gen_range(-5.0..5.0f64).round();
        // Occasionally a degenerate range to exercise the zero-range rule.
        let hi = if rng.gen_bool(0.1) {
            lo
        } else {
            lo + rng.gen_range(1.0..20.0f64).round()
        };
        features.push(FeatureSpec::numeric(format!("n{i}"), lo, hi));
    }
    for i in 0..n_cat {
        let card = rng.gen_range(2..=4);
        features.push(FeatureSpec::categorical(
            format!("c{i}"),
            (0..card).map(|c| format!("v{c}")),
        ));
    }
    Arc::new(Schema::new(features).unwrap())
}

/// Random record; numerics are drawn from a coarse grid half of the time so
/// that ties and exact duplicates occur.
pub fn random_record<R: Rng>(schema: &Schema, rng: &mut R) -> Record {
    Record::new(
        schema
            .features()
            .iter()
            .map(|f| match &f.kind {
                FeatureKind::Categorical { domain } => {
                    Value::Cat(rng.gen_range(0..domain.len() as u32))
                }
                FeatureKind::Numeric { min, max } => {
                    if max == min {
                        Value::Num(*min)
                    } else if rng.gen_bool(0.5) {
                        Value::Num(min + ((max - min) * f64::from(rng.gen_range(0..=4u32)) / 4.0))
                    } else {
                        Value::Num(rng.gen_range(*min..=*max))
                    }
                }
            })
            .collect(),
    )
}

pub fn random_dataset<R: Rng>(schema: &Arc<Schema>, n: usize, role: Role, rng: &mut R) -> Dataset {
    let mut rows: Vec<Record> = Vec::with_capacity(n);
    for _ in 0..n {
        if !rows.is_empty() && rng.gen_bool(0.1) {
            let j = rng.gen_range(0..rows.len());
            rows.push(rows[j].clone());
        } else {
            rows.push(random_record(schema, rng));
        }
    }
    Dataset::new(schema.clone(), rows, role).unwrap()
}

pub fn distance(a: &Record, b: &Record, schema: &Schema, cfg: &DistanceConfig) -> f64 {
    let mut squares = 0.0;
    let mut hamming = 0.0;
    for (f, spec) in schema.features().iter().enumerate() {
        match (&spec.kind, a[f], b[f]) {
            (FeatureKind::Numeric { min, max }, Value::Num(x), Value::Num(y)) => {
                let delta = match cfg.numeric_scaling {
                    NumericScaling::None => x - y,
                    NumericScaling::MinMaxOnTarget if max == min => 0.0,
                    NumericScaling::MinMaxOnTarget => (x - y) / (max - min),
                };
                squares += delta * delta;
            }
            (FeatureKind::Categorical { .. }, Value::Cat(x), Value::Cat(y)) => {
                if x != y {
                    hamming += 1.0;
                }
            }
            _ => panic!("record does not match schema"),
        }
    }
    squares.sqrt() + hamming
}

fn all_distances(q: &Record, reference: &Dataset, cfg: &DistanceConfig) -> Vec<f64> {
    let mut ds: Vec<f64> = reference
        .rows()
        .iter()
        .map(|r| distance(q, r, reference.schema(), cfg))
        .collect();
    ds.sort_by(f64::total_cmp);
    ds
}

pub fn dcr(d1: &Dataset, d2: &Dataset, cfg: &DistanceConfig) -> Vec<f64> {
    d1.rows()
        .iter()
        .map(|q| all_distances(q, d2, cfg)[0])
        .collect()
}

pub fn nndr(d1: &Dataset, d2: &Dataset, cfg: &DistanceConfig) -> Vec<f64> {
    d1.rows()
        .iter()
        .map(|q| {
            let ds = all_distances(q, d2, cfg);
            if ds[1] == 0.0 {
                1.0
            } else {
                ds[0] / ds[1]
            }
        })
        .collect()
}

pub fn ims(d1: &Dataset, d2: &Dataset) -> usize {
    d1.rows()
        .iter()
        .filter(|a| d2.rows().iter().any(|b| *a == b))
        .count()
}

/// Inclusive linear interpolation, written as the weighted average of the
/// two order statistics around rank `p (n - 1)`.
pub fn percentile(v: &[f64], p: f64) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let rank = p * (s.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    if lo == hi {
        s[lo]
    } else {
        let w = rank - lo as f64;
        s[lo] + w * (s[hi] - s[lo])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub tau_dcr: bool,
    pub tau_nndr: bool,
    pub tau_ims: bool,
    pub tau_combined: bool,
    pub mu_dcr: f64,
    pub ims_synthetic: usize,
    pub ims_holdout: usize,
    pub dcr_syn: f64,
    pub dcr_hold: f64,
    pub nndr_syn: f64,
    pub nndr_hold: f64,
}

pub fn privacy_tests(
    syn: &Dataset,
    target: &Dataset,
    holdout: &Dataset,
    cfg: &DistanceConfig,
) -> OracleReport {
    let p = cfg.percentile_p;
    let ds = dcr(syn, target, cfg);
    let dcr_syn = percentile(&ds, p);
    let dcr_hold = percentile(&dcr(holdout, target, cfg), p);
    let nndr_syn = percentile(&nndr(syn, target, cfg), p);
    let nndr_hold = percentile(&nndr(holdout, target, cfg), p);
    let ims_synthetic = ims(syn, target);
    let ims_holdout = ims(holdout, target);
    let (tau_dcr, tau_nndr, tau_ims) = (
        dcr_syn >= dcr_hold,
        nndr_syn >= nndr_hold,
        ims_synthetic <= ims_holdout,
    );
    OracleReport {
        tau_dcr,
        tau_nndr,
        tau_ims,
        tau_combined: tau_dcr && tau_nndr && tau_ims,
        mu_dcr: ds.iter().sum::<f64>() / ds.len() as f64,
        ims_synthetic,
        ims_holdout,
        dcr_syn,
        dcr_hold,
        nndr_syn,
        nndr_hold,
    }
}

/// AUC by counting every (member, non-member) pair; ties count one half.
pub fn auc(scores: &[(f64, bool)]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for &(s1, m1) in scores {
        if !m1 {
            continue;
        }
        for &(s0, m0) in scores {
            if m0 {
                continue;
            }
            pairs += 1.0;
            if s1 > s0 {
                wins += 1.0;
            } else if s1 == s0 {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}

/// Scan every candidate threshold (each observed score and +inf) and keep
/// the best TPR among those with no false positives, predicting member when
/// `score >= threshold`.
pub fn tpr_at_fpr_zero(scores: &[(f64, bool)]) -> f64 {
    let positives = scores.iter().filter(|s| s.1).count() as f64;
    let mut thresholds: Vec<f64> = scores.iter().map(|s| s.0).collect();
    thresholds.push(f64::INFINITY);
    thresholds
        .into_iter()
        .filter(|&t| !scores.iter().any(|&(s, m)| !m && s >= t))
        .map(|t| scores.iter().filter(|&&(s, m)| m && s >= t).count() as f64 / positives)
        .fold(0.0, f64::max)
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite input")
}

/// Pearson correlation from exact rational sums; only the final square root
/// runs in floating point. `None` for zero variance.
pub fn pearson_exact(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = BigRational::from_integer(BigInt::from(xs.len()));
    let mx = xs.iter().map(|&x| exact(x)).sum::<BigRational>() / &n;
    let my = ys.iter().map(|&y| exact(y)).sum::<BigRational>() / &n;
    let (mut sxy, mut sxx, mut syy) = (
        BigRational::zero(),
        BigRational::zero(),
        BigRational::zero(),
    );
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = exact(x) - &mx;
        let dy = exact(y) - &my;
        sxy += &dx * &dy;
        sxx += &dx * &dx;
        syy += &dy * &dy;
    }
    if sxx.is_zero() || syy.is_zero() {
        return None;
    }
    let r2 = (&sxy * &sxy) / (sxx * syy);
    let r = r2.to_f64().unwrap().sqrt();
    Some(if sxy.is_negative() { -r } else { r })
}

/// Mutual information in nats of two code columns from the joint table.
pub fn mutual_information(a: &[u32], b: &[u32]) -> f64 {
    use std::collections::HashMap;
    let n = a.len() as f64;
    let mut joint: HashMap<(u32, u32), f64> = HashMap::new();
    let mut pa: HashMap<u32, f64> = HashMap::new();
    let mut pb: HashMap<u32, f64> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *joint.entry((x, y)).or_default() += 1.0;
        *pa.entry(x).or_default() += 1.0;
        *pb.entry(y).or_default() += 1.0;
    }
    joint
        .iter()
        .map(|(&(x, y), &c)| {
            let pxy = c / n;
            pxy * (pxy / ((pa[&x] / n) * (pb[&y] / n))).ln()
        })
        .sum()
}

/// Categorical codes of column `f`.
pub fn cat_column(d: &Dataset, f: usize) -> Vec<u32> {
    d.rows()
        .iter()
        .map(|r| r[f].as_cat().expect("categorical"))
        .collect()
}
