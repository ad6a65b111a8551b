use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::rng::pick_cumulative;
use crate::tabular::{Dataset, FeatureKind, Record, Value};

use super::binning::{lerp, EqualWidthBins};

/// Empirical distribution of one attribute.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Marginal {
    /// Frequency of each domain code.
    Categorical { counts: Vec<u64> },
    /// Frequency of each equal-width bin; values are drawn uniformly within
    /// the chosen bin.
    Numeric {
        bins: EqualWidthBins,
        counts: Vec<u64>,
    },
}

impl Marginal {
    fn cumulative(&self) -> Vec<f64> {
        let counts = match self {
            Marginal::Categorical { counts } | Marginal::Numeric { counts, .. } => counts,
        };
        counts
            .iter()
            .scan(0.0, |acc, &c| {
                *acc += c as f64;
                Some(*acc)
            })
            .collect()
    }
}

/// Independent per-attribute histograms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndHistModel {
    pub marginals: Vec<Marginal>,
}

impl IndHistModel {
    pub fn fit(train: &Dataset, bins: usize) -> Self {
        let schema = train.schema();
        let marginals = schema
            .features()
            .iter()
            .enumerate()
            .map(|(f, spec)| match &spec.kind {
                FeatureKind::Categorical { domain } => {
                    let mut counts = vec![0u64; domain.len()];
                    for r in train.rows() {
                        counts[r[f].as_cat().expect("categorical") as usize] += 1;
                    }
                    Marginal::Categorical { counts }
                }
                FeatureKind::Numeric { .. } => {
                    let values: Vec<f64> = train
                        .rows()
                        .iter()
                        .map(|r| r[f].as_num().expect("numeric"))
                        .collect();
                    let bins = EqualWidthBins::fit(&values, bins);
                    let mut counts = vec![0u64; bins.bins];
                    for &v in &values {
                        counts[bins.bin(v)] += 1;
                    }
                    Marginal::Numeric { bins, counts }
                }
            })
            .collect();
        IndHistModel { marginals }
    }

    /// Sampler with precomputed cumulative tables.
    pub fn sampler(&self) -> IndHistSampler<'_> {
        IndHistSampler {
            model: self,
            cumulative: self.marginals.iter().map(Marginal::cumulative).collect(),
        }
    }
}

pub struct IndHistSampler<'a> {
    model: &'a IndHistModel,
    cumulative: Vec<Vec<f64>>,
}

impl IndHistSampler<'_> {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Record {
        let values = self
            .model
            .marginals
            .iter()
            .zip(&self.cumulative)
            .map(|(m, cum)| {
                let cell = pick_cumulative(cum, rng);
                match m {
                    Marginal::Categorical { .. } => Value::Cat(cell as u32),
                    Marginal::Numeric { bins, .. } => {
                        let (lo, hi) = bins.bounds(cell);
                        Value::Num(lerp(lo, hi, rng.gen::<f64>()))
                    }
                }
            })
            .collect();
        Record::new(values)
    }
}
