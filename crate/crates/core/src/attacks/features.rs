use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::QuantileBins;
use crate::rng;
use crate::tabular::{Dataset, Record, Schema, Value};

/// Attribute subsets queried against every synthetic dataset of a game.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryFeatureSpec {
    pub subsets: Vec<Vec<usize>>,
}

impl QueryFeatureSpec {
    /// `n_queries` subsets, each of uniform size in `1..=max_size` with
    /// uniformly drawn distinct attributes (sorted).
    pub fn random<R: Rng + ?Sized>(
        k: usize,
        n_queries: usize,
        max_size: usize,
        rng: &mut R,
    ) -> Self {
        let max_size = max_size.clamp(1, k);
        let subsets = (0..n_queries)
            .map(|_| {
                let size = 1 + rng::uniform_index(rng, max_size);
                let mut s = rng::sample_without_replacement(k, size, rng);
                s.sort_unstable();
                s
            })
            .collect();
        QueryFeatureSpec { subsets }
    }

    pub fn validate(&self, schema: &Schema) -> Result<()> {
        for s in &self.subsets {
            if s.is_empty() || s.iter().any(|&f| f >= schema.len()) {
                return Err(Error::InvalidConfig(format!("invalid query subset {s:?}")));
            }
        }
        Ok(())
    }

    /// Length of the feature vector: one entry per subset plus the
    /// full-record match rate.
    pub fn width(&self) -> usize {
        self.subsets.len() + 1
    }
}

/// Maps attribute values to the codes compared by queries: categorical codes
/// as-is, numeric values to decile bins of a reference dataset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryEncoder {
    bins: Vec<Option<QuantileBins>>,
}

impl QueryEncoder {
    pub const DECILES: usize = 10;

    pub fn fit(reference: &Dataset) -> Self {
        let schema = reference.schema();
        let bins = (0..schema.len())
            .map(|f| {
                if schema.feature(f).is_categorical() || reference.is_empty() {
                    None
                } else {
                    let v: Vec<f64> = reference
                        .rows()
                        .iter()
                        .map(|r| r[f].as_num().expect("numeric"))
                        .collect();
                    Some(QuantileBins::fit(&v, Self::DECILES))
                }
            })
            .collect();
        QueryEncoder { bins }
    }

    fn code(&self, f: usize, v: Value) -> u64 {
        match (v, &self.bins[f]) {
            (Value::Cat(c), _) => u64::from(c),
            (Value::Num(x), Some(q)) => q.bin(x) as u64,
            // No reference data: fall back to the exact bit pattern.
            (Value::Num(x), None) => x.to_bits(),
        }
    }
}

/// Query answers for `target` on one synthetic dataset: entry `j` is the
/// share of synthetic records agreeing with `target` on every attribute of
/// subset `j`; the last entry is the share of exact full-record copies.
pub fn build_query_features(
    spec: &QueryFeatureSpec,
    encoder: &QueryEncoder,
    target: &Record,
    synthetic: &Dataset,
) -> Vec<f64> {
    let k = target.len();
    let n = synthetic.len();
    if n == 0 {
        return vec![0.0; spec.width()];
    }
    let target_codes: Vec<u64> = (0..k).map(|f| encoder.code(f, target[f])).collect();
    let mut agree = vec![false; n * k];
    let mut exact = 0usize;
    for (i, r) in synthetic.rows().iter().enumerate() {
        for f in 0..k {
            agree[i * k + f] = encoder.code(f, r[f]) == target_codes[f];
        }
        if r.iter().zip(target.iter()).all(|(a, b)| a == b) {
            exact += 1;
        }
    }
    let nf = n as f64;
    spec.subsets
        .iter()
        .map(|s| {
            let hits = (0..n)
                .filter(|&i| s.iter().all(|&f| agree[i * k + f]))
                .count();
            hits as f64 / nf
        })
        .chain(std::iter::once(exact as f64 / nf))
        .collect()
}
