use crate::error::{Error, Result};
use crate::tabular::Dataset;

use super::binning::QuantileBins;

/// Column-wise discrete codes for a dataset: categorical codes as-is,
/// numeric values mapped to quantile bins.
#[derive(Clone, Debug)]
pub(crate) struct Discretized {
    pub columns: Vec<Vec<u32>>,
    pub cards: Vec<usize>,
    pub bins: Vec<Option<QuantileBins>>,
}

impl Discretized {
    pub fn new(d: &Dataset, bins: usize) -> Self {
        let schema = d.schema();
        let mut columns = Vec::with_capacity(schema.len());
        let mut cards = Vec::with_capacity(schema.len());
        let mut binners = Vec::with_capacity(schema.len());
        for f in 0..schema.len() {
            match schema.feature(f).cardinality() {
                Some(card) => {
                    columns.push(
                        d.rows()
                            .iter()
                            .map(|r| r[f].as_cat().expect("categorical"))
                            .collect(),
                    );
                    cards.push(card);
                    binners.push(None);
                }
                None => {
                    let values: Vec<f64> = d
                        .rows()
                        .iter()
                        .map(|r| r[f].as_num().expect("numeric"))
                        .collect();
                    let q = QuantileBins::fit(&values, bins);
                    columns.push(values.iter().map(|&v| q.bin(v) as u32).collect());
                    cards.push(q.n_bins());
                    binners.push(Some(q));
                }
            }
        }
        Discretized {
            columns,
            cards,
            bins: binners,
        }
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    /// Mixed-radix joint code of `features` for every row, with the joint
    /// cardinality. The empty set maps every row to code 0.
    pub fn joint(&self, features: &[usize]) -> (Vec<u32>, usize) {
        let mut codes = vec![0u32; self.rows()];
        let mut card = 1usize;
        for &f in features {
            for (c, &v) in codes.iter_mut().zip(&self.columns[f]) {
                *c = *c * self.cards[f] as u32 + v;
            }
            card *= self.cards[f];
        }
        (codes, card)
    }
}

/// Empirical entropy in nats.
pub(crate) fn entropy(codes: &[u32], card: usize) -> f64 {
    let mut counts = vec![0u64; card];
    for &c in codes {
        counts[c as usize] += 1;
    }
    let n = codes.len() as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Empirical mutual information in nats between two code columns.
pub(crate) fn mi_codes(x: &[u32], cx: usize, y: &[u32], cy: usize) -> f64 {
    let n = x.len();
    let mut joint = vec![0u64; cx * cy];
    let mut mx = vec![0u64; cx];
    let mut my = vec![0u64; cy];
    for (&a, &b) in x.iter().zip(y) {
        joint[a as usize * cy + b as usize] += 1;
        mx[a as usize] += 1;
        my[b as usize] += 1;
    }
    let nf = n as f64;
    let mut mi = 0.0;
    for a in 0..cx {
        for b in 0..cy {
            let c = joint[a * cy + b];
            if c > 0 {
                let pxy = c as f64 / nf;
                mi += pxy * ((c as f64 * nf) / (mx[a] as f64 * my[b] as f64)).ln();
            }
        }
    }
    mi.max(0.0)
}

/// Empirical mutual information (nats) between two attributes, numeric
/// attributes discretized into `bins` quantile bins.
pub fn mutual_information(d: &Dataset, f1: usize, f2: usize, bins: usize) -> Result<f64> {
    let k = d.schema().len();
    if f1 >= k || f2 >= k {
        return Err(Error::InvalidConfig(format!(
            "feature index out of range for {k} features"
        )));
    }
    if d.len() < 2 {
        return Err(Error::InsufficientData(format!("{} rows", d.len())));
    }
    let disc = Discretized::new(d, bins.max(1));
    Ok(mi_codes(
        &disc.columns[f1],
        disc.cards[f1],
        &disc.columns[f2],
        disc.cards[f2],
    ))
}
