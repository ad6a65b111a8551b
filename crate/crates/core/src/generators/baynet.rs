//! Greedy Bayesian network synthesizer without privacy noise.
//!
//! Structure learning adds one attribute at a time: starting from the
//! highest-entropy attribute, each step picks the (attribute, parent set)
//! pair with maximal empirical mutual information, where parent sets hold at
//! most `max_parents` already-placed attributes. Conditional tables use
//! additive smoothing over the full discretized domain.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::tabular::{Dataset, Record, Value};

use super::binning::{lerp, QuantileBins};
use super::mi::{entropy, mi_codes, Discretized};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub feature: usize,
    pub parents: Vec<usize>,
    pub cardinality: usize,
    /// Row-major `(parent configuration, child code)` probabilities.
    pub cpt: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BayNetModel {
    /// Nodes in sampling (topological) order.
    pub nodes: Vec<Node>,
    /// Quantile bins of numeric attributes, indexed by feature.
    pub bins: Vec<Option<QuantileBins>>,
}

/// Every subset of `pool` with at most `max` elements, by size then in
/// lexicographic order of positions. The empty set comes first.
fn subsets(pool: &[usize], max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for size in 1..=max.min(pool.len()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(idx.iter().map(|&i| pool[i]).collect());
            let mut i = size;
            while i > 0 && idx[i - 1] == pool.len() - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    out
}

/// Greedy structure: `(feature, parents)` in placement order.
pub(crate) fn greedy_structure(disc: &Discretized, max_parents: usize) -> Vec<(usize, Vec<usize>)> {
    let k = disc.columns.len();
    let mut first = 0;
    let mut best_h = f64::NEG_INFINITY;
    for f in 0..k {
        let h = entropy(&disc.columns[f], disc.cards[f]);
        if h > best_h {
            best_h = h;
            first = f;
        }
    }
    let mut placed = vec![first];
    let mut structure = vec![(first, Vec::new())];
    while placed.len() < k {
        let candidates = subsets(&placed, max_parents);
        let joints: Vec<(Vec<u32>, usize)> = candidates.iter().map(|s| disc.joint(s)).collect();
        let mut best: Option<(f64, usize, usize)> = None;
        for f in (0..k).filter(|f| !placed.contains(f)) {
            for (si, (codes, card)) in joints.iter().enumerate() {
                let score = if candidates[si].is_empty() {
                    0.0
                } else {
                    mi_codes(&disc.columns[f], disc.cards[f], codes, *card)
                };
                if best.is_none_or(|(b, _, _)| score > b) {
                    best = Some((score, f, si));
                }
            }
        }
        let (_, f, si) = best.expect("an unplaced feature remains");
        placed.push(f);
        structure.push((f, candidates[si].clone()));
    }
    structure
}

impl BayNetModel {
    pub fn fit(train: &Dataset, max_parents: usize, bins: usize, alpha: f64) -> Self {
        let disc = Discretized::new(train, bins);
        let nodes = greedy_structure(&disc, max_parents)
            .into_iter()
            .map(|(feature, parents)| {
                let card = disc.cards[feature];
                let (configs, n_configs) = disc.joint(&parents);
                let mut counts = vec![0.0f64; n_configs * card];
                for (&cfg, &v) in configs.iter().zip(&disc.columns[feature]) {
                    counts[cfg as usize * card + v as usize] += 1.0;
                }
                for row in counts.chunks_mut(card) {
                    let total: f64 = row.iter().sum::<f64>() + alpha * card as f64;
                    for c in row.iter_mut() {
                        *c = (*c + alpha) / total;
                    }
                }
                Node {
                    feature,
                    parents,
                    cardinality: card,
                    cpt: counts,
                }
            })
            .collect();
        BayNetModel {
            nodes,
            bins: disc.bins,
        }
    }

    fn parent_config(&self, node: &Node, codes: &[u32]) -> usize {
        node.parents.iter().fold(0usize, |acc, &p| {
            let card = self.cardinality(p);
            acc * card + codes[p] as usize
        })
    }

    fn cardinality(&self, feature: usize) -> usize {
        self.nodes
            .iter()
            .find(|n| n.feature == feature)
            .map(|n| n.cardinality)
            .expect("every feature has a node")
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Record {
        let k = self.nodes.len();
        let mut codes = vec![0u32; k];
        for node in &self.nodes {
            let cfg = self.parent_config(node, &codes);
            let row = &node.cpt[cfg * node.cardinality..(cfg + 1) * node.cardinality];
            let u: f64 = rng.gen();
            let mut acc = 0.0;
            let mut pick = node.cardinality - 1;
            for (c, &p) in row.iter().enumerate() {
                acc += p;
                if u < acc {
                    pick = c;
                    break;
                }
            }
            codes[node.feature] = pick as u32;
        }
        let values = codes
            .iter()
            .enumerate()
            .map(|(f, &code)| match &self.bins[f] {
                None => Value::Cat(code),
                Some(q) => {
                    let (lo, hi) = q.bounds(code as usize);
                    Value::Num(lerp(lo, hi, rng.gen::<f64>()))
                }
            })
            .collect();
        Record::new(values)
    }

    /// Edges `(parent, child)` of the learned network.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.nodes
            .iter()
            .flat_map(|n| n.parents.iter().map(move |&p| (p, n.feature)))
            .collect()
    }
}
