use serde::{Deserialize, Serialize};

/// Quantile bin edges over observed values. A value `v` falls in bin
/// `#{cut <= v}`; bin `b` spans `[lower(b), upper(b)]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantileBins {
    pub lo: f64,
    pub hi: f64,
    pub cuts: Vec<f64>,
}

impl QuantileBins {
    /// Up to `bins` bins with roughly equal counts. Repeated quantiles are
    /// merged, so heavily tied data yields fewer bins.
    pub fn fit(values: &[f64], bins: usize) -> Self {
        assert!(!values.is_empty(), "quantile bins need data");
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let (lo, hi) = (sorted[0], sorted[n - 1]);
        let mut cuts: Vec<f64> = (1..bins.max(1))
            .map(|i| sorted[i * n / bins])
            .filter(|&c| c > lo)
            .collect();
        cuts.dedup();
        QuantileBins { lo, hi, cuts }
    }

    pub fn n_bins(&self) -> usize {
        self.cuts.len() + 1
    }

    pub fn bin(&self, v: f64) -> usize {
        self.cuts.partition_point(|&c| c <= v)
    }

    pub fn bounds(&self, b: usize) -> (f64, f64) {
        let lower = if b == 0 { self.lo } else { self.cuts[b - 1] };
        let upper = if b == self.cuts.len() {
            self.hi
        } else {
            self.cuts[b]
        };
        (lower, upper.max(lower))
    }
}

/// `bins` equal-width bins over `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EqualWidthBins {
    pub lo: f64,
    pub hi: f64,
    pub bins: usize,
}

impl EqualWidthBins {
    pub fn fit(values: &[f64], bins: usize) -> Self {
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        // A constant column collapses to one bin.
        let bins = if hi > lo { bins.max(1) } else { 1 };
        EqualWidthBins { lo, hi, bins }
    }

    fn width(&self) -> f64 {
        (self.hi - self.lo) / self.bins as f64
    }

    pub fn bin(&self, v: f64) -> usize {
        if self.hi <= self.lo {
            return 0;
        }
        (((v - self.lo) / self.width()).floor().max(0.0) as usize).min(self.bins - 1)
    }

    pub fn bounds(&self, b: usize) -> (f64, f64) {
        let w = self.width();
        let lower = self.lo + w * b as f64;
        let upper = if b + 1 == self.bins {
            self.hi
        } else {
            self.lo + w * (b + 1) as f64
        };
        (lower, upper)
    }
}

/// Uniform draw in `[lower, upper]` from a unit uniform `u`.
pub(crate) fn lerp(lower: f64, upper: f64, u: f64) -> f64 {
    (lower + (upper - lower) * u).clamp(lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_bins_split_evenly() {
        let v: Vec<f64> = (0..100).map(f64::from).collect();
        let q = QuantileBins::fit(&v, 10);
        assert_eq!(q.n_bins(), 10);
        let mut counts = [0usize; 10];
        for &x in &v {
            counts[q.bin(x)] += 1;
        }
        assert!(counts.iter().all(|&c| c == 10));
        assert_eq!(q.bounds(0), (0.0, 10.0));
        assert_eq!(q.bounds(9), (90.0, 99.0));
    }

    #[test]
    fn quantile_bins_merge_ties() {
        let v = [1.0, 1.0, 1.0, 1.0, 2.0];
        let q = QuantileBins::fit(&v, 4);
        assert_eq!(q.n_bins(), 1);
        assert_eq!(q.bin(1.0), 0);
        let constant = QuantileBins::fit(&[3.0; 5], 10);
        assert_eq!(constant.n_bins(), 1);
        assert_eq!(constant.bounds(0), (3.0, 3.0));
    }

    #[test]
    fn equal_width_edges() {
        let e = EqualWidthBins::fit(&[0.0, 10.0], 5);
        assert_eq!(e.bin(0.0), 0);
        assert_eq!(e.bin(10.0), 4);
        assert_eq!(e.bin(3.9), 1);
        assert_eq!(e.bounds(4), (8.0, 10.0));
        assert_eq!(EqualWidthBins::fit(&[2.0, 2.0], 5).bins, 1);
    }
}
