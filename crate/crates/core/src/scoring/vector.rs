use std::collections::BTreeMap;

use serde::Serialize;

use crate::counts::Counts;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Divided by a document count.
    PerDoc,
    /// Weights sum to one.
    Relative,
    Raw,
}

/// Sum with pairwise (cascade) reduction; the grouping depends only on the
/// slice length, so equal inputs always round identically.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BASE: usize = 8;
    if xs.len() <= BASE {
        return xs.iter().fold(0.0, |a, b| a + b);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Nonnegative weights over terms, iterated in key order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SparseVector<K: Ord> {
    weights: BTreeMap<K, f64>,
    pub normalization: Normalization,
}

impl<K: Ord + Clone> SparseVector<K> {
    pub fn new(normalization: Normalization) -> Self {
        SparseVector {
            weights: BTreeMap::new(),
            normalization,
        }
    }

    /// Zero weights are dropped so the support is exactly the positive terms.
    pub fn from_weights(weights: impl IntoIterator<Item = (K, f64)>, normalization: Normalization) -> Self {
        let weights = weights
            .into_iter()
            .inspect(|(_, w)| debug_assert!(w.is_finite() && *w >= 0.0))
            .filter(|(_, w)| *w > 0.0)
            .collect();
        SparseVector { weights, normalization }
    }

    /// counts / n, tagged per-doc.
    pub fn per_doc(counts: &Counts<K>, n: u64) -> Self {
        let n = n as f64;
        Self::from_weights(
            counts.iter().map(|(k, c)| (k.clone(), c as f64 / n)),
            Normalization::PerDoc,
        )
    }

    /// Rescales to unit sum. An all-zero vector stays empty.
    pub fn normalized(&self) -> Self {
        let total = self.sum();
        if total <= 0.0 {
            return SparseVector::new(Normalization::Relative);
        }
        Self::from_weights(
            self.weights.iter().map(|(k, w)| (k.clone(), w / total)),
            Normalization::Relative,
        )
    }

    pub fn get(&self, k: &K) -> f64 {
        self.weights.get(k).copied().unwrap_or(0.0)
    }

    pub fn contains(&self, k: &K) -> bool {
        self.weights.contains_key(k)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, f64)> {
        self.weights.iter().map(|(k, w)| (k, *w))
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.weights.keys()
    }

    pub fn sum(&self) -> f64 {
        let v: Vec<f64> = self.weights.values().copied().collect();
        pairwise_sum(&v)
    }

    /// Σ over common terms of self·other, accumulated in key order of `self`.
    pub fn dot(&self, other: &SparseVector<K>) -> f64 {
        let prods: Vec<f64> = self
            .weights
            .iter()
            .filter_map(|(k, a)| other.weights.get(k).map(|b| a * b))
            .collect();
        pairwise_sum(&prods)
    }

    /// Σ of self's weights over the support of `other`.
    pub fn sum_over_support(&self, other: &SparseVector<K>) -> f64 {
        let v: Vec<f64> = self
            .weights
            .iter()
            .filter(|(k, _)| other.weights.contains_key(*k))
            .map(|(_, w)| *w)
            .collect();
        pairwise_sum(&v)
    }

    pub fn restricted_to(&self, keep: impl Fn(&K) -> bool) -> Self {
        SparseVector {
            weights: self
                .weights
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, w)| (k.clone(), *w))
                .collect(),
            normalization: self.normalization,
        }
    }
}
