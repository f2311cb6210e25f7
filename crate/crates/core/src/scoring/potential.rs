use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::vector::{Normalization, SparseVector};
use crate::counts::Counts;
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialMeasure {
    DotNorm,
    Fraction,
    FieldBaseline,
}

impl PotentialMeasure {
    pub const ALL: [PotentialMeasure; 3] = [
        PotentialMeasure::DotNorm,
        PotentialMeasure::Fraction,
        PotentialMeasure::FieldBaseline,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PotentialMeasure::DotNorm => "dot_norm",
            PotentialMeasure::Fraction => "fraction",
            PotentialMeasure::FieldBaseline => "field_baseline",
        }
    }
}

impl FromStr for PotentialMeasure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown potential measure `{s}`")))
    }
}

impl fmt::Display for PotentialMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How paper- and patent-derived capability vectors are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapabilitySupport {
    /// Average over the union of supports; a missing side counts as 0.
    Union,
    /// Average over pairs present on both sides only, not renormalized.
    Intersection,
}

impl FromStr for CapabilitySupport {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "union" => Ok(CapabilitySupport::Union),
            "intersection" => Ok(CapabilitySupport::Intersection),
            _ => Err(Error::Config(format!("unknown eq2 support `{s}`"))),
        }
    }
}

impl fmt::Display for CapabilitySupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CapabilitySupport::Union => "union",
            CapabilitySupport::Intersection => "intersection",
        })
    }
}

/// Inverse document frequency over a fixed document collection.
#[derive(Debug, Clone, PartialEq)]
pub struct IdfTable<K: Ord> {
    n_docs: u64,
    df: BTreeMap<K, u64>,
}

impl<K: Ord + Clone> IdfTable<K> {
    /// Each item is one document's count vector; only its support matters.
    pub fn build<'a, I>(docs: I) -> Self
    where
        I: IntoIterator<Item = &'a Counts<K>>,
        K: 'a,
    {
        let mut n_docs = 0;
        let mut df = BTreeMap::new();
        for d in docs {
            n_docs += 1;
            for (k, _) in d.iter() {
                *df.entry(k.clone()).or_insert(0) += 1;
            }
        }
        IdfTable { n_docs, df }
    }

    pub fn n_docs(&self) -> u64 {
        self.n_docs
    }

    /// ln(N / (1 + df)) + 1, clamped at 0.
    pub fn idf(&self, k: &K) -> f64 {
        let df = self.df.get(k).copied().unwrap_or(0) as f64;
        let v = (self.n_docs as f64 / (1.0 + df)).ln() + 1.0;
        v.max(0.0)
    }

    /// idf-weighted counts rescaled to unit sum.
    pub fn weighted(&self, counts: &Counts<K>) -> SparseVector<K> {
        SparseVector::from_weights(
            counts.iter().map(|(k, c)| (k.clone(), c as f64 * self.idf(k))),
            Normalization::Raw,
        )
        .normalized()
    }
}

/// Ĉ_AI from the paper side and, when available, the patent side. A side
/// with no pairs carries no distribution and is left out, so the result
/// still sums to one.
pub fn combine_capability<K: Ord + Clone>(
    paper: &SparseVector<K>,
    patent: Option<&SparseVector<K>>,
    support: CapabilitySupport,
) -> SparseVector<K> {
    let Some(patent) = patent.filter(|p| !p.is_empty()) else {
        return paper.clone();
    };
    if paper.is_empty() {
        return patent.clone();
    }
    let mut keys: Vec<&K> = paper.keys().collect();
    match support {
        CapabilitySupport::Union => keys.extend(patent.keys()),
        CapabilitySupport::Intersection => keys.retain(|k| patent.contains(k)),
    }
    keys.sort();
    keys.dedup();
    let tag = match support {
        CapabilitySupport::Union => Normalization::Relative,
        CapabilitySupport::Intersection => Normalization::Raw,
    };
    SparseVector::from_weights(
        keys.into_iter()
            .map(|k| (k.clone(), (paper.get(k) + patent.get(k)) / 2.0)),
        tag,
    )
}

/// `None` when the measure's denominator vanishes.
pub fn potential_score<K: Ord + Clone>(
    task: &SparseVector<K>,
    cap: &SparseVector<K>,
    measure: PotentialMeasure,
) -> Option<f64> {
    match measure {
        PotentialMeasure::DotNorm => {
            let den = cap.dot(cap);
            (den > 0.0).then(|| task.dot(cap) / den)
        }
        PotentialMeasure::Fraction => Some(task.sum_over_support(cap)),
        PotentialMeasure::FieldBaseline => {
            let den = task.dot(task);
            (den > 0.0).then(|| task.dot(cap) / den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(ws: &[(&'static str, f64)]) -> SparseVector<&'static str> {
        SparseVector::from_weights(ws.iter().copied(), Normalization::Relative)
    }

    #[test]
    fn union_average_with_zero_fill() {
        let c = combine_capability(
            &v(&[("a", 0.6), ("b", 0.4)]),
            Some(&v(&[("a", 0.2), ("c", 0.8)])),
            CapabilitySupport::Union,
        );
        assert!((c.get(&"a") - 0.4).abs() < 1e-15);
        assert!((c.get(&"b") - 0.2).abs() < 1e-15);
        assert!((c.get(&"c") - 0.4).abs() < 1e-15);
        let i = combine_capability(
            &v(&[("a", 0.6), ("b", 0.4)]),
            Some(&v(&[("a", 0.2), ("c", 0.8)])),
            CapabilitySupport::Intersection,
        );
        assert_eq!(i.len(), 1);
        assert!((i.get(&"a") - 0.4).abs() < 1e-15);
        let p = v(&[("a", 0.6), ("b", 0.4)]);
        assert_eq!(combine_capability(&p, Some(&p), CapabilitySupport::Union), p);
        assert_eq!(combine_capability(&p, None, CapabilitySupport::Union), p);
    }

    #[test]
    fn worked_potential_measures() {
        let cap = v(&[("ps", 0.6), ("ci", 0.4)]);
        let task = v(&[("ps", 0.5), ("mm", 0.5)]);
        let s = potential_score(&task, &cap, PotentialMeasure::DotNorm).unwrap();
        assert!((s - 0.3 / 0.52).abs() < 1e-15);
        assert_eq!(potential_score(&cap, &cap, PotentialMeasure::DotNorm), Some(1.0));
        assert_eq!(potential_score(&task, &cap, PotentialMeasure::Fraction), Some(0.5));
        let fb = potential_score(&task, &cap, PotentialMeasure::FieldBaseline).unwrap();
        assert!((fb - 0.3 / 0.5).abs() < 1e-15);
        let other = v(&[("zz", 1.0)]);
        assert_eq!(potential_score(&other, &cap, PotentialMeasure::DotNorm), Some(0.0));
        assert_eq!(potential_score(&other, &cap, PotentialMeasure::Fraction), Some(0.0));
    }

    #[test]
    fn idf_formula_and_weighting() {
        let d1: Counts<&str> = [("a", 2), ("b", 1)].into_iter().collect();
        let d2: Counts<&str> = [("a", 1)].into_iter().collect();
        let d3: Counts<&str> = [("c", 4)].into_iter().collect();
        let idf = IdfTable::build([&d1, &d2, &d3]);
        assert_eq!(idf.n_docs(), 3);
        assert!((idf.idf(&"a") - ((3.0f64 / 3.0).ln() + 1.0)).abs() < 1e-15);
        assert!((idf.idf(&"b") - ((3.0f64 / 2.0).ln() + 1.0)).abs() < 1e-15);
        let w = idf.weighted(&d1);
        assert!((w.sum() - 1.0).abs() < 1e-12);
        let ua: Counts<&str> = [("x", 1), ("y", 1), ("z", 1)].into_iter().collect();
        let flat = IdfTable::build([&ua]).weighted(&ua);
        for k in ["x", "y", "z"] {
            assert!((flat.get(&k) - 1.0 / 3.0).abs() < 1e-15);
        }
    }
}
