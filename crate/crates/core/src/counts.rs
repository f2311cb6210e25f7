use std::collections::BTreeMap;

use rayon::prelude::*;

/// Integer term counts plus the number of documents that were processed.
///
/// Counts are exact integers, so merging partial counts from any number of
/// shards in any order gives the same result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counts<K: Ord> {
    counts: BTreeMap<K, u64>,
    doc_count: u64,
}

impl<K: Ord> Default for Counts<K> {
    fn default() -> Self {
        Counts {
            counts: BTreeMap::new(),
            doc_count: 0,
        }
    }
}

impl<K: Ord + Clone> Counts<K> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds one document's terms. With `unique` each distinct term counts once.
    pub fn add_doc<'a, I>(&mut self, terms: I, unique: bool)
    where
        I: IntoIterator<Item = &'a K>,
        K: 'a,
    {
        self.doc_count += 1;
        if unique {
            let mut seen: Vec<&K> = terms.into_iter().collect();
            seen.sort();
            seen.dedup();
            for t in seen {
                self.add(t.clone(), 1);
            }
        } else {
            for t in terms {
                self.add(t.clone(), 1);
            }
        }
    }

    pub fn add(&mut self, key: K, n: u64) {
        if n > 0 {
            *self.counts.entry(key).or_insert(0) += n;
        }
    }

    pub fn add_empty_docs(&mut self, n: u64) {
        self.doc_count += n;
    }

    pub fn merge(&mut self, other: Counts<K>) {
        self.doc_count += other.doc_count;
        for (k, v) in other.counts {
            self.add(k, v);
        }
    }

    pub fn merged(mut self, other: Counts<K>) -> Self {
        self.merge(other);
        self
    }

    pub fn get(&self, key: &K) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    pub fn doc_count(&self) -> u64 {
        self.doc_count
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, u64)> {
        self.counts.iter().map(|(k, v)| (k, *v))
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&K) -> bool) {
        self.counts.retain(|k, _| keep(k));
    }

    pub fn as_map(&self) -> &BTreeMap<K, u64> {
        &self.counts
    }
}

impl<K: Ord + Clone + Send> Counts<K> {
    /// Counts terms of `docs` split into `shards` contiguous chunks.
    pub fn from_docs<T, F, V>(docs: &[T], shards: usize, unique: bool, terms: F) -> Self
    where
        T: Sync,
        F: Fn(&T) -> V + Sync,
        V: AsRef<[K]>,
        K: Sync,
    {
        let shards = shards.max(1);
        let chunk = docs.len().div_ceil(shards).max(1);
        let parts: Vec<Counts<K>> = docs
            .par_chunks(chunk)
            .map(|part| {
                let mut c = Counts::new();
                for d in part {
                    c.add_doc(terms(d).as_ref(), unique);
                }
                c
            })
            .collect();
        parts.into_iter().fold(Counts::new(), Counts::merged)
    }
}

impl<K: Ord + Clone> FromIterator<(K, u64)> for Counts<K> {
    fn from_iter<I: IntoIterator<Item = (K, u64)>>(iter: I) -> Self {
        let mut c = Counts::new();
        for (k, v) in iter {
            c.add(k, v);
        }
        c
    }
}
