use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::PaperCorpus;
use crate::error::Result;
use crate::tasks::read_csv_rows;

/// FNV-1a, used to derive a per-author PRNG stream from the global seed.
pub fn fnv1a64(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

pub fn keyed_rng(seed: u64, key: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ fnv1a64(key))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AuthorLabels {
    labels: BTreeMap<String, (Option<String>, Option<String>)>,
}

impl AuthorLabels {
    /// Reads `author_id,gender,race`; empty cells mean unknown.
    pub fn load(path: &Path) -> Result<Self> {
        let mut labels = BTreeMap::new();
        for row in read_csv_rows(path, &["author_id", "gender", "race"])? {
            let opt = |s: &str| {
                let s = s.trim().to_lowercase();
                (!s.is_empty()).then_some(s)
            };
            labels.insert(row[0].clone(), (opt(&row[1]), row.get(2).and_then(|r| opt(r))));
        }
        Ok(AuthorLabels { labels })
    }

    pub fn insert(&mut self, author: &str, gender: Option<&str>, race: Option<&str>) {
        self.labels.insert(
            author.to_string(),
            (gender.map(str::to_string), race.map(str::to_string)),
        );
    }

    pub fn get(&self, author: &str) -> (Option<&str>, Option<&str>) {
        match self.labels.get(author) {
            Some((g, r)) => (g.as_deref(), r.as_deref()),
            None => (None, None),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuthorEntry {
    /// Indices into the paper corpus, ascending.
    pub papers: Vec<usize>,
    pub primary_discipline: String,
    pub ai_paper_count: usize,
    pub total_paper_count: usize,
    pub gender: Option<String>,
    pub race: Option<String>,
}

impl AuthorEntry {
    /// At least `min_ai` AI papers and AI papers forming a strict majority.
    pub fn is_frequent_ai(&self, min_ai: usize) -> bool {
        self.ai_paper_count >= min_ai && 2 * self.ai_paper_count > self.total_paper_count
    }
}

#[derive(Debug, Clone, Default)]
pub struct AuthorIndex {
    authors: BTreeMap<String, AuthorEntry>,
}

impl AuthorIndex {
    /// Primary discipline is the modal discipline of the author's papers inside
    /// `window`; ties are drawn with a PRNG keyed by `(seed, author id)`.
    /// Authors with no paper inside the window fall back to all their papers.
    pub fn build(
        corpus: &PaperCorpus,
        ai_flags: &[bool],
        labels: Option<&AuthorLabels>,
        seed: u64,
        window: (i32, i32),
    ) -> Self {
        let mut by_author: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (i, p) in corpus.papers().iter().enumerate() {
            let mut ids: Vec<&str> = p.authors.iter().map(String::as_str).collect();
            ids.sort_unstable();
            ids.dedup();
            for a in ids {
                by_author.entry(a).or_default().push(i);
            }
        }
        let entries: Vec<(String, AuthorEntry)> = by_author
            .into_par_iter()
            .map(|(author, papers)| {
                let in_window: Vec<usize> = papers
                    .iter()
                    .copied()
                    .filter(|&i| {
                        let y = corpus.get(i).year;
                        y >= window.0 && y <= window.1
                    })
                    .collect();
                let basis = if in_window.is_empty() { &papers } else { &in_window };
                let mut freq: BTreeMap<&str, usize> = BTreeMap::new();
                for &i in basis {
                    *freq.entry(corpus.get(i).discipline.as_str()).or_insert(0) += 1;
                }
                let top = freq.values().copied().max().unwrap_or(0);
                let tied: Vec<&str> = freq.iter().filter(|(_, &c)| c == top).map(|(d, _)| *d).collect();
                let primary = if tied.len() == 1 {
                    tied[0]
                } else {
                    let mut rng = keyed_rng(seed, author);
                    tied[rng.gen_range(0..tied.len())]
                };
                let ai_paper_count = basis.iter().filter(|&&i| ai_flags[i]).count();
                let (gender, race) = labels.map_or((None, None), |l| l.get(author));
                (
                    author.to_string(),
                    AuthorEntry {
                        primary_discipline: primary.to_string(),
                        ai_paper_count,
                        total_paper_count: basis.len(),
                        gender: gender.map(str::to_string),
                        race: race.map(str::to_string),
                        papers,
                    },
                )
            })
            .collect();
        AuthorIndex {
            authors: entries.into_iter().collect(),
        }
    }

    pub fn get(&self, author: &str) -> Option<&AuthorEntry> {
        self.authors.get(author)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &AuthorEntry)> {
        self.authors.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.authors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.authors.is_empty()
    }
}
