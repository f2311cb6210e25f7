use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{AuthorIndex, PaperCorpus, PaperRecord};
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoauthorType {
    DomainCs,
    DomainSole,
    CsSole,
    Others,
}

impl CoauthorType {
    pub const ALL: [CoauthorType; 4] = [
        CoauthorType::DomainCs,
        CoauthorType::DomainSole,
        CoauthorType::CsSole,
        CoauthorType::Others,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CoauthorType::DomainCs => "domain_cs",
            CoauthorType::DomainSole => "domain_sole",
            CoauthorType::CsSole => "cs_sole",
            CoauthorType::Others => "others",
        }
    }
}

/// Who counts as an AI researcher.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AiAuthorMode {
    /// Primary discipline is computer science.
    CsPrimary,
    /// At least `min_ai` AI papers making up more than half of the output.
    FrequentAi,
}

impl AiAuthorMode {
    pub const ALL: [AiAuthorMode; 2] = [AiAuthorMode::CsPrimary, AiAuthorMode::FrequentAi];

    pub fn name(self) -> &'static str {
        match self {
            AiAuthorMode::CsPrimary => "cs_primary",
            AiAuthorMode::FrequentAi => "frequent_ai",
        }
    }
}

impl FromStr for AiAuthorMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown AI author mode `{s}`")))
    }
}

impl fmt::Display for AiAuthorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollabSettings {
    pub window: (i32, i32),
    pub min_authors: usize,
    pub min_ai_papers: usize,
}

impl Default for CollabSettings {
    fn default() -> Self {
        CollabSettings {
            window: (1980, 2019),
            min_authors: 2,
            min_ai_papers: 3,
        }
    }
}

/// Role lookup shared by collaboration and leadership analyses.
pub struct Roles<'a> {
    pub index: &'a AuthorIndex,
    pub cs_discipline: &'a str,
    pub mode: AiAuthorMode,
    pub min_ai_papers: usize,
}

impl Roles<'_> {
    pub fn is_ai_researcher(&self, author: &str) -> bool {
        let Some(e) = self.index.get(author) else {
            return false;
        };
        match self.mode {
            AiAuthorMode::CsPrimary => e.primary_discipline == self.cs_discipline,
            AiAuthorMode::FrequentAi => e.is_frequent_ai(self.min_ai_papers),
        }
    }

    /// A domain expert of `discipline` who is not an AI researcher.
    pub fn is_domain_expert(&self, author: &str, discipline: &str) -> bool {
        !self.is_ai_researcher(author)
            && self
                .index
                .get(author)
                .is_some_and(|e| e.primary_discipline == discipline)
    }
}

/// Four-way type of a qualifying AI paper; `None` when the paper does not
/// qualify (CS discipline, too few authors, or outside the window).
pub fn classify_coauthorship(
    paper: &PaperRecord,
    is_ai: bool,
    roles: &Roles<'_>,
    settings: &CollabSettings,
) -> Option<CoauthorType> {
    let mut authors: Vec<&str> = paper.authors.iter().map(String::as_str).collect();
    authors.sort_unstable();
    authors.dedup();
    if !is_ai
        || paper.discipline == roles.cs_discipline
        || authors.len() < settings.min_authors
        || paper.year < settings.window.0
        || paper.year > settings.window.1
    {
        return None;
    }
    let domain = authors.iter().any(|a| roles.is_domain_expert(a, &paper.discipline));
    let cs = authors.iter().any(|a| roles.is_ai_researcher(a));
    Some(match (domain, cs) {
        (true, true) => CoauthorType::DomainCs,
        (true, false) => CoauthorType::DomainSole,
        (false, true) => CoauthorType::CsSole,
        (false, false) => CoauthorType::Others,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TypeCounts {
    pub counts: [usize; 4],
}

impl TypeCounts {
    pub fn add(&mut self, t: CoauthorType) {
        self.counts[CoauthorType::ALL.iter().position(|x| *x == t).unwrap()] += 1;
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn get(&self, t: CoauthorType) -> usize {
        self.counts[CoauthorType::ALL.iter().position(|x| *x == t).unwrap()]
    }

    pub fn share(&self, t: CoauthorType) -> Option<f64> {
        let n = self.total();
        (n > 0).then(|| self.get(t) as f64 / n as f64)
    }
}

/// Classified qualifying papers: (discipline, year, type) per paper.
pub fn classify_all(
    corpus: &PaperCorpus,
    ai_papers: &[bool],
    roles: &Roles<'_>,
    settings: &CollabSettings,
) -> Vec<(usize, CoauthorType)> {
    corpus
        .papers()
        .iter()
        .enumerate()
        .filter_map(|(i, p)| classify_coauthorship(p, ai_papers[i], roles, settings).map(|t| (i, t)))
        .collect()
}

/// discipline → counts over papers with year in `[from, to]`.
pub fn window_counts(
    corpus: &PaperCorpus,
    classified: &[(usize, CoauthorType)],
    from: i32,
    to: i32,
) -> BTreeMap<String, TypeCounts> {
    let mut out: BTreeMap<String, TypeCounts> = BTreeMap::new();
    for &(i, t) in classified {
        let p = corpus.get(i);
        if p.year >= from && p.year <= to {
            out.entry(p.discipline.clone()).or_default().add(t);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesPoint {
    pub year: i32,
    pub papers: usize,
    pub domain_cs: usize,
    pub share: Option<f64>,
    pub smoothed: Option<f64>,
}

/// Centered three-year mean over the non-null neighbours of each non-null point.
pub fn smooth3(values: &[Option<f64>]) -> Vec<Option<f64>> {
    (0..values.len())
        .map(|i| {
            values[i]?;
            let lo = i.saturating_sub(1);
            let hi = (i + 1).min(values.len() - 1);
            let xs: Vec<f64> = values[lo..=hi].iter().flatten().copied().collect();
            Some(xs.iter().sum::<f64>() / xs.len() as f64)
        })
        .collect()
}

/// Yearly share of `domain_cs` among a discipline's qualifying AI papers.
pub fn collab_share_series(
    corpus: &PaperCorpus,
    classified: &[(usize, CoauthorType)],
    discipline: &str,
    years: (i32, i32),
) -> Vec<SeriesPoint> {
    let mut by_year: BTreeMap<i32, TypeCounts> = BTreeMap::new();
    for &(i, t) in classified {
        let p = corpus.get(i);
        if p.discipline == discipline {
            by_year.entry(p.year).or_default().add(t);
        }
    }
    let ys: Vec<i32> = (years.0..=years.1).collect();
    let shares: Vec<Option<f64>> = ys
        .iter()
        .map(|y| by_year.get(y).and_then(|c| c.share(CoauthorType::DomainCs)))
        .collect();
    let smoothed = smooth3(&shares);
    ys.iter()
        .enumerate()
        .map(|(k, y)| {
            let c = by_year.get(y).cloned().unwrap_or_default();
            SeriesPoint {
                year: *y,
                papers: c.total(),
                domain_cs: c.get(CoauthorType::DomainCs),
                share: shares[k],
                smoothed: smoothed[k],
            }
        })
        .collect()
}
