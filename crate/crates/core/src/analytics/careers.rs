use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::collab::Roles;
use super::hits::top_five_percent;
use crate::corpus::{AuthorEntry, AuthorIndex, PaperCorpus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CareerSettings {
    pub window: (i32, i32),
    pub min_papers: usize,
    /// Minimum number of calendar years between first and last paper, inclusive.
    pub min_span_years: i32,
    pub min_ai_papers: usize,
    /// Relative years reported run from −k to +k.
    pub k: i32,
}

impl Default for CareerSettings {
    fn default() -> Self {
        CareerSettings {
            window: (2000, 2019),
            min_papers: 10,
            min_span_years: 5,
            min_ai_papers: 3,
            k: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CareerBin {
    Before,
    After,
    Relative(i32),
}

impl CareerBin {
    pub fn label(&self) -> String {
        match self {
            CareerBin::Before => "before".into(),
            CareerBin::After => "after".into(),
            CareerBin::Relative(r) => r.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CareerRow {
    pub stratum_kind: String,
    pub stratum: String,
    pub bin: CareerBin,
    pub mean_hit_rate: Option<f64>,
    pub authors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CareerProfile {
    pub cohort: Vec<String>,
    pub rows: Vec<CareerRow>,
}

impl CareerProfile {
    pub fn get(&self, kind: &str, stratum: &str, bin: &CareerBin) -> Option<&CareerRow> {
        self.rows
            .iter()
            .find(|r| r.stratum_kind == kind && r.stratum == stratum && &r.bin == bin)
    }
}

pub(crate) fn strata(e: &AuthorEntry) -> [(&'static str, String); 3] {
    [
        ("all", "all".to_string()),
        ("gender", e.gender.clone().unwrap_or_else(|| "unknown".into())),
        ("race", e.race.clone().unwrap_or_else(|| "unknown".into())),
    ]
}

/// Per-author hit rate in each bin, pooling the author's papers in the bin.
fn author_bins(papers: &[usize], anchor: i32, corpus: &PaperCorpus, hits: &[bool], k: i32) -> BTreeMap<CareerBin, f64> {
    let mut acc: BTreeMap<CareerBin, (usize, usize)> = BTreeMap::new();
    for &i in papers {
        let rel = corpus.get(i).year - anchor;
        let h = usize::from(hits[i]);
        let mut bins = vec![if rel < 0 { CareerBin::Before } else { CareerBin::After }];
        if rel.abs() <= k {
            bins.push(CareerBin::Relative(rel));
        }
        for b in bins {
            let e = acc.entry(b).or_insert((0, 0));
            e.0 += h;
            e.1 += 1;
        }
    }
    acc.into_iter().map(|(b, (h, n))| (b, h as f64 / n as f64)).collect()
}

/// Hit-rate trajectory of AI-engaging authors around their first AI paper.
/// Returns `None` when no author qualifies.
pub fn career_hit_profile(
    corpus: &PaperCorpus,
    index: &AuthorIndex,
    ai_papers: &[bool],
    hits: &[bool],
    settings: &CareerSettings,
) -> Option<CareerProfile> {
    let (lo, hi) = settings.window;
    let mut sums: BTreeMap<(&'static str, String, CareerBin), (f64, usize)> = BTreeMap::new();
    let mut cohort = Vec::new();
    for (author, e) in index.iter() {
        let papers: Vec<usize> = e
            .papers
            .iter()
            .copied()
            .filter(|&i| (lo..=hi).contains(&corpus.get(i).year))
            .collect();
        if papers.len() < settings.min_papers {
            continue;
        }
        let years = papers.iter().map(|&i| corpus.get(i).year);
        let first = years.clone().min().unwrap_or(0);
        let last = years.max().unwrap_or(0);
        if last - first + 1 < settings.min_span_years {
            continue;
        }
        let ai: Vec<i32> = papers
            .iter()
            .filter(|&&i| ai_papers[i])
            .map(|&i| corpus.get(i).year)
            .collect();
        if ai.len() < settings.min_ai_papers {
            continue;
        }
        let anchor = *ai.iter().min().unwrap();
        cohort.push(author.to_string());
        let bins = author_bins(&papers, anchor, corpus, hits, settings.k);
        for (kind, stratum) in strata(e) {
            for (b, r) in &bins {
                let s = sums.entry((kind, stratum.clone(), b.clone())).or_insert((0.0, 0));
                s.0 += r;
                s.1 += 1;
            }
        }
    }
    if cohort.is_empty() {
        return None;
    }
    let rows = sums
        .into_iter()
        .map(|((kind, stratum, bin), (s, n))| CareerRow {
            stratum_kind: kind.to_string(),
            stratum,
            bin,
            mean_hit_rate: Some(s / n as f64),
            authors: n,
        })
        .collect();
    Some(CareerProfile { cohort, rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeaderMetric {
    PaperCount,
    HitCount,
}

impl LeaderMetric {
    pub const ALL: [LeaderMetric; 2] = [LeaderMetric::PaperCount, LeaderMetric::HitCount];

    pub fn name(self) -> &'static str {
        match self {
            LeaderMetric::PaperCount => "paper_count",
            LeaderMetric::HitCount => "hit_count",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeadingRow {
    pub discipline: String,
    pub metric: LeaderMetric,
    pub stratum_kind: String,
    pub stratum: String,
    pub authors: usize,
    pub leaders: usize,
    pub collab_authors: usize,
    pub collab_leaders: usize,
    pub p_leader_collab: Option<f64>,
    pub p_leader_noncollab: Option<f64>,
    /// fewer than 20 authors in the discipline
    pub low_n: bool,
}

/// Leaders are the top ⌈5%⌉ non-AI researchers of each primary discipline by
/// `metric`, ties by author id. An author collaborated when any of their papers
/// has an AI researcher among its authors.
pub fn leading_probability(
    corpus: &PaperCorpus,
    roles: &Roles<'_>,
    hits: &[bool],
    metric: LeaderMetric,
) -> Vec<LeadingRow> {
    let ai_paper: Vec<bool> = corpus
        .papers()
        .iter()
        .map(|p| p.authors.iter().any(|a| roles.is_ai_researcher(a)))
        .collect();
    let mut by_disc: BTreeMap<&str, Vec<(&str, &AuthorEntry, usize, bool)>> = BTreeMap::new();
    for (author, e) in roles.index.iter() {
        if roles.is_ai_researcher(author) {
            continue;
        }
        let value = match metric {
            LeaderMetric::PaperCount => e.papers.len(),
            LeaderMetric::HitCount => e.papers.iter().filter(|&&i| hits[i]).count(),
        };
        let collab = e.papers.iter().any(|&i| ai_paper[i]);
        by_disc
            .entry(e.primary_discipline.as_str())
            .or_default()
            .push((author, e, value, collab));
    }
    let mut out = Vec::new();
    for (disc, mut pop) in by_disc {
        let n = pop.len();
        pop.sort_by(|a, b| b.2.cmp(&a.2).then_with(|| a.0.cmp(b.0)));
        let leaders: BTreeSet<&str> = pop.iter().take(top_five_percent(n)).map(|x| x.0).collect();
        let mut tallies: BTreeMap<(&'static str, String), [usize; 4]> = BTreeMap::new();
        for (author, e, _, collab) in &pop {
            let lead = leaders.contains(author);
            for key in strata(e) {
                let t = tallies.entry(key).or_insert([0; 4]);
                t[0] += 1;
                t[1] += usize::from(lead);
                t[2] += usize::from(*collab);
                t[3] += usize::from(*collab && lead);
            }
        }
        for ((kind, stratum), [authors, lead, collab, collab_lead]) in tallies {
            let non = authors - collab;
            out.push(LeadingRow {
                discipline: disc.to_string(),
                metric,
                stratum_kind: kind.to_string(),
                stratum,
                authors,
                leaders: lead,
                collab_authors: collab,
                collab_leaders: collab_lead,
                p_leader_collab: (collab > 0).then(|| collab_lead as f64 / collab as f64),
                p_leader_noncollab: (non > 0).then(|| (lead - collab_lead) as f64 / non as f64),
                low_n: n < 20,
            });
        }
    }
    out
}
