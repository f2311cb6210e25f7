use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use super::records::{normalize_doi, normalize_name, normalize_title};
use super::{PaperCorpus, ReferenceStub, SyllabusRecord};

/// Syllabus id → indices of the distinct corpus papers it cites.
pub type SyllabusLinks = BTreeMap<String, BTreeSet<usize>>;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MatchStats {
    pub stubs: usize,
    pub unusable: usize,
    pub doi_links: usize,
    pub title_links: usize,
    pub ambiguous: usize,
    pub unmatched: usize,
}

struct PaperKeys {
    by_doi: HashMap<String, Vec<usize>>,
    by_title: HashMap<String, Vec<usize>>,
}

impl PaperKeys {
    fn build(papers: &PaperCorpus) -> Self {
        let mut by_doi: HashMap<String, Vec<usize>> = HashMap::new();
        let mut by_title: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, p) in papers.papers().iter().enumerate() {
            if let Some(d) = p.doi.as_deref().map(normalize_doi).filter(|d| !d.is_empty()) {
                by_doi.entry(d).or_default().push(i);
            }
            let t = normalize_title(&p.title);
            if !t.is_empty() {
                by_title.entry(t).or_default().push(i);
            }
        }
        PaperKeys { by_doi, by_title }
    }
}

enum Outcome {
    Linked(usize),
    Ambiguous,
    None,
}

fn last_name_of(papers: &PaperCorpus, i: usize) -> Option<String> {
    papers
        .get(i)
        .first_author_last_name
        .as_deref()
        .map(normalize_name)
        .filter(|n| !n.is_empty())
}

fn pick(cands: Vec<usize>) -> Outcome {
    match cands.len() {
        0 => Outcome::None,
        1 => Outcome::Linked(cands[0]),
        _ => Outcome::Ambiguous,
    }
}

fn match_stub(stub: &ReferenceStub, papers: &PaperCorpus, keys: &PaperKeys) -> (Outcome, bool) {
    let last = stub
        .first_author_last_name
        .as_deref()
        .map(normalize_name)
        .filter(|n| !n.is_empty());
    let Some(last) = last else {
        return (Outcome::None, false);
    };
    let name_ok = |i: &usize| last_name_of(papers, *i).as_deref() == Some(last.as_str());

    if let Some(doi) = stub.doi.as_deref().map(normalize_doi).filter(|d| !d.is_empty()) {
        if let Some(c) = keys.by_doi.get(&doi) {
            match pick(c.iter().copied().filter(name_ok).collect()) {
                Outcome::None => {}
                other => return (other, true),
            }
        }
    }
    let (Some(title), Some(year)) = (stub.title.as_deref(), stub.year) else {
        return (Outcome::None, false);
    };
    let Some(c) = keys.by_title.get(&normalize_title(title)) else {
        return (Outcome::None, false);
    };
    let cands = c
        .iter()
        .copied()
        .filter(name_ok)
        .filter(|&i| (papers.get(i).year - year).abs() <= 1)
        .collect();
    (pick(cands), false)
}

/// Links reference stubs to corpus papers: equal DOI plus equal first-author
/// last name, else exact normalized title plus last name within one year.
/// Stubs with two or more candidates stay unlinked.
pub fn match_syllabus_references(syllabi: &[SyllabusRecord], papers: &PaperCorpus) -> (SyllabusLinks, MatchStats) {
    let keys = PaperKeys::build(papers);
    let mut links = SyllabusLinks::new();
    let mut stats = MatchStats::default();
    for s in syllabi {
        let entry = links.entry(s.id.clone()).or_default();
        for stub in &s.references {
            stats.stubs += 1;
            if !stub.is_usable() {
                stats.unusable += 1;
                continue;
            }
            match match_stub(stub, papers, &keys) {
                (Outcome::Linked(i), by_doi) => {
                    if by_doi {
                        stats.doi_links += 1;
                    } else {
                        stats.title_links += 1;
                    }
                    entry.insert(i);
                }
                (Outcome::Ambiguous, _) => {
                    stats.ambiguous += 1;
                    log::debug!("syllabus {}: ambiguous reference {:?}", s.id, stub);
                }
                (Outcome::None, _) => stats.unmatched += 1,
            }
        }
    }
    (links, stats)
}
