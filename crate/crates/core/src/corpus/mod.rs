//! Corpus loading, validation and cross-corpus indices.

pub mod authors;
pub mod crosswalk;
pub mod demographics;
pub mod graph;
pub mod load;
pub mod records;
pub mod syllabus;
pub mod taxonomy;

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

pub use authors::{AuthorEntry, AuthorIndex, AuthorLabels};
pub use crosswalk::{cip_prefix, classify_syllabus, CrosswalkTable};
pub use demographics::{DemographicGroup, DemographicTable};
pub use graph::CitationGraph;
pub use load::{load_jsonl, LoadReport, ValidationConfig};
pub use records::{
    normalize_doi, normalize_name, normalize_title, PaperRecord, PatentRecord, ReferenceStub, SyllabusRecord,
};
pub use syllabus::{match_syllabus_references, MatchStats, SyllabusLinks};
pub use taxonomy::Taxonomy;

use crate::error::Result;

/// Immutable paper corpus, sorted by id.
#[derive(Debug, Clone, Default)]
pub struct PaperCorpus {
    papers: Vec<PaperRecord>,
    by_id: HashMap<String, usize>,
    pub report: LoadReport,
}

impl PaperCorpus {
    /// Builds a corpus from already validated records.
    pub fn from_records(mut papers: Vec<PaperRecord>) -> Self {
        papers.sort_by(|a, b| a.id.cmp(&b.id));
        for p in &mut papers {
            p.doi = p.doi.as_deref().map(normalize_doi).filter(|d| !d.is_empty());
        }
        let by_id = papers.iter().enumerate().map(|(i, p)| (p.id.clone(), i)).collect();
        let report = LoadReport {
            path: String::new(),
            total: papers.len(),
            accepted: papers.len(),
            ..Default::default()
        };
        PaperCorpus { papers, by_id, report }
    }

    pub fn len(&self) -> usize {
        self.papers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.papers.is_empty()
    }

    pub fn papers(&self) -> &[PaperRecord] {
        &self.papers
    }

    pub fn get(&self, idx: usize) -> &PaperRecord {
        &self.papers[idx]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.by_id.get(id).copied()
    }

    pub fn by_id(&self, id: &str) -> Option<&PaperRecord> {
        self.index_of(id).map(|i| &self.papers[i])
    }

    pub fn discipline_counts(&self) -> BTreeMap<&str, usize> {
        let mut m = BTreeMap::new();
        for p in &self.papers {
            *m.entry(p.discipline.as_str()).or_insert(0) += 1;
        }
        m
    }

    pub fn years(&self) -> Option<(i32, i32)> {
        let min = self.papers.iter().map(|p| p.year).min()?;
        let max = self.papers.iter().map(|p| p.year).max()?;
        Some((min, max))
    }
}

pub fn validate_paper(p: &PaperRecord, taxonomy: &Taxonomy, cfg: &ValidationConfig) -> std::result::Result<(), String> {
    if p.id.trim().is_empty() {
        return Err("empty id".into());
    }
    let (lo, hi) = cfg.paper_years;
    if p.year < lo || p.year > hi {
        return Err(format!("year {} outside [{lo}, {hi}]", p.year));
    }
    if !taxonomy.disciplines.contains(&p.discipline) {
        return Err(format!("unknown discipline `{}`", p.discipline));
    }
    match taxonomy.parent_of(&p.field) {
        None => Err(format!("unknown field `{}`", p.field)),
        Some(parent) if parent != p.discipline => Err(format!(
            "field `{}` belongs to `{parent}`, not `{}`",
            p.field, p.discipline
        )),
        Some(_) => Ok(()),
    }
}

pub fn load_papers(path: &Path, taxonomy: &Taxonomy, cfg: &ValidationConfig) -> Result<PaperCorpus> {
    let (records, report) = load_jsonl(
        path,
        cfg.max_error_rate,
        |p: &PaperRecord| validate_paper(p, taxonomy, cfg),
        |p| p.id.as_str(),
    )?;
    let mut c = PaperCorpus::from_records(records);
    c.report = report;
    Ok(c)
}

pub fn load_patents(path: &Path, cfg: &ValidationConfig) -> Result<(Vec<PatentRecord>, LoadReport)> {
    load_jsonl(
        path,
        cfg.max_error_rate,
        |p: &PatentRecord| {
            let (lo, hi) = cfg.patent_years;
            if p.id.trim().is_empty() {
                Err("empty id".into())
            } else if p.year < lo || p.year > hi {
                Err(format!("year {} outside [{lo}, {hi}]", p.year))
            } else if p.cpc_codes.iter().all(|c| c.trim().is_empty()) {
                Err("no cpc codes".into())
            } else {
                Ok(())
            }
        },
        |p| p.id.as_str(),
    )
}

pub fn load_syllabi(path: &Path, cfg: &ValidationConfig) -> Result<(Vec<SyllabusRecord>, LoadReport)> {
    load_jsonl(
        path,
        cfg.max_error_rate,
        |s: &SyllabusRecord| {
            if s.id.trim().is_empty() {
                Err("empty id".into())
            } else {
                Ok(())
            }
        },
        |s| s.id.as_str(),
    )
}
