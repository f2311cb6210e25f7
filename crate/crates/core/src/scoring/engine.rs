use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::direct::{direct_score, DirectMeasure};
use super::potential::{combine_capability, potential_score, CapabilitySupport, IdfTable, PotentialMeasure};
use super::vector::SparseVector;
use crate::ai::AiNgramLexicon;
use crate::corpus::{PaperCorpus, PatentRecord, Taxonomy};
use crate::counts::Counts;
use crate::tasks::{document_pairs, ExtractOptions, TaskCounts, TaskFilter, VerbNounPair};
use crate::text::{NGram, Normalizer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Discipline,
    Field,
}

impl Level {
    pub fn name(self) -> &'static str {
        match self {
            Level::Discipline => "discipline",
            Level::Field => "field",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Framework {
    Direct,
    Potential,
}

impl Framework {
    pub fn name(self) -> &'static str {
        match self {
            Framework::Direct => "direct",
            Framework::Potential => "potential",
        }
    }
}

impl fmt::Display for Framework {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Either framework's measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Measure {
    Direct(DirectMeasure),
    Potential(PotentialMeasure),
}

impl Measure {
    pub fn framework(self) -> Framework {
        match self {
            Measure::Direct(_) => Framework::Direct,
            Measure::Potential(_) => Framework::Potential,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Measure::Direct(m) => m.name(),
            Measure::Potential(m) => m.name(),
        }
    }

    pub fn all() -> impl Iterator<Item = Measure> {
        DirectMeasure::ALL
            .into_iter()
            .map(Measure::Direct)
            .chain(PotentialMeasure::ALL.into_iter().map(Measure::Potential))
    }
}

/// One paper as the scoring engine sees it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoringDoc {
    pub year: i32,
    pub field: usize,
    pub is_ai: bool,
    /// Title and abstract n-grams.
    pub ngrams: Vec<NGram>,
    /// Filtered title verb–noun pairs.
    pub pairs: Vec<VerbNounPair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatentDoc {
    pub year: i32,
    pub pairs: Vec<VerbNounPair>,
}

/// Entity tables plus per-document terms, computed once per run.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ScoringInput {
    pub fields: Vec<String>,
    pub disciplines: Vec<String>,
    /// field index → discipline index
    pub field_parent: Vec<usize>,
    pub docs: Vec<ScoringDoc>,
    /// AI patents only.
    pub ai_patents: Vec<PatentDoc>,
}

impl ScoringInput {
    pub fn entities(&self, level: Level) -> &[String] {
        match level {
            Level::Discipline => &self.disciplines,
            Level::Field => &self.fields,
        }
    }

    /// Tokenizes every paper and AI patent in parallel.
    #[allow(clippy::too_many_arguments)]
    pub fn prepare(
        corpus: &PaperCorpus,
        taxonomy: &Taxonomy,
        ai_flags: &[bool],
        paper_ngrams: &[Vec<NGram>],
        ai_patents: &[&PatentRecord],
        norm: &Normalizer,
        opts: &ExtractOptions,
        filter: &TaskFilter,
    ) -> Self {
        let fields: Vec<String> = taxonomy.fields.keys().cloned().collect();
        let disciplines: Vec<String> = taxonomy.disciplines.iter().cloned().collect();
        let disc_idx: BTreeMap<&str, usize> = disciplines.iter().enumerate().map(|(i, d)| (d.as_str(), i)).collect();
        let field_idx: BTreeMap<&str, usize> = fields.iter().enumerate().map(|(i, f)| (f.as_str(), i)).collect();
        let field_parent = fields.iter().map(|f| disc_idx[taxonomy.fields[f].as_str()]).collect();
        let docs = corpus
            .papers()
            .par_iter()
            .enumerate()
            .map(|(i, p)| ScoringDoc {
                year: p.year,
                field: field_idx[p.field.as_str()],
                is_ai: ai_flags[i],
                ngrams: paper_ngrams[i].clone(),
                pairs: document_pairs(norm, &p.title, p.vn_pairs.as_deref(), opts, filter),
            })
            .collect();
        let ai_patents = ai_patents
            .par_iter()
            .map(|p| PatentDoc {
                year: p.year,
                pairs: document_pairs(norm, &p.title, p.vn_pairs.as_deref(), opts, filter),
            })
            .collect();
        ScoringInput {
            fields,
            disciplines,
            field_parent,
            docs,
            ai_patents,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoringSettings {
    pub start_year: i32,
    pub unique_per_doc: bool,
    pub eq2_support: CapabilitySupport,
    pub shards: usize,
}

impl Default for ScoringSettings {
    fn default() -> Self {
        ScoringSettings {
            start_year: 1960,
            unique_per_doc: false,
            eq2_support: CapabilitySupport::Union,
            shards: 1,
        }
    }
}

#[derive(Debug, Clone, Default)]
struct YearCounts {
    ngrams: Counts<NGram>,
    pairs: TaskCounts,
}

/// The six measures of one (entity, year, AI cutoff) cell; `None` is null.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CellScores {
    pub direct: [Option<f64>; 3],
    pub potential: [Option<f64>; 3],
}

impl CellScores {
    pub fn get(&self, m: Measure) -> Option<f64> {
        match m {
            Measure::Direct(d) => self.direct[DirectMeasure::ALL.iter().position(|x| *x == d).unwrap()],
            Measure::Potential(p) => self.potential[PotentialMeasure::ALL.iter().position(|x| *x == p).unwrap()],
        }
    }
}

/// AI-side vectors for a cutoff year.
struct AiState {
    g_ai: Option<SparseVector<NGram>>,
    paper_pairs: TaskCounts,
    patent_pairs: TaskCounts,
}

/// Precomputed per-(field, year) and per-year AI counts.
///
/// Every score is a pure function of exact integer counts, so results do not
/// depend on shard or thread count.
pub struct ScoreEngine<'a> {
    input: &'a ScoringInput,
    settings: ScoringSettings,
    field_year: BTreeMap<(usize, i32), YearCounts>,
    ai_year: BTreeMap<i32, YearCounts>,
    patent_year: BTreeMap<i32, TaskCounts>,
}

impl<'a> ScoreEngine<'a> {
    pub fn new(input: &'a ScoringInput, lexicon: &AiNgramLexicon, settings: ScoringSettings) -> Self {
        let shards = settings.shards.max(1);
        let chunk = input.docs.len().div_ceil(shards).max(1);
        type Partial = (BTreeMap<(usize, i32), YearCounts>, BTreeMap<i32, YearCounts>);
        let parts: Vec<Partial> = input
            .docs
            .par_chunks(chunk)
            .map(|docs| {
                let mut fy: BTreeMap<(usize, i32), YearCounts> = BTreeMap::new();
                let mut ay: BTreeMap<i32, YearCounts> = BTreeMap::new();
                for d in docs {
                    let lex: Vec<NGram> = d.ngrams.iter().filter(|g| lexicon.contains(g)).cloned().collect();
                    let c = fy.entry((d.field, d.year)).or_default();
                    c.ngrams.add_doc(&lex, settings.unique_per_doc);
                    c.pairs.add_doc(&d.pairs, false);
                    if d.is_ai && d.year >= settings.start_year {
                        let a = ay.entry(d.year).or_default();
                        a.ngrams.add_doc(&lex, settings.unique_per_doc);
                        a.pairs.add_doc(&d.pairs, false);
                    }
                }
                (fy, ay)
            })
            .collect();
        let mut field_year: BTreeMap<(usize, i32), YearCounts> = BTreeMap::new();
        let mut ai_year: BTreeMap<i32, YearCounts> = BTreeMap::new();
        for (fy, ay) in parts {
            for (k, v) in fy {
                let e = field_year.entry(k).or_default();
                e.ngrams.merge(v.ngrams);
                e.pairs.merge(v.pairs);
            }
            for (k, v) in ay {
                let e = ai_year.entry(k).or_default();
                e.ngrams.merge(v.ngrams);
                e.pairs.merge(v.pairs);
            }
        }
        let mut patent_year: BTreeMap<i32, TaskCounts> = BTreeMap::new();
        for p in &input.ai_patents {
            patent_year.entry(p.year).or_default().add_doc(&p.pairs, false);
        }
        ScoreEngine {
            input,
            settings,
            field_year,
            ai_year,
            patent_year,
        }
    }

    pub fn settings(&self) -> &ScoringSettings {
        &self.settings
    }

    fn ai_state(&self, cutoff: i32) -> AiState {
        let mut ngrams: Counts<NGram> = Counts::new();
        let mut paper_pairs = TaskCounts::new();
        for (_, c) in self.ai_year.range(self.settings.start_year..cutoff) {
            ngrams.merge(c.ngrams.clone());
            paper_pairs.merge(c.pairs.clone());
        }
        let mut patent_pairs = TaskCounts::new();
        for (_, c) in self.patent_year.range(..cutoff) {
            patent_pairs.merge(c.clone());
        }
        let n = ngrams.doc_count();
        AiState {
            g_ai: (n > 0).then(|| SparseVector::per_doc(&ngrams, n)),
            paper_pairs,
            patent_pairs,
        }
    }

    fn entity_counts(&self, level: Level, idx: usize, year: i32) -> Option<YearCounts> {
        match level {
            Level::Field => self.field_year.get(&(idx, year)).cloned(),
            Level::Discipline => {
                let mut acc: Option<YearCounts> = None;
                for (f, _) in self.input.field_parent.iter().enumerate().filter(|(_, p)| **p == idx) {
                    if let Some(c) = self.field_year.get(&(f, year)) {
                        let a = acc.get_or_insert_with(YearCounts::default);
                        a.ngrams.merge(c.ngrams.clone());
                        a.pairs.merge(c.pairs.clone());
                    }
                }
                acc
            }
        }
    }

    /// Scores every entity at both levels for field year `year`, with the AI
    /// side restricted to documents before `cutoff`. Live scores use
    /// `cutoff == year`.
    pub fn score_year(&self, year: i32, cutoff: i32) -> BTreeMap<(Level, usize), CellScores> {
        let ai = self.ai_state(cutoff);

        let ai_doc = ai.paper_pairs.clone().merged(ai.patent_pairs.clone());
        let field_docs: Vec<&TaskCounts> = self
            .field_year
            .range((0, year)..)
            .filter(|((_, y), _)| *y == year)
            .map(|(_, c)| &c.pairs)
            .collect();
        let idf = IdfTable::build(field_docs.into_iter().chain(std::iter::once(&ai_doc)));

        let cap = ai.g_ai.as_ref().map(|_| {
            let paper = idf.weighted(&ai.paper_pairs);
            let patent = (ai.patent_pairs.doc_count() > 0).then(|| idf.weighted(&ai.patent_pairs));
            combine_capability(&paper, patent.as_ref(), self.settings.eq2_support)
        });

        let mut out = BTreeMap::new();
        for level in [Level::Discipline, Level::Field] {
            for idx in 0..self.input.entities(level).len() {
                let cell = match (self.entity_counts(level, idx, year), &ai.g_ai, &cap) {
                    (Some(c), Some(g_ai), Some(cap)) => {
                        let gb = SparseVector::per_doc(&c.ngrams, c.ngrams.doc_count());
                        let task = idf.weighted(&c.pairs);
                        CellScores {
                            direct: DirectMeasure::ALL.map(|m| direct_score(&gb, g_ai, m)),
                            potential: PotentialMeasure::ALL.map(|m| potential_score(&task, cap, m)),
                        }
                    }
                    _ => CellScores::default(),
                };
                out.insert((level, idx), cell);
            }
        }
        out
    }

    /// Live scores for every year in `years`, computed in parallel.
    pub fn score_years(&self, years: &[i32]) -> BTreeMap<i32, BTreeMap<(Level, usize), CellScores>> {
        years
            .par_iter()
            .map(|&y| (y, self.score_year(y, y)))
            .collect::<Vec<_>>()
            .into_iter()
            .collect()
    }
}
