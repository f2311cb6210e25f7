use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use sciai_core::ai::{
    derive_ai_ngram_lexicon, label_ai_papers, label_ai_patents, mark_ai_using, normalize_keyphrases, precision_recall,
    read_id_list, read_manual_labels, sample_ids, AiNgramLexicon, Confusion,
};
use sciai_core::analytics::{
    career_hit_profile, citation_premium, classify_all, collab_share_series, education_levels, field_grouping,
    group_weighted_score, hit_flags, leading_probability, momentum_between, outside_citation_share, within_share,
    AiAuthorMode, CoauthorType, CollabSettings, EducationFilter, FieldGroup, FieldGrouping, LeaderMetric, Roles,
    TypeCounts, WeightingVariant,
};
use sciai_core::corpus::crosswalk::KeyKind;
use sciai_core::corpus::{
    classify_syllabus, load_papers, load_patents, load_syllabi, match_syllabus_references, AuthorIndex, AuthorLabels,
    CitationGraph, CrosswalkTable, DemographicGroup, DemographicTable, LoadReport, PaperCorpus, PatentRecord,
    SyllabusRecord, Taxonomy, ValidationConfig,
};
use sciai_core::scoring::{
    decompose_all, percentile_rank, Level, Measure, ScoreEngine, ScoreTable, ScoringInput, ScoringSettings,
};
use sciai_core::stats::{pooled_ttest, top_k_overlap, welch_ttest};
use sciai_core::tasks::{ExtractOptions, TaskFilter};
use sciai_core::text::{NGram, Normalizer};
use sciai_core::{Error, Result};

use crate::config::Config;
use crate::emit::{num, opt, sha256_hex, write_atomic, Emitter};
use crate::report::{correlation_entry, replication_checks, CorrelationEntry, ReplicationCheck};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Ingest,
    Label,
    Score,
    Analyze,
    Report,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Ingest => "ingest",
            Stage::Label => "label",
            Stage::Score => "score",
            Stage::Analyze => "analyze",
            Stage::Report => "report",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputSummary {
    pub input: String,
    pub total: usize,
    pub accepted: usize,
    pub rejected: usize,
    pub reasons: Vec<(usize, String)>,
}

impl InputSummary {
    fn from_report(input: &str, r: &LoadReport) -> Self {
        InputSummary {
            input: input.to_string(),
            total: r.total,
            accepted: r.accepted,
            rejected: r.rejected,
            reasons: r.reasons.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TableEntry {
    pub sha256: String,
    pub rows: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PrecisionRecall {
    pub precision_sample: usize,
    pub recall_sample: usize,
    pub precision_confusion: Confusion,
    pub recall_confusion: Confusion,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupTest {
    pub variable: String,
    pub year: i32,
    pub test: String,
    pub n_higher_direct: usize,
    pub n_higher_potential: usize,
    pub mean_higher_direct: Option<f64>,
    pub mean_higher_potential: Option<f64>,
    pub t: Option<f64>,
    pub df: Option<f64>,
    pub p_two_sided: Option<f64>,
    pub note: Option<String>,
}

/// Machine-readable summary written to `report.json`. Everything in it is a
/// function of the config, the inputs and the seed.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RunReport {
    pub stage: Option<Stage>,
    pub seed: u64,
    pub years: (i32, i32),
    pub ai_mode: String,
    pub direct_measure: String,
    pub potential_measure: String,
    pub inputs: Vec<InputSummary>,
    pub counts: BTreeMap<String, usize>,
    pub warnings: Vec<String>,
    pub precision_recall: Option<PrecisionRecall>,
    pub syllabus_matching: Option<sciai_core::corpus::MatchStats>,
    pub top_overlap_full: BTreeMap<String, usize>,
    pub grouping_tests: Vec<GroupTest>,
    pub correlations: BTreeMap<String, CorrelationEntry>,
    pub replication: Vec<ReplicationCheck>,
    pub tables: BTreeMap<String, TableEntry>,
}

/// Run metadata that legitimately differs between equivalent runs.
#[derive(Debug, Clone, Serialize)]
pub struct RunMeta {
    pub version: &'static str,
    pub shards: usize,
    pub seed: u64,
    pub cache_hit: bool,
    pub timing_ms: BTreeMap<String, u128>,
    pub effective_config: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct Prepared {
    paper_ngrams: Vec<Vec<NGram>>,
    input: ScoringInput,
}

fn b01(b: bool) -> String {
    if b { "1" } else { "0" }.to_string()
}

fn s<T: ToString>(x: T) -> String {
    x.to_string()
}

struct Ingested {
    norm: Normalizer,
    taxonomy: Taxonomy,
    corpus: PaperCorpus,
    graph: CitationGraph,
    patents: Vec<PatentRecord>,
    syllabi: Vec<SyllabusRecord>,
    labels: Option<AuthorLabels>,
}

struct Labeled {
    ai_using: Vec<bool>,
    ai_any: Vec<bool>,
    hits: Vec<bool>,
    lexicon: AiNgramLexicon,
    input: ScoringInput,
}

struct Runner<'a> {
    cfg: &'a Config,
    emit: Emitter,
    report: RunReport,
    timing: BTreeMap<String, u128>,
    cache_hit: bool,
}

pub fn run(cfg: &Config, stage: Stage) -> Result<RunReport> {
    cfg.validate()?;
    let out = cfg.run.out.clone();
    let mut r = Runner {
        cfg,
        emit: Emitter::new(&out),
        report: RunReport {
            stage: Some(stage),
            seed: cfg.run.seed,
            years: (cfg.run.from_year, cfg.run.to_year),
            ai_mode: cfg.ai.mode.name().to_string(),
            direct_measure: cfg.scoring.direct_measure.name().to_string(),
            potential_measure: cfg.scoring.potential_measure.name().to_string(),
            ..RunReport::default()
        },
        timing: BTreeMap::new(),
        cache_hit: false,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.run.shards)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    pool.install(|| r.execute(stage))?;

    for (rel, sha) in r.emit.checksums() {
        r.report.tables.insert(
            rel.clone(),
            TableEntry {
                sha256: sha.clone(),
                rows: r.emit.row_counts().get(rel).copied(),
            },
        );
    }
    let meta = RunMeta {
        version: env!("CARGO_PKG_VERSION"),
        shards: cfg.run.shards,
        seed: cfg.run.seed,
        cache_hit: r.cache_hit,
        timing_ms: r.timing.clone(),
        effective_config: cfg.to_toml(),
    };
    let mut bytes = serde_json::to_vec_pretty(&r.report)?;
    bytes.push(b'\n');
    write_atomic(&out.join("report.json"), &bytes)?;
    let mut meta_bytes = serde_json::to_vec_pretty(&meta)?;
    meta_bytes.push(b'\n');
    write_atomic(&out.join("run_meta.json"), &meta_bytes)?;
    Ok(r.report)
}

fn hash_file(h: &mut Vec<u8>, p: Option<&Path>) -> Result<()> {
    match p {
        Some(p) => {
            let bytes = std::fs::read(p).map_err(|e| Error::io(p, e))?;
            h.extend_from_slice(sha256_hex(&bytes).as_bytes());
        }
        None => h.extend_from_slice(b"-"),
    }
    h.push(b'\n');
    Ok(())
}

impl Runner<'_> {
    fn warn(&mut self, msg: String) {
        log::warn!("{msg}");
        self.report.warnings.push(msg);
    }

    /// Records a warning the core already logged.
    fn note(&mut self, msg: String) {
        self.report.warnings.push(msg);
    }

    fn timed<T>(&mut self, name: &str, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        let t0 = Instant::now();
        let v = f(self)?;
        self.timing.insert(name.to_string(), t0.elapsed().as_millis());
        log::info!("{name} done in {} ms", t0.elapsed().as_millis());
        Ok(v)
    }

    fn execute(&mut self, stage: Stage) -> Result<()> {
        let ing = self.timed("ingest", |r| r.ingest())?;
        if stage == Stage::Ingest {
            return Ok(());
        }
        let lab = self.timed("label", |r| r.label(&ing))?;
        if stage == Stage::Label {
            return Ok(());
        }
        let table = self.timed("score", |r| r.score(&ing, &lab))?;
        if stage == Stage::Score {
            return Ok(());
        }
        let an = self.timed("analyze", |r| r.analyze(&ing, &lab, &table))?;
        if stage == Stage::Analyze {
            return Ok(());
        }
        self.timed("report", |r| r.final_report(&ing, &table, &an))
    }

    fn ingest(&mut self) -> Result<Ingested> {
        let cfg = self.cfg;
        let t = &cfg.text;
        let norm = Normalizer::from_files(
            t.lemma_exceptions.as_deref(),
            t.stopwords.as_deref(),
            t.pos_lexicon.as_deref(),
        )?;
        let taxonomy = Taxonomy::load(cfg.inputs.taxonomy.as_deref().unwrap(), &norm)?;
        for w in taxonomy.warnings.clone() {
            self.note(w);
        }
        let vcfg = ValidationConfig {
            paper_years: cfg.run.paper_years,
            patent_years: cfg.run.patent_years,
            max_error_rate: cfg.run.max_error_rate,
        };
        let corpus = load_papers(cfg.inputs.papers.as_deref().unwrap(), &taxonomy, &vcfg)?;
        self.report
            .inputs
            .push(InputSummary::from_report("papers", &corpus.report));
        let patents = match &cfg.inputs.patents {
            Some(p) => {
                let (v, rep) = load_patents(p, &vcfg)?;
                self.report.inputs.push(InputSummary::from_report("patents", &rep));
                v
            }
            None => Vec::new(),
        };
        let syllabi = match &cfg.inputs.syllabi {
            Some(p) => {
                let (v, rep) = load_syllabi(p, &vcfg)?;
                self.report.inputs.push(InputSummary::from_report("syllabi", &rep));
                v
            }
            None => Vec::new(),
        };
        let labels = cfg
            .inputs
            .author_labels
            .as_deref()
            .map(AuthorLabels::load)
            .transpose()?;
        let graph = CitationGraph::build(&corpus);

        let c = &mut self.report.counts;
        c.insert("papers".into(), corpus.len());
        c.insert("patents".into(), patents.len());
        c.insert("syllabi".into(), syllabi.len());
        c.insert("citation_edges".into(), graph.edge_count());
        c.insert("disciplines".into(), taxonomy.disciplines.len());
        c.insert("fields".into(), taxonomy.fields.len());
        c.insert("labeled_authors".into(), labels.as_ref().map_or(0, |l| l.len()));
        let rows: Vec<Vec<String>> = self
            .report
            .inputs
            .iter()
            .map(|i| vec![i.input.clone(), s(i.total), s(i.accepted), s(i.rejected)])
            .collect();
        self.emit
            .csv("ingest.csv", &["input", "total", "accepted", "rejected"], rows)?;
        Ok(Ingested {
            norm,
            taxonomy,
            corpus,
            graph,
            patents,
            syllabi,
            labels,
        })
    }

    fn cache_key(&self) -> Result<String> {
        let cfg = self.cfg;
        let mut h = Vec::new();
        h.extend_from_slice(concat!("prepared-v1 ", env!("CARGO_PKG_VERSION"), "\n").as_bytes());
        for p in [
            cfg.inputs.papers.as_deref(),
            cfg.inputs.taxonomy.as_deref(),
            cfg.inputs.patents.as_deref(),
            cfg.inputs.external_ai_ids.as_deref(),
            cfg.text.lemma_exceptions.as_deref(),
            cfg.text.stopwords.as_deref(),
            cfg.text.pos_lexicon.as_deref(),
            cfg.text.task_verbs.as_deref(),
            cfg.text.task_nouns.as_deref(),
            cfg.text.task_pairs.as_deref(),
            cfg.text.task_synonyms.as_deref(),
        ] {
            hash_file(&mut h, p)?;
        }
        h.extend_from_slice(serde_json::to_string(&cfg.ai)?.as_bytes());
        h.extend_from_slice(
            format!(
                "{} {} {:?}",
                cfg.text.max_gap, cfg.text.include_prep_objects, cfg.run.paper_years
            )
            .as_bytes(),
        );
        h.extend_from_slice(format!("{:?} {}", cfg.run.patent_years, cfg.run.max_error_rate).as_bytes());
        Ok(sha256_hex(&h))
    }

    fn label(&mut self, ing: &Ingested) -> Result<Labeled> {
        let cfg = self.cfg;
        let corpus = &ing.corpus;
        let external = match (&cfg.inputs.external_ai_ids, cfg.ai.mode) {
            (Some(p), sciai_core::ai::AiMode::External) => Some(read_id_list(p)?),
            _ => None,
        };
        let ai_set = label_ai_papers(corpus, &ing.taxonomy, cfg.ai.mode, external.as_deref())?;
        let ai_flags = ai_set.flags(corpus);

        let keyphrases = normalize_keyphrases(&ing.norm, &cfg.ai.patent_phrases);
        let patent_set = label_ai_patents(&ing.patents, &cfg.ai.patent_cpc_codes, &keyphrases, &ing.norm);
        let ai_patents: Vec<&PatentRecord> = ing.patents.iter().filter(|p| patent_set.contains(&p.id)).collect();

        let cache_path = cfg
            .run
            .out
            .join(".cache")
            .join(format!("prepared-{}.json", self.cache_key()?));
        let cached: Option<Prepared> = if cfg.run.cache && cache_path.is_file() {
            match std::fs::read(&cache_path).map(|b| serde_json::from_slice::<Prepared>(&b)) {
                Ok(Ok(p)) if p.paper_ngrams.len() == corpus.len() => Some(p),
                _ => {
                    log::warn!("ignoring unreadable cache {}", cache_path.display());
                    None
                }
            }
        } else {
            None
        };
        self.cache_hit = cached.is_some();
        let prepared = match cached {
            Some(p) => p,
            None => {
                let norm = &ing.norm;
                let paper_ngrams: Vec<Vec<NGram>> = corpus
                    .papers()
                    .par_iter()
                    .map(|p| norm.ngrams_of([p.title.as_str(), p.abstract_text.as_str()]))
                    .collect();
                let t = &cfg.text;
                let filter = TaskFilter::load(
                    norm,
                    t.task_verbs.as_deref(),
                    t.task_nouns.as_deref(),
                    t.task_pairs.as_deref(),
                    t.task_synonyms.as_deref(),
                )?;
                let opts = ExtractOptions {
                    max_gap: t.max_gap,
                    include_prep_objects: t.include_prep_objects,
                };
                let input = ScoringInput::prepare(
                    corpus,
                    &ing.taxonomy,
                    &ai_flags,
                    &paper_ngrams,
                    &ai_patents,
                    norm,
                    &opts,
                    &filter,
                );
                let p = Prepared { paper_ngrams, input };
                if cfg.run.cache {
                    write_atomic(&cache_path, &serde_json::to_vec(&p)?)?;
                }
                p
            }
        };
        let Prepared { paper_ngrams, input } = prepared;

        let lexicon = derive_ai_ngram_lexicon(
            paper_ngrams
                .iter()
                .zip(&ai_flags)
                .filter(|(_, &a)| a)
                .map(|(g, _)| g.as_slice()),
            &ing.taxonomy,
        );
        let ai_using = mark_ai_using(&paper_ngrams, &lexicon);
        let ai_any: Vec<bool> = ai_flags.iter().zip(&ai_using).map(|(a, b)| *a || *b).collect();
        let hits = hit_flags(corpus, &ing.graph);

        let c = &mut self.report.counts;
        c.insert("ai_papers".into(), ai_set.len());
        c.insert("ai_using_papers".into(), ai_using.iter().filter(|x| **x).count());
        c.insert("ai_patents".into(), patent_set.len());
        c.insert("ai_ngrams".into(), lexicon.len());
        c.insert("hit_papers".into(), hits.iter().filter(|x| **x).count());

        if let Some(path) = &cfg.inputs.manual_labels {
            let labels = read_manual_labels(path)?;
            let ids: Vec<String> = labels.keys().cloned().collect();
            let flagged = |id: &str| corpus.index_of(id).is_some_and(|i| ai_using[i]);
            let flagged_ids: Vec<String> = ids.iter().filter(|id| flagged(id)).cloned().collect();
            let positive_ids: Vec<String> = ids.iter().filter(|id| labels[id.as_str()]).cloned().collect();
            let ps = sample_ids(&flagged_ids, 100, cfg.run.seed);
            let rs = sample_ids(&positive_ids, 100, cfg.run.seed);
            let pc = precision_recall(&ps, flagged, &labels)?;
            let rc = precision_recall(&rs, flagged, &labels)?;
            self.report.precision_recall = Some(PrecisionRecall {
                precision_sample: ps.len(),
                recall_sample: rs.len(),
                precision: pc.precision(),
                recall: rc.recall(),
                precision_confusion: pc,
                recall_confusion: rc,
            });
        }

        let rows = corpus.papers().iter().enumerate().map(|(i, p)| {
            vec![
                p.id.clone(),
                s(p.year),
                p.discipline.clone(),
                p.field.clone(),
                b01(ai_flags[i]),
                b01(ai_using[i]),
                b01(ai_any[i]),
                b01(hits[i]),
            ]
        });
        self.emit.csv(
            "labels.csv",
            &[
                "id",
                "year",
                "discipline",
                "field",
                "ai_label",
                "ai_using",
                "ai_any",
                "hit",
            ],
            rows.collect::<Vec<_>>(),
        )?;
        self.emit.csv(
            "lexicon.csv",
            &["ngram", "ai_papers"],
            lexicon
                .terms
                .iter()
                .map(|(g, n)| vec![g.to_string(), s(n)])
                .collect::<Vec<_>>(),
        )?;
        self.emit.csv(
            "patent_labels.csv",
            &["id", "year", "ai"],
            ing.patents
                .iter()
                .map(|p| vec![p.id.clone(), s(p.year), b01(patent_set.contains(&p.id))])
                .collect::<Vec<_>>(),
        )?;
        let mut cells: BTreeMap<(&str, i32), (usize, usize)> = BTreeMap::new();
        for (i, p) in corpus.papers().iter().enumerate() {
            let e = cells.entry((p.field.as_str(), p.year)).or_insert((0, 0));
            e.0 += 1;
            e.1 += usize::from(hits[i]);
        }
        self.emit.csv(
            "hits.csv",
            &["field", "year", "papers", "hits"],
            cells
                .into_iter()
                .map(|((f, y), (n, h))| vec![f.to_string(), s(y), s(n), s(h)])
                .collect::<Vec<_>>(),
        )?;
        Ok(Labeled {
            ai_using,
            ai_any,
            hits,
            lexicon,
            input,
        })
    }

    fn primary(&self) -> [Measure; 2] {
        [
            Measure::Direct(self.cfg.scoring.direct_measure),
            Measure::Potential(self.cfg.scoring.potential_measure),
        ]
    }

    fn score(&mut self, ing: &Ingested, lab: &Labeled) -> Result<ScoreTable> {
        let cfg = self.cfg;
        let settings = ScoringSettings {
            start_year: cfg.scoring.start_year,
            unique_per_doc: cfg.scoring.unique_per_doc,
            eq2_support: cfg.scoring.eq2_support,
            shards: cfg.run.shards,
        };
        let engine = ScoreEngine::new(&lab.input, &lab.lexicon, settings);
        let years: Vec<i32> = (cfg.run.from_year..=cfg.run.to_year).collect();
        let by_year = engine.score_years(&years);
        let table = ScoreTable::from_cells(&lab.input, &by_year);
        self.report.counts.insert(
            "null_score_cells".into(),
            table.iter().filter(|(_, v)| v.is_none()).count(),
        );
        self.emit.csv(
            "scores.csv",
            &["level", "entity", "year", "framework", "measure", "score"],
            table
                .iter()
                .map(|(k, v)| {
                    vec![
                        k.level.name().to_string(),
                        k.entity.clone(),
                        s(k.year),
                        k.measure.framework().name().to_string(),
                        k.measure.name().to_string(),
                        opt(v),
                    ]
                })
                .collect::<Vec<_>>(),
        )?;

        let parent = &ing.taxonomy.fields;
        let mut rows = Vec::new();
        for &y in &years {
            for m in self.primary() {
                match percentile_rank(&table.slice(Level::Field, y, m)) {
                    Ok(p) => {
                        for (f, v) in p {
                            rows.push(vec![
                                s(y),
                                parent[&f].clone(),
                                f,
                                m.framework().name().to_string(),
                                m.name().to_string(),
                                num(v),
                            ]);
                        }
                    }
                    Err(e) => self.warn(format!("percentiles for {y} {}: {e}", m.framework())),
                }
            }
        }
        self.emit.csv(
            "percentiles.csv",
            &["year", "discipline", "field", "framework", "measure", "percentile"],
            rows,
        )?;

        let to = cfg.run.to_year;
        let k = cfg.analysis.top_k;
        let mut top_rows = Vec::new();
        let mut overlap_rows = Vec::new();
        for d in &ing.taxonomy.disciplines {
            let fields: Vec<&str> = ing.taxonomy.fields_of(d).collect();
            let mut ranked: Vec<Vec<String>> = Vec::new();
            for m in self.primary() {
                let slice = table.slice(Level::Field, to, m);
                let mut xs: Vec<(&str, f64)> = fields
                    .iter()
                    .filter_map(|f| slice.get(*f).copied().flatten().map(|v| (*f, v)))
                    .collect();
                xs.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
                for (rank, (f, v)) in xs.iter().take(k).enumerate() {
                    top_rows.push(vec![
                        d.clone(),
                        s(to),
                        m.framework().name().to_string(),
                        s(rank + 1),
                        f.to_string(),
                        num(*v),
                    ]);
                }
                ranked.push(xs.iter().map(|(f, _)| f.to_string()).collect());
            }
            let overlap = top_k_overlap(&ranked[0], &ranked[1], k);
            let full = overlap == k.min(ranked[0].len()).min(ranked[1].len()) && overlap > 0;
            overlap_rows.push(vec![d.clone(), s(to), s(k), s(overlap), b01(full)]);
            if full {
                *self.report.top_overlap_full.entry("disciplines".into()).or_insert(0) += 1;
            }
        }
        self.report
            .top_overlap_full
            .insert("of".into(), ing.taxonomy.disciplines.len());
        self.emit.csv(
            "top_subfields.csv",
            &["discipline", "year", "framework", "rank", "field", "score"],
            top_rows,
        )?;
        self.emit.csv(
            "top_overlap.csv",
            &["discipline", "year", "k", "overlap", "full"],
            overlap_rows,
        )?;

        let mut dec_rows = Vec::new();
        if let Some(t1) = cfg.scoring.freeze_year {
            for m in self.primary() {
                let (decs, skipped) = decompose_all(&engine, &lab.input, Level::Discipline, m, t1, to)?;
                for d in decs {
                    dec_rows.push(vec![
                        d.entity.clone(),
                        d.framework.name().to_string(),
                        m.name().to_string(),
                        s(d.t1),
                        s(d.t2),
                        num(d.z),
                        num(d.y),
                        num(d.x),
                        num(d.z + d.y + d.x),
                    ]);
                }
                for e in skipped {
                    self.warn(format!(
                        "decomposition skipped for `{e}` ({}): undefined score",
                        m.framework()
                    ));
                }
            }
        }
        self.emit.csv(
            "decomposition.csv",
            &["entity", "framework", "measure", "t1", "t2", "z", "y", "x", "total"],
            dec_rows,
        )?;
        Ok(table)
    }

    fn analyze(&mut self, ing: &Ingested, lab: &Labeled, table: &ScoreTable) -> Result<Analysis> {
        let cfg = self.cfg;
        let corpus = &ing.corpus;
        let (from, to) = (cfg.run.from_year, cfg.run.to_year);

        let mut prem = Vec::new();
        let mut soc = Vec::new();
        for level in [Level::Discipline, Level::Field] {
            for r in citation_premium(corpus, level, &lab.ai_using, &lab.hits) {
                prem.push(vec![
                    level.name().to_string(),
                    r.entity,
                    s(r.ai_papers),
                    s(r.ai_hits),
                    s(r.non_ai_papers),
                    s(r.non_ai_hits),
                    opt(r.ai_hit_rate),
                    opt(r.non_ai_hit_rate),
                    opt(r.ratio),
                ]);
            }
            for r in outside_citation_share(corpus, &ing.graph, level, &lab.ai_using) {
                soc.push(vec![
                    level.name().to_string(),
                    r.entity,
                    s(r.ai_citations),
                    s(r.ai_outside),
                    s(r.non_ai_citations),
                    s(r.non_ai_outside),
                    opt(r.ai_soc),
                    opt(r.non_ai_soc),
                    opt(r.ratio),
                ]);
            }
        }
        self.emit.csv(
            "premium.csv",
            &[
                "level",
                "entity",
                "ai_papers",
                "ai_hits",
                "non_ai_papers",
                "non_ai_hits",
                "ai_hit_rate",
                "non_ai_hit_rate",
                "ratio",
            ],
            prem,
        )?;
        self.emit.csv(
            "soc.csv",
            &[
                "level",
                "entity",
                "ai_citations",
                "ai_outside",
                "non_ai_citations",
                "non_ai_outside",
                "ai_soc",
                "non_ai_soc",
                "ratio",
            ],
            soc,
        )?;

        // collaboration
        let window = cfg.analysis.collab_window;
        let index = AuthorIndex::build(corpus, &lab.ai_any, ing.labels.as_ref(), cfg.run.seed, window);
        self.report.counts.insert("authors".into(), index.len());
        let cs = ing.taxonomy.cs_discipline.clone();
        let settings = CollabSettings {
            window,
            min_authors: 2,
            min_ai_papers: cfg.analysis.min_ai_papers,
        };
        let domain: Vec<&String> = ing.taxonomy.disciplines.iter().filter(|d| **d != cs).collect();
        let mut collab_rows = Vec::new();
        let mut series_rows = Vec::new();
        let mut disc_share: BTreeMap<String, Option<f64>> = BTreeMap::new();
        let mut field_share: BTreeMap<String, Option<f64>> = BTreeMap::new();
        let mut leading_rows = Vec::new();
        for mode in AiAuthorMode::ALL {
            let roles = Roles {
                index: &index,
                cs_discipline: &cs,
                mode,
                min_ai_papers: cfg.analysis.min_ai_papers,
            };
            let classified = classify_all(corpus, &lab.ai_any, &roles, &settings);
            let mut by_disc: BTreeMap<&str, TypeCounts> = BTreeMap::new();
            let mut by_field: BTreeMap<&str, TypeCounts> = BTreeMap::new();
            for &(i, t) in &classified {
                let p = corpus.get(i);
                by_disc.entry(p.discipline.as_str()).or_default().add(t);
                by_field.entry(p.field.as_str()).or_default().add(t);
            }
            for d in &domain {
                let c = by_disc.get(d.as_str()).cloned().unwrap_or_default();
                let mut row = vec![
                    (*d).clone(),
                    mode.name().to_string(),
                    s(window.0),
                    s(window.1),
                    s(c.total()),
                ];
                row.extend(CoauthorType::ALL.iter().map(|t| s(c.get(*t))));
                row.extend(CoauthorType::ALL.iter().map(|t| opt(c.share(*t))));
                collab_rows.push(row);
                if mode == AiAuthorMode::CsPrimary {
                    disc_share.insert((*d).clone(), c.share(CoauthorType::DomainCs));
                }
                for pt in collab_share_series(corpus, &classified, d, (from, to)) {
                    series_rows.push(vec![
                        (*d).clone(),
                        mode.name().to_string(),
                        s(pt.year),
                        s(pt.papers),
                        s(pt.domain_cs),
                        opt(pt.share),
                        opt(pt.smoothed),
                    ]);
                }
            }
            if mode == AiAuthorMode::CsPrimary {
                for (f, parent) in &ing.taxonomy.fields {
                    if *parent != cs {
                        field_share.insert(
                            f.clone(),
                            by_field.get(f.as_str()).and_then(|c| c.share(CoauthorType::DomainCs)),
                        );
                    }
                }
            }
            for metric in LeaderMetric::ALL {
                for r in leading_probability(corpus, &roles, &lab.hits, metric) {
                    leading_rows.push(vec![
                        mode.name().to_string(),
                        r.discipline,
                        metric.name().to_string(),
                        r.stratum_kind,
                        r.stratum,
                        s(r.authors),
                        s(r.leaders),
                        s(r.collab_authors),
                        s(r.collab_leaders),
                        opt(r.p_leader_collab),
                        opt(r.p_leader_noncollab),
                        b01(r.low_n),
                    ]);
                }
            }
        }
        let mut collab_header = vec!["discipline", "mode", "from_year", "to_year", "papers"];
        collab_header.extend(CoauthorType::ALL.iter().map(|t| t.name()));
        collab_header.extend(["share_domain_cs", "share_domain_sole", "share_cs_sole", "share_others"]);
        self.emit.csv("collab.csv", &collab_header, collab_rows)?;
        self.emit.csv(
            "collab_series.csv",
            &["discipline", "mode", "year", "papers", "domain_cs", "share", "smoothed"],
            series_rows,
        )?;

        // education
        let mut edu_rows = Vec::new();
        let mut edu_level: BTreeMap<String, Option<f64>> = BTreeMap::new();
        if !ing.syllabi.is_empty() {
            let names = cfg
                .inputs
                .syllabus_name_crosswalk
                .as_deref()
                .map(|p| CrosswalkTable::load(p, "syllabus field names", KeyKind::Name, &ing.taxonomy))
                .transpose()?;
            let cips = cfg
                .inputs
                .syllabus_cip_crosswalk
                .as_deref()
                .map(|p| CrosswalkTable::load(p, "syllabus CIP codes", KeyKind::Cip, &ing.taxonomy))
                .transpose()?;
            let mut discipline_of = BTreeMap::new();
            for sy in &ing.syllabi {
                if let Some(d) = classify_syllabus(
                    sy.field_name.as_deref(),
                    sy.cip_code.as_deref(),
                    names.as_ref(),
                    cips.as_ref(),
                ) {
                    discipline_of.insert(sy.id.clone(), d.to_string());
                }
            }
            let unclassified = ing.syllabi.len() - discipline_of.len();
            self.report.counts.insert("syllabi_unclassified".into(), unclassified);
            let (links, stats) = match_syllabus_references(&ing.syllabi, corpus);
            self.report.syllabus_matching = Some(stats);
            let disciplines: Vec<String> = ing.taxonomy.disciplines.iter().cloned().collect();
            for filter in EducationFilter::presets() {
                for r in education_levels(&ing.syllabi, &discipline_of, &links, &lab.ai_any, &filter, &disciplines) {
                    if filter == EducationFilter::default_filter() {
                        edu_level.insert(r.discipline.clone(), r.citation_share);
                    }
                    edu_rows.push(vec![
                        r.discipline,
                        r.filter,
                        s(r.syllabi),
                        s(r.links),
                        s(r.ai_links),
                        s(r.ai_syllabi),
                        opt(r.citation_share),
                        opt(r.syllabus_share),
                    ]);
                }
            }
        }
        self.emit.csv(
            "education.csv",
            &[
                "discipline",
                "filter",
                "syllabi",
                "links",
                "ai_links",
                "ai_syllabi",
                "citation_share",
                "syllabus_share",
            ],
            edu_rows,
        )?;

        // demographics
        let demo = match &cfg.inputs.demographics {
            Some(p) => {
                let cw = cfg
                    .inputs
                    .demographics_crosswalk
                    .as_deref()
                    .map(|c| CrosswalkTable::load(c, "survey disciplines", KeyKind::Name, &ing.taxonomy))
                    .transpose()?;
                let t = DemographicTable::load(p, &ing.taxonomy, cw.as_ref())?;
                for u in t.unmapped.clone() {
                    self.note(format!("survey discipline `{u}` has no mapping; rows dropped"));
                }
                Some(t)
            }
            None => None,
        };
        let mut demo_rows = Vec::new();
        let mut share_rows = Vec::new();
        if let Some(t) = &demo {
            for m in self.primary() {
                for y in from..=to {
                    let scores = table.slice(Level::Discipline, y, m);
                    for g in DemographicGroup::ALL {
                        for variant in [WeightingVariant::AcrossDisciplines, WeightingVariant::WithinShare] {
                            let gs = group_weighted_score(&scores, t, g, variant);
                            if y == to
                                && variant == WeightingVariant::AcrossDisciplines
                                && g == DemographicGroup::Woman
                                && !gs.excluded.is_empty()
                            {
                                self.warn(format!(
                                    "{} weighting in {y} excludes disciplines lacking a score or count: {}",
                                    m.framework(),
                                    gs.excluded.join(", ")
                                ));
                            }
                            demo_rows.push(vec![
                                g.name().to_string(),
                                m.framework().name().to_string(),
                                m.name().to_string(),
                                s(y),
                                variant.name().to_string(),
                                opt(gs.score),
                                s(gs.used.len()),
                            ]);
                        }
                    }
                }
            }
            let [dm, pm] = self.primary();
            for d in t.disciplines() {
                for g in DemographicGroup::ALL {
                    share_rows.push(vec![
                        d.to_string(),
                        g.name().to_string(),
                        opt(t.count(d, g)),
                        opt(within_share(t, d, g)),
                        opt(table.get(Level::Discipline, d, to, dm)),
                        opt(table.get(Level::Discipline, d, to, pm)),
                    ]);
                }
            }
        }
        self.emit.csv(
            "demographics_scores.csv",
            &[
                "group",
                "framework",
                "measure",
                "year",
                "variant",
                "score",
                "disciplines",
            ],
            demo_rows,
        )?;
        self.emit.csv(
            "demographics_shares.csv",
            &["discipline", "group", "count", "share", "direct", "potential"],
            share_rows,
        )?;

        // field grouping
        let [dm, pm] = self.primary();
        let mut groupings: Vec<FieldGrouping> = Vec::new();
        for &y in &cfg.analysis.grouping_years {
            match field_grouping(
                &table.slice(Level::Field, y, dm),
                &table.slice(Level::Field, y, pm),
                y,
                cfg.analysis.grouping_quantile,
            ) {
                Ok(g) => groupings.push(g),
                Err(e) => self.warn(format!("field grouping for {y}: {e}")),
            }
        }
        let mut g_rows = Vec::new();
        for g in &groupings {
            for r in &g.rows {
                g_rows.push(vec![
                    s(g.year),
                    ing.taxonomy.fields[&r.field].clone(),
                    r.field.clone(),
                    num(r.direct),
                    num(r.potential),
                    num(r.predicted),
                    num(r.residual),
                    r.group.name().to_string(),
                ]);
            }
        }
        self.emit.csv(
            "grouping.csv",
            &[
                "year",
                "discipline",
                "field",
                "direct",
                "potential",
                "predicted",
                "residual",
                "group",
            ],
            g_rows,
        )?;
        let mut m_rows = Vec::new();
        if let (Some(a), Some(b)) = (groupings.first(), groupings.last()) {
            if groupings.len() >= 2 {
                for r in momentum_between(a, b) {
                    m_rows.push(vec![
                        r.field,
                        s(a.year),
                        s(b.year),
                        r.from.name().to_string(),
                        r.to.name().to_string(),
                        r.momentum.name().to_string(),
                    ]);
                }
            }
        }
        self.emit.csv(
            "momentum.csv",
            &["field", "year_from", "year_to", "group_from", "group_to", "momentum"],
            m_rows,
        )?;
        if let Some(g) = groupings.last() {
            let edu_by_field: BTreeMap<String, Option<f64>> = ing
                .taxonomy
                .fields
                .iter()
                .map(|(f, d)| (f.clone(), edu_level.get(d).copied().flatten()))
                .collect();
            for (name, values) in [("domain_cs_share", &field_share), ("education_level", &edu_by_field)] {
                let t = self.group_test(name, g, values);
                self.report.grouping_tests.push(t);
            }
        }

        // careers
        let mut c_rows = Vec::new();
        match career_hit_profile(corpus, &index, &lab.ai_any, &lab.hits, &cfg.analysis.career) {
            Some(p) => {
                self.report.counts.insert("career_cohort".into(), p.cohort.len());
                for r in p.rows {
                    c_rows.push(vec![
                        r.stratum_kind,
                        r.stratum,
                        r.bin.label(),
                        opt(r.mean_hit_rate),
                        s(r.authors),
                    ]);
                }
            }
            None => self.warn("career cohort is empty; no career profile".into()),
        }
        self.emit.csv(
            "careers.csv",
            &["stratum_kind", "stratum", "bin", "mean_hit_rate", "authors"],
            c_rows,
        )?;
        self.emit.csv(
            "leading.csv",
            &[
                "mode",
                "discipline",
                "metric",
                "stratum_kind",
                "stratum",
                "authors",
                "leaders",
                "collab_authors",
                "collab_leaders",
                "p_leader_collab",
                "p_leader_noncollab",
                "low_n",
            ],
            leading_rows,
        )?;
        Ok(Analysis {
            disc_share,
            demo,
            groupings,
        })
    }

    fn group_test(&self, name: &str, g: &FieldGrouping, values: &BTreeMap<String, Option<f64>>) -> GroupTest {
        let pick = |grp: FieldGroup| -> Vec<f64> {
            g.rows
                .iter()
                .filter(|r| r.group == grp)
                .filter_map(|r| values.get(&r.field).copied().flatten())
                .collect()
        };
        let a = pick(FieldGroup::HigherDirect);
        let b = pick(FieldGroup::HigherPotential);
        let mean = |x: &[f64]| (!x.is_empty()).then(|| sciai_core::stats::mean(x));
        let test = if self.cfg.analysis.pooled_t { "pooled" } else { "welch" };
        let res = if self.cfg.analysis.pooled_t {
            pooled_ttest(&a, &b)
        } else {
            welch_ttest(&a, &b)
        };
        let (t, df, p, note) = match res {
            Ok(r) => (Some(r.t), Some(r.df), Some(r.p_two_sided), None),
            Err(e) => (None, None, None, Some(e.to_string())),
        };
        GroupTest {
            variable: name.to_string(),
            year: g.year,
            test: test.to_string(),
            n_higher_direct: a.len(),
            n_higher_potential: b.len(),
            mean_higher_direct: mean(&a),
            mean_higher_potential: mean(&b),
            t,
            df,
            p_two_sided: p,
            note,
        }
    }

    fn final_report(&mut self, ing: &Ingested, table: &ScoreTable, an: &Analysis) -> Result<()> {
        let cfg = self.cfg;
        let (from, to) = (cfg.run.from_year, cfg.run.to_year);
        let [dm, pm] = self.primary();
        for (m, rel) in [(dm, "plots/direct_series.csv"), (pm, "plots/potential_series.csv")] {
            let mut rows = Vec::new();
            for d in &ing.taxonomy.disciplines {
                for y in from..=to {
                    if let Some(v) = table.get(Level::Discipline, d, y, m) {
                        rows.push(vec![d.clone(), s(y), num(v)]);
                    }
                }
            }
            self.emit.csv(rel, &["discipline", "year", "score"], rows)?;
        }

        let pd = percentile_rank(&table.slice(Level::Field, to, dm)).unwrap_or_default();
        let pp = percentile_rank(&table.slice(Level::Field, to, pm)).unwrap_or_default();
        let group_of: BTreeMap<&str, FieldGroup> = an
            .groupings
            .iter()
            .find(|g| g.year == to)
            .map(|g| g.rows.iter().map(|r| (r.field.as_str(), r.group)).collect())
            .unwrap_or_default();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        let mut rows = Vec::new();
        for (f, d) in &ing.taxonomy.fields {
            if let (Some(a), Some(b)) = (pd.get(f), pp.get(f)) {
                xs.push(*a);
                ys.push(*b);
                rows.push(vec![
                    s(to),
                    d.clone(),
                    f.clone(),
                    num(*a),
                    num(*b),
                    group_of
                        .get(f.as_str())
                        .map(|g| g.name().to_string())
                        .unwrap_or_default(),
                ]);
            }
        }
        self.emit.csv(
            "plots/field_percentiles.csv",
            &[
                "year",
                "discipline",
                "field",
                "direct_percentile",
                "potential_percentile",
                "group",
            ],
            rows,
        )?;
        self.report
            .correlations
            .insert("field_percentiles".into(), correlation_entry(&xs, &ys));

        let mut rows = Vec::new();
        let mut pairs: BTreeMap<&str, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
        for (d, share) in &an.disc_share {
            let dv = table.get(Level::Discipline, d, to, dm);
            let pv = table.get(Level::Discipline, d, to, pm);
            rows.push(vec![d.clone(), opt(*share), opt(dv), opt(pv)]);
            for (key, v) in [("collab_vs_direct", dv), ("collab_vs_potential", pv)] {
                if let (Some(sh), Some(v)) = (share, v) {
                    let e = pairs.entry(key).or_default();
                    e.0.push(*sh);
                    e.1.push(v);
                }
            }
        }
        self.emit.csv(
            "plots/collab_vs_impact.csv",
            &["discipline", "domain_cs_share", "direct", "potential"],
            rows,
        )?;

        let mut rows = Vec::new();
        if let Some(t) = &an.demo {
            for d in t.disciplines() {
                let w = within_share(t, d, DemographicGroup::Woman);
                let u = within_share(t, d, DemographicGroup::Urm);
                let dv = table.get(Level::Discipline, d, to, dm);
                let pv = table.get(Level::Discipline, d, to, pm);
                rows.push(vec![d.to_string(), opt(w), opt(u), opt(dv), opt(pv)]);
                for (key, sh, v) in [
                    ("women_share_vs_direct", w, dv),
                    ("women_share_vs_potential", w, pv),
                    ("urm_share_vs_direct", u, dv),
                    ("urm_share_vs_potential", u, pv),
                ] {
                    if let (Some(sh), Some(v)) = (sh, v) {
                        let e = pairs.entry(key).or_default();
                        e.0.push(sh);
                        e.1.push(v);
                    }
                }
            }
        }
        self.emit.csv(
            "plots/demographics_vs_impact.csv",
            &["discipline", "women_share", "urm_share", "direct", "potential"],
            rows,
        )?;
        for key in [
            "collab_vs_direct",
            "collab_vs_potential",
            "women_share_vs_direct",
            "women_share_vs_potential",
            "urm_share_vs_direct",
            "urm_share_vs_potential",
        ] {
            let (x, y) = pairs.remove(key).unwrap_or_default();
            self.report.correlations.insert(key.into(), correlation_entry(&x, &y));
        }

        self.report.replication = replication_checks(cfg.inputs.replication_dir.as_deref())?;
        Ok(())
    }
}

struct Analysis {
    disc_share: BTreeMap<String, Option<f64>>,
    demo: Option<DemographicTable>,
    groupings: Vec<FieldGrouping>,
}
